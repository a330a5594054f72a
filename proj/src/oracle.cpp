#include "shgh/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "shgh/cremona.hpp"
#include "shgh/errors.hpp"
#include "shgh/primes.hpp"
#include "shgh/witness.hpp"

namespace shgh {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// platform-independent uniform draw in [0, n)
u32 draw(std::mt19937_64& g, u32 n) {
    const u64 lim = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % n;
    for (;;) {
        u64 x = g();
        if (x < lim) return static_cast<u32>(x % n);
    }
}

long long to_ll(const Int& v) {
    if (v > Int(std::numeric_limits<int>::max()) || v < Int(std::numeric_limits<int>::min()))
        throw BoundExceeded("value too large for a condition matrix: " + v.str());
    return static_cast<long long>(v);
}

struct Plan {
    int d = 0;
    u32 p = 0;
    std::vector<int> mult;                   // cfg order
    std::vector<std::vector<std::size_t>> kids;
    std::vector<int> need;                   // Taylor orders needed at each point
    std::map<std::string, FramePos> frame;
};

Plan make_plan(const LinearSystem& s, u32 p, bool use_frame) {
    Plan pl;
    const auto& cfg = s.cfg;
    pl.d = static_cast<int>(to_ll(s.cls.degree));
    if (pl.d < 0) throw ValidationError("condition matrix needs degree >= 0");
    if (!is_prime_u64(p)) throw ValidationError("modulus " + std::to_string(p) + " is not prime");
    if (static_cast<long long>(p) <= pl.d)
        throw FieldTooSmall("prime " + std::to_string(p) + " must exceed degree " + std::to_string(pl.d));
    check_labels(s.cls, cfg);
    const std::size_t n = cfg.size();
    pl.mult.resize(n);
    pl.kids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pt = cfg.points()[i];
        long long m = to_ll(s.cls.mult(pt.label));
        if (m < 0) throw InvalidCluster("negative multiplicity at " + pt.label);
        pl.mult[i] = static_cast<int>(m);
        if (pt.parent) pl.kids[cfg.index_of(*pt.parent)].push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c : pl.kids[i])
            if (pl.mult[c] > 0 && pl.mult[i] <= 0)
                throw InvalidCluster("point " + cfg.points()[c].label + " has multiplicity " +
                                     std::to_string(pl.mult[c]) + " over a parent of multiplicity " +
                                     std::to_string(pl.mult[i]));
    pl.need.assign(n, 0);
    std::function<int(std::size_t)> need = [&](std::size_t i) {
        int r = pl.mult[i];
        for (std::size_t c : pl.kids[i]) {
            int nc = need(c);
            if (nc > 0) r = std::max(r, nc + pl.mult[i]);
        }
        return pl.need[i] = r;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (!cfg.points()[i].parent) need(i);
    if (use_frame) {
        const FramePos order[3] = {FramePos::Origin, FramePos::XInfinity, FramePos::YInfinity};
        int used = 0;
        for (std::size_t i = 0; i < n && used < 3; ++i) {
            const auto& pt = cfg.points()[i];
            if (pt.parent || !pl.kids[i].empty() || pl.mult[i] <= 0) continue;
            pl.frame[pt.label] = order[used++];
        }
    }
    return pl;
}

// column of the frame monomial hit by local Taylor index (i, j); npos when outside degree d
std::size_t frame_column(FramePos f, int d, int i, int j) {
    if (i + j > d) return static_cast<std::size_t>(-1);
    switch (f) {
        case FramePos::Origin: return column_index(d, i, j);
        case FramePos::XInfinity: return column_index(d, d - i - j, i);
        case FramePos::YInfinity: return column_index(d, i, d - i - j);
    }
    return static_cast<std::size_t>(-1);
}

// T[i][a] = C(a, i) x^(a-i) mod p, for i < rows, a <= d
std::vector<std::vector<u32>> taylor_table(int d, int rows, u32 x, u32 p) {
    std::vector<u32> pw(d + 1);
    pw[0] = 1 % p;
    for (int a = 1; a <= d; ++a) pw[a] = mulmod(pw[a - 1], x, p);
    std::vector<std::vector<u32>> T(rows, std::vector<u32>(d + 1, 0));
    // Pascal row by row: C(a, i) for fixed a
    std::vector<u32> binom(rows, 0);
    for (int a = 0; a <= d; ++a) {
        for (int i = std::min(a, rows - 1); i >= 1; --i) {
            u64 v = static_cast<u64>(binom[i]) + binom[i - 1];
            binom[i] = static_cast<u32>(v % p);
        }
        if (rows > 0) binom[0] = 1 % p;
        for (int i = 0; i < rows && i <= a; ++i) T[i][a] = mulmod(binom[i], pw[a - i], p);
    }
    return T;
}

std::vector<std::vector<u32>> binomials(int n, u32 p) {
    std::vector<std::vector<u32>> C(n + 1, std::vector<u32>(n + 1, 0));
    for (int a = 0; a <= n; ++a) {
        C[a][0] = 1 % p;
        for (int i = 1; i <= a; ++i) C[a][i] = static_cast<u32>((static_cast<u64>(C[a - 1][i - 1]) + C[a - 1][i]) % p);
    }
    return C;
}

struct ColAB {
    int a, b;
};

std::vector<ColAB> all_columns(int d) {
    std::vector<ColAB> v;
    v.reserve(static_cast<std::size_t>(d + 1) * (d + 2) / 2);
    for (int t = 0; t <= d; ++t)
        for (int b = 0; b <= t; ++b) v.push_back({t - b, b});
    return v;
}

// Every condition row of one cluster tree over all columns.
// Forms g[(s,t)] are linear forms in the curve coefficients giving the
// coefficient of u^s v^t in the local expansion at the point.
struct FullRow {
    RowOrigin origin;
    std::vector<u32> v;
};

void cluster_rows(const LinearSystem& s, const Plan& pl, const ConfigFp& cf, std::size_t root,
                  const std::vector<ColAB>& cols, std::vector<FullRow>& out) {
    const u32 p = pl.p;
    const int d = pl.d;
    const auto& pts = s.cfg.points();
    const std::size_t nc = cols.size();
    using Forms = std::vector<std::vector<std::vector<u32>>>;  // [s][t] -> vector (s+t < need)

    auto it = cf.coords.find(pts[root].label);
    if (it == cf.coords.end()) throw ConfigurationMismatch("no coordinates for " + pts[root].label);
    const int need = pl.need[root];
    auto X = taylor_table(d, need, it->second.first, p);
    auto Y = taylor_table(d, need, it->second.second, p);
    Forms g(need);
    for (int a = 0; a < need; ++a) {
        g[a].resize(need - a);
        for (int b = 0; a + b < need; ++b) {
            auto& v = g[a][b];
            v.resize(nc);
            for (std::size_t k = 0; k < nc; ++k) v[k] = mulmod(X[a][cols[k].a], Y[b][cols[k].b], p);
        }
    }
    const int cmax = std::max(need, 1);
    auto C = binomials(cmax, p);

    std::function<void(std::size_t, const Forms&)> visit = [&](std::size_t i, const Forms& f) {
        const int m = pl.mult[i];
        for (int t = 0; t < m; ++t)
            for (int j = 0; j <= t; ++j) out.push_back({RowOrigin{pts[i].label, t - j, j, !!pts[i].parent}, f[t - j][j]});
        for (std::size_t c : pl.kids[i]) {
            const int nc_need = pl.need[c];
            if (nc_need == 0) continue;
            auto dit = cf.directions.find(pts[c].label);
            if (dit == cf.directions.end()) throw ConfigurationMismatch("no direction for " + pts[c].label);
            const u32 w0 = dit->second;
            std::vector<u32> wp(cmax + 1);
            wp[0] = 1 % p;
            for (int e = 1; e <= cmax; ++e) wp[e] = mulmod(wp[e - 1], w0, p);
            // v = u (w0 + w), divide by u^m:  h[q][r] = sum_t C(t,r) w0^(t-r) g[q+m-t][t]
            Forms h(nc_need);
            for (int q = 0; q < nc_need; ++q) {
                h[q].resize(nc_need - q);
                for (int r = 0; q + r < nc_need; ++r) {
                    std::vector<u64> acc(nc, 0);
                    for (int t = r; t <= q + m; ++t) {
                        u32 coef = mulmod(C[t][r], wp[t - r], p);
                        if (!coef) continue;
                        const auto& src = f[q + m - t][t];
                        for (std::size_t k = 0; k < nc; ++k) acc[k] = (acc[k] + static_cast<u64>(coef) * src[k]) % p;
                    }
                    h[q][r].assign(acc.begin(), acc.end());
                }
            }
            visit(c, h);
        }
    };
    visit(root, g);
}

}  // namespace

std::size_t column_index(int d, int a, int b) {
    (void)d;
    const std::size_t t = static_cast<std::size_t>(a + b);
    return t * (t + 1) / 2 + static_cast<std::size_t>(b);
}

ConfigFp sample_config(const Configuration& cfg, std::uint32_t p, std::uint64_t seed) {
    if (p < 2) throw SamplingError("field too small to sample points");
    ConfigFp cf;
    cf.p = p;
    cf.seed = seed;
    std::mt19937_64 g(seed);
    std::set<std::pair<u32, u32>> used{{0u, 0u}};  // origin kept for the frame
    std::map<std::string, std::set<u32>> sib;
    constexpr int kTries = 1000;
    for (const auto& pt : cfg.points()) {
        if (!pt.parent) {
            int tries = 0;
            for (;;) {
                std::pair<u32, u32> xy{draw(g, p), draw(g, p)};
                if (used.insert(xy).second) {
                    cf.coords[pt.label] = xy;
                    break;
                }
                if (++tries > kTries) throw SamplingError("cannot find distinct points over F_" + std::to_string(p));
            }
        } else {
            auto& s = sib[*pt.parent];
            int tries = 0;
            for (;;) {
                u32 w = draw(g, p);
                if (s.insert(w).second) {
                    cf.directions[pt.label] = w;
                    break;
                }
                if (++tries > kTries)
                    throw SamplingError("cannot find distinct directions at " + *pt.parent + " over F_" + std::to_string(p));
            }
        }
    }
    return cf;
}

std::vector<std::vector<std::uint32_t>> full_rows(const LinearSystem& s, const ConfigFp& cf, bool frame) {
    Plan pl = make_plan(s, cf.p, frame);
    pl.p = cf.p;
    const auto cols = all_columns(pl.d);
    std::vector<std::vector<u32>> rows;
    const auto& pts = s.cfg.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto f = pl.frame.find(pts[i].label);
        if (f == pl.frame.end()) continue;
        for (int t = 0; t < pl.mult[i]; ++t)
            for (int j = 0; j <= t; ++j) {
                std::vector<u32> r(cols.size(), 0);
                std::size_t c = frame_column(f->second, pl.d, t - j, j);
                if (c != static_cast<std::size_t>(-1)) r[c] = 1;
                rows.push_back(std::move(r));
            }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].parent || pl.frame.count(pts[i].label)) continue;
        std::vector<FullRow> out;
        cluster_rows(s, pl, cf, i, cols, out);
        for (auto& r : out) rows.push_back(std::move(r.v));
    }
    return rows;
}

ConditionMatrix build_matrix(const LinearSystem& s, const ConfigFp& cf, const BuildOptions& opt) {
    Plan pl = make_plan(s, cf.p, opt.frame);
    pl.p = cf.p;
    const u32 p = cf.p;
    const int d = pl.d;
    const auto cols = all_columns(d);
    const auto& pts = s.cfg.points();

    ConditionMatrix M;
    M.d = d;
    M.p = p;
    M.ncols = cols.size();
    M.frame = pl.frame;

    std::size_t nrows = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) nrows += static_cast<std::size_t>(pl.mult[i]) * (pl.mult[i] + 1) / 2;
    M.nrows = nrows;

    std::size_t frame_rows = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto f = pl.frame.find(pts[i].label);
        if (f == pl.frame.end()) continue;
        for (int t = 0; t < pl.mult[i]; ++t)
            for (int j = 0; j <= t; ++j) {
                M.provenance.push_back({pts[i].label, t - j, j, false});
                ++frame_rows;
                std::size_t c = frame_column(f->second, d, t - j, j);
                if (c != static_cast<std::size_t>(-1)) M.unit_cols.insert(c);
            }
    }
    std::vector<std::size_t> dense_of(cols.size(), static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < cols.size(); ++k)
        if (!M.unit_cols.count(k)) {
            dense_of[k] = M.dense_cols.size();
            M.dense_cols.push_back(k);
        }
    const std::size_t dn = M.dense_cols.size();
    M.dense = DenseMatrix(nrows - frame_rows, dn, opt.storage);

    std::size_t r = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].parent || pl.frame.count(pts[i].label)) continue;
        if (pl.need[i] == 0) continue;
        if (pl.kids[i].empty()) {
            // plain point: row (s,t) at column (a,b) is C(a,s) x^(a-s) C(b,t) y^(b-t)
            auto it = cf.coords.find(pts[i].label);
            if (it == cf.coords.end()) throw ConfigurationMismatch("no coordinates for " + pts[i].label);
            const int m = pl.mult[i];
            auto X = taylor_table(d, m, it->second.first, p);
            auto Y = taylor_table(d, m, it->second.second, p);
            for (int t = 0; t < m; ++t)
                for (int j = 0; j <= t; ++j) {
                    const auto& xr = X[t - j];
                    const auto& yr = Y[j];
                    u32* row = M.dense.row(r++);
                    for (std::size_t k = 0; k < dn; ++k) {
                        const auto& ab = cols[M.dense_cols[k]];
                        row[k] = mulmod(xr[ab.a], yr[ab.b], p);
                    }
                    M.provenance.push_back({pts[i].label, t - j, j, false});
                }
        } else {
            std::vector<FullRow> out;
            cluster_rows(s, pl, cf, i, cols, out);
            for (auto& fr : out) {
                u32* row = M.dense.row(r++);
                for (std::size_t k = 0; k < dn; ++k) row[k] = fr.v[M.dense_cols[k]];
                M.provenance.push_back(fr.origin);
            }
        }
    }
    if (r != M.dense.rows()) throw Error("internal: condition row count mismatch");
    return M;
}

std::size_t matrix_rank(ConditionMatrix& M, RankStats* stats) {
    std::size_t r = M.unit_cols.size();
    if (M.dense.rows() > 0 && M.dense.cols() > 0) r += rank_mod_p(M.dense, M.p, stats);
    return r;
}

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::CERTIFIED_NONSPECIAL: return "CERTIFIED-NONSPECIAL";
        case CertStatus::CERTIFIED_EMPTY: return "CERTIFIED-EMPTY";
        case CertStatus::UPPER_BOUND_ONLY: return "UPPER-BOUND-ONLY";
        case CertStatus::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

Witness run_trial(const LinearSystem& s, const OracleOptions& opt, std::uint64_t seed) {
    Witness w;
    w.p = opt.p;
    w.seed = seed;
    w.frame = opt.frame;
    const std::string key = witness_key(s, opt.p, seed, opt.frame);
    const std::string canon = canonical_system(s);
    if (!opt.cache_dir.empty() && opt.use_cache) {
        if (auto j = load_witness(opt.cache_dir, key); j && j->value("system", "") == canon) {
            w.rank = j->at("rank").get<std::size_t>();
            w.rows = j->at("rows").get<std::size_t>();
            w.cols = j->at("cols").get<std::size_t>();
            w.dim = j->at("dim").get<long long>();
            w.seconds = j->value("seconds", 0.0);
            w.cached = true;
            w.path = witness_path(opt.cache_dir, key);
            return w;
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    ConfigFp cf = sample_config(s.cfg, opt.p, seed);
    BuildOptions bo;
    bo.frame = opt.frame;
    bo.storage = opt.storage;
    ConditionMatrix M = build_matrix(s, cf, bo);
    RankStats st;
    w.rows = M.nrows;
    w.cols = M.ncols;
    w.rank = matrix_rank(M, &st);
    w.dim = static_cast<long long>(w.cols) - static_cast<long long>(w.rank) - 1;
    w.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!opt.cache_dir.empty()) {
        nlohmann::json j = {{"system", canon},      {"p", w.p},       {"seed", w.seed},
                            {"frame", w.frame},     {"rank", w.rank}, {"rows", w.rows},
                            {"cols", w.cols},       {"dim", w.dim},   {"seconds", w.seconds},
                            {"kernel", st.kernel},  {"dense_rows", M.dense.rows()},
                            {"dense_cols", M.dense.cols()}};
        w.path = store_witness(opt.cache_dir, key, j);
    }
    return w;
}

std::string shgh_note(const LinearSystem& s, long long dim) {
    try {
        DimResult r = shgh_dim(s.cls, s.cfg);
        std::ostringstream os;
        os << "computed dim " << dim << " is only an upper bound; SHGH predicts generic dim " << r.dim << " ("
           << to_string(r.status) << ")";
        return os.str();
    } catch (const std::exception&) {
        return "computed dim " + std::to_string(dim) + " is only an upper bound";
    }
}

}  // namespace

CertifiedDim generic_dim(const LinearSystem& s, const OracleOptions& opt) {
    if (opt.trials < 1) throw ValidationError("trials must be >= 1");
    CertifiedDim out;
    out.expected = expected_dim(s.cls);
    if (s.cls.degree < 0) {
        out.dim = -1;
        out.status = CertStatus::CERTIFIED_EMPTY;
        out.note = "negative degree";
        return out;
    }
    bool have = false;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        Witness w = run_trial(s, opt, opt.seed + t);
        out.witnesses.push_back(w);
        ++out.trials_used;
        if (!have || w.dim < out.best.dim) out.best = w, have = true;
        if (Int(out.best.dim) <= out.expected) break;
    }
    out.dim = out.best.dim;
    if (out.dim == out.expected)
        out.status = out.dim == -1 ? CertStatus::CERTIFIED_EMPTY : CertStatus::CERTIFIED_NONSPECIAL;
    else {
        out.status = CertStatus::UPPER_BOUND_ONLY;
        out.note = shgh_note(s, out.best.dim);
    }
    return out;
}

CertifiedDim certify_nonspecial(const LinearSystem& s, OracleOptions opt, const std::vector<std::uint32_t>& primes) {
    std::vector<u32> ps = primes.empty() ? std::vector<u32>{kPrime1, kPrime2} : primes;
    CertifiedDim acc;
    bool have = false;
    std::uint64_t seed = opt.seed;
    for (u32 p : ps) {
        opt.p = p;
        opt.seed = seed;
        CertifiedDim r = generic_dim(s, opt);
        seed += opt.trials;  // fresh seeds on the next prime
        for (auto& w : r.witnesses) acc.witnesses.push_back(w);
        acc.trials_used += r.trials_used;
        acc.expected = r.expected;
        if (r.witnesses.empty()) return r;  // negative degree
        if (!have || r.dim < acc.dim) {
            acc.dim = r.dim;
            acc.best = r.best;
            have = true;
        }
        if (r.status != CertStatus::UPPER_BOUND_ONLY) {
            acc.status = r.status;
            acc.note.clear();
            return acc;
        }
        acc.note = r.note;
    }
    acc.status = CertStatus::INCONCLUSIVE;
    acc.note = "expected dimension never reached after " + std::to_string(acc.trials_used) +
               " trials; " + acc.note;
    return acc;
}

}  // namespace shgh

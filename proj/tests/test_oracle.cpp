#include "doctest.h"

#include <filesystem>
#include <random>
#include <unistd.h>

#include "shgh/cremona.hpp"
#include "shgh/notation.hpp"
#include "shgh/oracle.hpp"
#include "shgh/primes.hpp"

using namespace shgh;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

namespace {

LinearSystem sys(const char* t) { return parse_system(t); }

// plain Gaussian elimination, independent of the blocked engine
std::size_t naive_rank(std::vector<std::vector<u32>> A, u32 p) {
    std::size_t r = 0;
    const std::size_t n = A.empty() ? 0 : A[0].size();
    for (std::size_t c = 0; c < n && r < A.size(); ++c) {
        std::size_t piv = r;
        while (piv < A.size() && A[piv][c] == 0) ++piv;
        if (piv == A.size()) continue;
        std::swap(A[piv], A[r]);
        u32 inv = invmod(A[r][c], p);
        for (auto& x : A[r]) x = mulmod(x, inv, p);
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c] == 0) continue;
            u32 f = A[i][c];
            for (std::size_t k = 0; k < n; ++k) A[i][k] = static_cast<u32>((A[i][k] + static_cast<u64>(p - f) * A[r][k]) % p);
        }
        ++r;
    }
    return r;
}

u32 pw(u32 x, long e, u32 p) { return e < 0 ? 0 : powmod(x, static_cast<u64>(e), p); }

// d^(i+j)/dx^i dy^j of every monomial of degree <= d at (x,y), in oracle column order.
// Falling factorials; fine while p > d.
std::vector<u32> deriv_row(int d, int i, int j, u32 x, u32 y, u32 p) {
    std::vector<u32> r;
    for (int t = 0; t <= d; ++t)
        for (int b = 0; b <= t; ++b) {
            int a = t - b;
            u64 ff = 1;
            for (int k = 0; k < i; ++k) ff = ff * static_cast<u64>(std::max(a - k, 0)) % p;
            for (int k = 0; k < j; ++k) ff = ff * static_cast<u64>(std::max(b - k, 0)) % p;
            r.push_back(static_cast<u32>(ff * pw(x, a - i, p) % p * pw(y, b - j, p) % p));
        }
    return r;
}

std::vector<std::vector<u32>> rows_of(ConditionMatrix& M) {
    std::vector<std::vector<u32>> out;
    for (std::size_t i = 0; i < M.dense.rows(); ++i) out.emplace_back(M.dense.row(i), M.dense.row(i) + M.dense.cols());
    return out;
}

std::vector<std::vector<u32>> concat(std::vector<std::vector<u32>> a, const std::vector<std::vector<u32>>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::size_t rank_of(const LinearSystem& s, const ConfigFp& cf, bool frame) {
    BuildOptions bo;
    bo.frame = frame;
    auto M = build_matrix(s, cf, bo);
    return matrix_rank(M);
}

}  // namespace

TEST_CASE("sample_config is deterministic and distinct") {
    auto s = homogeneous(10, 3, 10);
    auto a = sample_config(s.cfg, kPrime1, 1);
    auto b = sample_config(s.cfg, kPrime1, 1);
    auto c = sample_config(s.cfg, kPrime1, 2);
    CHECK(a.coords.size() == 10);
    std::set<std::pair<u32, u32>> pts;
    for (auto& [l, xy] : a.coords) pts.insert(xy);
    CHECK(pts.size() == 10);
    CHECK(a.coords == b.coords);
    CHECK(a.coords != c.coords);

    auto ch = sys("5; [2,1]");
    auto cf = sample_config(ch.cfg, kPrime1, 7);
    CHECK(cf.coords.size() == 1);
    CHECK(cf.directions.size() == 1);

    // F_2 has only three affine points besides the origin
    CHECK_THROWS_AS(sample_config(homogeneous(1, 1, 4).cfg, 2, 1), SamplingError);
    CHECK_NOTHROW(sample_config(homogeneous(1, 1, 3).cfg, 2, 1));
}

TEST_CASE("build_matrix small examples") {
    auto s = sys("1; 1");
    ConfigFp cf;
    cf.p = 101;
    cf.coords["p1"] = {2, 3};
    BuildOptions nf;
    nf.frame = false;
    auto M = build_matrix(s, cf, nf);
    REQUIRE(M.dense.rows() == 1);
    REQUIRE(M.dense.cols() == 3);
    CHECK(M.dense.at(0, column_index(1, 0, 0)) == 1);
    CHECK(M.dense.at(0, column_index(1, 1, 0)) == 2);
    CHECK(M.dense.at(0, column_index(1, 0, 1)) == 3);

    auto s2 = sys("2; 2");
    auto cf2 = sample_config(s2.cfg, kPrime1, 3);
    auto M2 = build_matrix(s2, cf2, nf);
    CHECK(M2.nrows == 3);
    CHECK(M2.ncols == 6);
    CHECK(M2.provenance.size() == 3);

    // framed single point: unit rows on 1, x, y
    auto M3 = build_matrix(s2, cf2);
    CHECK(M3.unit_cols == std::set<std::size_t>{0, 1, 2});
    CHECK(M3.dense.rows() == 0);
    CHECK(matrix_rank(M3) == 3);
}

TEST_CASE("row count is sum of m(m+1)/2") {
    for (const char* t : {"10; 3^5", "12; 4, [3,2], [2,2]^2, 1", "30; [5,3,2], 4^3", "7; 2, 1^6", "174; 55^10"}) {
        auto s = sys(t);
        auto cf = sample_config(s.cfg, kPrime1, 1);
        std::size_t want = 0;
        for (auto& [l, m] : s.cls.mults) {
            long v = static_cast<long>(m);
            want += static_cast<std::size_t>(v * (v + 1) / 2);
        }
        if (std::string(t).rfind("174", 0) == 0) {
            // size only, without building 15400^2 entries
            CHECK(want == 15400);
            CHECK(175 * 176 / 2 == 15400);
            continue;
        }
        auto M = build_matrix(s, cf);
        CHECK(M.nrows == want);
        CHECK(M.provenance.size() == want);
        CHECK(M.dense.rows() + [&] {
            std::size_t f = 0;
            for (auto& [l, pos] : M.frame) {
                long v = static_cast<long>(s.cls.mult(l));
                f += static_cast<std::size_t>(v * (v + 1) / 2);
            }
            return f;
        }() == want);
        CHECK(M.unit_cols.size() + M.dense_cols.size() == M.ncols);
    }
}

TEST_CASE("rank of special matrices") {
    DenseMatrix Z(5, 7);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 7; ++j) Z.at(i, j) = 0;
    CHECK(rank_mod_p(Z, kPrime1) == 0);
    DenseMatrix I(9, 9);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) I.at(i, j) = i == j;
    CHECK(rank_mod_p(I, kPrime1) == 9);
}

TEST_CASE("L(4;2^5) brute force rank 14") {
    auto s = homogeneous(4, 2, 5);
    const u32 p = kPrime1;
    for (u64 seed : {1, 2, 3}) {
        auto cf = sample_config(s.cfg, p, seed);
        std::vector<std::vector<u32>> rows;
        for (auto& [l, xy] : cf.coords)
            for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}})
                rows.push_back(deriv_row(4, i, j, xy.first, xy.second, p));
        CHECK(rows.size() == 15);
        CHECK(naive_rank(rows, p) == 14);
        CHECK(rank_of(s, cf, false) == 14);
        CHECK(rank_of(s, cf, true) == 14);
        // Taylor rows and derivative rows span the same space
        BuildOptions nf;
        nf.frame = false;
        auto M = build_matrix(s, cf, nf);
        CHECK(naive_rank(concat(rows_of(M), rows), p) == 14);
    }
}

TEST_CASE("Taylor rows agree with derivative rows at higher multiplicity") {
    const u32 p = 1000003;
    for (const char* t : {"9; 4, 3, 3", "11; 5, 2^4", "6; 3^3, 2"}) {
        auto s = sys(t);
        auto cf = sample_config(s.cfg, p, 11);
        std::vector<std::vector<u32>> rows;
        const int d = static_cast<int>(s.cls.degree);
        for (auto& pt : s.cfg.points()) {
            int m = static_cast<int>(s.cls.mult(pt.label));
            auto xy = cf.coords.at(pt.label);
            for (int a = 0; a < m; ++a)
                for (int b = 0; a + b < m; ++b) rows.push_back(deriv_row(d, a, b, xy.first, xy.second, p));
        }
        BuildOptions nf;
        nf.frame = false;
        auto M = build_matrix(s, cf, nf);
        auto mine = rows_of(M);
        std::size_t r = naive_rank(mine, p);
        CHECK(naive_rank(rows, p) == r);
        CHECK(naive_rank(concat(mine, rows), p) == r);
    }
}

TEST_CASE("infinitely near rows match independent encodings") {
    const u32 p = 1000003;
    SUBCASE("[1,1] is a tangent condition") {
        auto s = sys("3; [1,1]");
        auto cf = sample_config(s.cfg, p, 5);
        auto [x, y] = cf.coords.at("p1");
        u32 w = cf.directions.at("p1'");
        auto fx = deriv_row(3, 1, 0, x, y, p), fy = deriv_row(3, 0, 1, x, y, p);
        std::vector<u32> tangent(fx.size());
        for (std::size_t k = 0; k < fx.size(); ++k) tangent[k] = static_cast<u32>((fx[k] + static_cast<u64>(w) * fy[k]) % p);
        std::vector<std::vector<u32>> ind{deriv_row(3, 0, 0, x, y, p), tangent};
        BuildOptions nf;
        nf.frame = false;
        auto M = build_matrix(s, cf, nf);
        auto mine = rows_of(M);
        CHECK(naive_rank(mine, p) == 2);
        CHECK(naive_rank(concat(mine, ind), p) == 2);
    }
    SUBCASE("[2,1] puts the direction in the tangent cone") {
        auto s = sys("4; [2,1]");
        auto cf = sample_config(s.cfg, p, 6);
        auto [x, y] = cf.coords.at("p1");
        u32 w = cf.directions.at("p1'");
        std::vector<std::vector<u32>> ind{deriv_row(4, 0, 0, x, y, p), deriv_row(4, 1, 0, x, y, p),
                                          deriv_row(4, 0, 1, x, y, p)};
        auto fxx = deriv_row(4, 2, 0, x, y, p), fxy = deriv_row(4, 1, 1, x, y, p), fyy = deriv_row(4, 0, 2, x, y, p);
        std::vector<u32> cone(fxx.size());
        u64 w2 = static_cast<u64>(w) * w % p;
        for (std::size_t k = 0; k < cone.size(); ++k)
            cone[k] = static_cast<u32>((fxx[k] + 2 * static_cast<u64>(w) % p * fxy[k] % p + w2 * fyy[k]) % p);
        ind.push_back(cone);
        BuildOptions nf;
        nf.frame = false;
        auto mine = [&] { auto M = build_matrix(s, cf, nf); return rows_of(M); }();
        CHECK(naive_rank(mine, p) == 4);
        CHECK(naive_rank(concat(mine, ind), p) == 4);
    }
    SUBCASE("[1,1,1] is vanishing to order 3 along an arc") {
        auto s = sys("5; [1,1,1]");
        auto cf = sample_config(s.cfg, p, 8);
        auto [x, y] = cf.coords.at("p1");
        u32 w0 = cf.directions.at("p1'"), w1 = cf.directions.at("p1''");
        // f(x+u, y + w0 u + w1 u^2) mod u^3, coefficientwise per monomial
        const int d = 5;
        std::vector<std::vector<u32>> ind(3);
        for (int t = 0; t <= d; ++t)
            for (int b = 0; b <= t; ++b) {
                int a = t - b;
                // (x+u)^a and (y + w0 u + w1 u^2)^b truncated at u^3
                std::vector<u64> X(3, 0), Y(3, 0);
                X[0] = pw(x, a, p);
                X[1] = a >= 1 ? static_cast<u64>(a) * pw(x, a - 1, p) % p : 0;
                X[2] = a >= 2 ? static_cast<u64>(a) * (a - 1) / 2 % p * pw(x, a - 2, p) % p : 0;
                std::vector<u64> one{1, 0, 0}, lin{y, w0, w1};
                Y = one;
                for (int k = 0; k < b; ++k) {
                    std::vector<u64> n(3, 0);
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; i + j < 3; ++j) n[i + j] = (n[i + j] + Y[i] * lin[j]) % p;
                    Y = n;
                }
                for (int e = 0; e < 3; ++e) {
                    u64 v = 0;
                    for (int i = 0; i <= e; ++i) v = (v + X[i] * Y[e - i]) % p;
                    ind[e].push_back(static_cast<u32>(v));
                }
            }
        BuildOptions nf;
        nf.frame = false;
        auto mine = [&] { auto M = build_matrix(s, cf, nf); return rows_of(M); }();
        CHECK(naive_rank(mine, p) == 3);
        CHECK(naive_rank(concat(mine, ind), p) == 3);
    }
}

TEST_CASE("frame and unframed matrices give the same generic rank") {
    std::mt19937_64 g(42);
    for (int it = 0; it < 25; ++it) {
        int k = 3 + static_cast<int>(g() % 6);
        std::vector<Int> m;
        for (int i = 0; i < k; ++i) m.push_back(Int(static_cast<int>(g() % 5)));
        int d = 1 + static_cast<int>(g() % 12);
        auto s = make_system(d, m);
        auto cf = sample_config(s.cfg, kPrime1, g());
        std::size_t rf = rank_of(s, cf, true), rn = rank_of(s, cf, false);
        CHECK(rf == rn);
        CHECK(naive_rank(full_rows(s, cf, true), kPrime1) == rf);
    }
}

TEST_CASE("generic_dim examples") {
    OracleOptions o;
    auto r = generic_dim(sys("3; 1^9"), o);
    CHECK(r.dim == 0);
    CHECK(r.status == CertStatus::CERTIFIED_NONSPECIAL);

    r = generic_dim(sys("4; 2^5"), o);
    CHECK(r.dim == 0);
    CHECK(r.expected == -1);
    CHECK(r.status == CertStatus::UPPER_BOUND_ONLY);
    CHECK(r.trials_used == 3);
    CHECK(r.note.find("SHGH predicts generic dim 0") != std::string::npos);

    r = generic_dim(sys("19; 6^10"), o);
    CHECK(r.dim == -1);
    CHECK(r.status == CertStatus::CERTIFIED_EMPTY);
    CHECK(r.trials_used == 1);

    for (auto [d, m] : std::vector<std::pair<int, int>>{{9, 3}, {15, 5}, {12, 4}, {18, 6}}) {
        auto e = generic_dim(homogeneous(d, m, 10), o);
        CHECK(e.status == CertStatus::CERTIFIED_EMPTY);
    }
    // dim of a compound system
    r = generic_dim(sys("6; [2,1]^2, 2"), o);
    CHECK(r.status == CertStatus::CERTIFIED_NONSPECIAL);
    CHECK(r.dim == expected_dim(sys("6; [2,1]^2, 2").cls));
}

TEST_CASE("certify_nonspecial") {
    OracleOptions o;
    auto s = sys("7; 2, 1^6");
    auto c = certify_nonspecial(s, o);
    CHECK(c.dim == expected_dim(s.cls));
    CHECK(c.dim == 36 - 1 - 3 - 6);  // 36 monomials of degree <= 7
    CHECK(c.status == CertStatus::CERTIFIED_NONSPECIAL);

    c = certify_nonspecial(sys("2; 2^2"), o);
    CHECK(c.status == CertStatus::INCONCLUSIVE);
    CHECK(c.dim == 0);
    CHECK(c.trials_used == 6);
    std::set<std::pair<u32, u64>> seen;
    for (auto& w : c.witnesses) seen.insert({w.p, w.seed});
    CHECK(seen.size() == 6);

    c = certify_nonspecial(sys("0; 0"), o);
    CHECK(c.dim == 0);
    CHECK(c.status == CertStatus::CERTIFIED_NONSPECIAL);
}

TEST_CASE("oracle errors") {
    OracleOptions o;
    o.p = 5;
    CHECK_THROWS_AS(generic_dim(sys("5; 1"), o), FieldTooSmall);
    o.p = 7;
    CHECK_NOTHROW(generic_dim(sys("5; 1"), o));
    o.p = kPrime1;
    CHECK_THROWS_AS(generic_dim(sys("5; [0,1]"), o), InvalidCluster);
    CHECK_THROWS_AS(generic_dim(sys("5; 2, -1"), o), InvalidCluster);
    o.trials = 0;
    CHECK_THROWS_AS(generic_dim(sys("5; 1"), o), ValidationError);
    o.trials = 1;
    o.p = 1000;
    CHECK_THROWS_AS(generic_dim(sys("5; 1"), o), ValidationError);
}

TEST_CASE("witness cache and replay") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("shgh-wit-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    OracleOptions o;
    o.cache_dir = dir.string();
    o.seed = 17;
    auto s = sys("13; 4^10");
    auto a = generic_dim(s, o);
    REQUIRE(!a.witnesses.empty());
    CHECK_FALSE(a.witnesses[0].cached);
    CHECK(fs::exists(a.witnesses[0].path));
    auto b = generic_dim(s, o);
    CHECK(b.witnesses[0].cached);
    CHECK(b.witnesses[0].rank == a.witnesses[0].rank);
    o.use_cache = false;
    auto c = generic_dim(s, o);
    CHECK_FALSE(c.witnesses[0].cached);
    CHECK(c.witnesses[0].rank == a.witnesses[0].rank);
    CHECK(c.dim == a.dim);
    fs::remove_all(dir);
}

#include "shgh/lattice.hpp"

#include <algorithm>
#include <functional>

namespace shgh {

Configuration Configuration::free_points(std::size_t k, const std::string& prefix) {
    Configuration cfg;
    for (std::size_t i = 1; i <= k; ++i) cfg.add_free(prefix + std::to_string(i));
    return cfg;
}

void Configuration::add_free(const std::string& label) {
    if (contains(label)) throw ConfigurationMismatch("duplicate label " + label);
    idx_[label] = pts_.size();
    pts_.push_back({label, std::nullopt});
}

void Configuration::add_child(const std::string& label, const std::string& parent) {
    if (contains(label)) throw ConfigurationMismatch("duplicate label " + label);
    if (!contains(parent)) throw ConfigurationMismatch("unknown parent " + parent);
    idx_[label] = pts_.size();
    pts_.push_back({label, parent});
}

std::size_t Configuration::index_of(const std::string& label) const {
    auto it = idx_.find(label);
    if (it == idx_.end()) throw ConfigurationMismatch("unknown label " + label);
    return it->second;
}

int Configuration::depth(const std::string& label) const {
    int d = 0;
    const PointNode* n = &node(label);
    while (n->parent) {
        n = &node(*n->parent);
        ++d;
    }
    return d;
}

std::vector<std::string> Configuration::children(const std::string& label) const {
    std::vector<std::string> out;
    for (const auto& p : pts_)
        if (p.parent && *p.parent == label) out.push_back(p.label);
    return out;
}

std::vector<std::string> Configuration::labels() const {
    std::vector<std::string> out;
    out.reserve(pts_.size());
    for (const auto& p : pts_) out.push_back(p.label);
    return out;
}

bool Configuration::operator==(const Configuration& o) const {
    if (pts_.size() != o.pts_.size()) return false;
    for (std::size_t i = 0; i < pts_.size(); ++i)
        if (pts_[i].label != o.pts_[i].label || pts_[i].parent != o.pts_[i].parent) return false;
    return true;
}

Int DivisorClass::mult(const std::string& label) const {
    for (const auto& [l, m] : mults)
        if (l == label) return m;
    return 0;
}

void DivisorClass::set(const std::string& label, const Int& m) {
    for (auto& [l, v] : mults)
        if (l == label) {
            v = m;
            return;
        }
    mults.emplace_back(label, m);
}

void DivisorClass::add(const std::string& label, const Int& m) {
    for (auto& [l, v] : mults)
        if (l == label) {
            v += m;
            return;
        }
    mults.emplace_back(label, m);
}

DivisorClass DivisorClass::exceptional(const std::string& label) {
    return DivisorClass(0, {{label, Int(-1)}});
}

DivisorClass& DivisorClass::operator+=(const DivisorClass& o) {
    degree += o.degree;
    for (const auto& [l, m] : o.mults) add(l, m);
    return *this;
}

DivisorClass& DivisorClass::operator-=(const DivisorClass& o) {
    degree -= o.degree;
    for (const auto& [l, m] : o.mults) add(l, -m);
    return *this;
}

DivisorClass DivisorClass::operator-() const {
    DivisorClass r = *this;
    r.degree = -r.degree;
    for (auto& [l, m] : r.mults) m = -m;
    return r;
}

DivisorClass operator*(const Int& t, const DivisorClass& c) {
    DivisorClass r = c;
    r.degree *= t;
    for (auto& [l, m] : r.mults) m *= t;
    return r;
}

bool DivisorClass::operator==(const DivisorClass& o) const {
    if (degree != o.degree) return false;
    std::map<std::string, Int> a, b;
    for (const auto& [l, m] : mults)
        if (m != 0) a[l] += m;
    for (const auto& [l, m] : o.mults)
        if (m != 0) b[l] += m;
    std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(b, [](const auto& kv) { return kv.second == 0; });
    return a == b;
}

DivisorClass DivisorClass::aligned(const Configuration& cfg) const {
    check_labels(*this, cfg);
    DivisorClass r(degree);
    for (const auto& p : cfg.points()) r.mults.emplace_back(p.label, mult(p.label));
    return r;
}

std::size_t DivisorClass::nonzero_count() const {
    std::size_t n = 0;
    for (const auto& [l, m] : mults)
        if (m != 0) ++n;
    return n;
}

LinearSystem homogeneous(const Int& d, const Int& m, std::size_t k) {
    return make_system(d, std::vector<Int>(k, m));
}

LinearSystem make_system(const Int& d, const std::vector<Int>& mults) {
    LinearSystem s;
    s.cfg = Configuration::free_points(mults.size());
    s.cls.degree = d;
    for (std::size_t i = 0; i < mults.size(); ++i)
        s.cls.mults.emplace_back(s.cfg.points()[i].label, mults[i]);
    return s;
}

void check_labels(const DivisorClass& a, const Configuration& cfg) {
    for (const auto& [l, m] : a.mults)
        if (!cfg.contains(l)) throw ConfigurationMismatch("label " + l + " not in configuration");
}

Int pair(const DivisorClass& a, const DivisorClass& b) {
    Int s = a.degree * b.degree;
    for (const auto& [l, m] : a.mults) {
        if (m == 0) continue;
        s -= m * b.mult(l);
    }
    return s;
}

Int pair(const DivisorClass& a, const DivisorClass& b, const Configuration& cfg) {
    check_labels(a, cfg);
    check_labels(b, cfg);
    return pair(a, b);
}

Int self_int(const DivisorClass& a) { return pair(a, a); }

DivisorClass canonical_class(const Configuration& cfg) {
    DivisorClass k(-3);
    for (const auto& p : cfg.points()) k.mults.emplace_back(p.label, Int(-1));
    return k;
}

Int virtual_dim(const DivisorClass& L) {
    Int v = L.degree * (L.degree + 3) / 2;
    for (const auto& [l, m] : L.mults) v -= m * (m + 1) / 2;
    return v;
}

Int expected_dim(const DivisorClass& L) {
    Int v = virtual_dim(L);
    return v < -1 ? Int(-1) : v;
}

namespace {

// Non-negative integer vectors of length n with sum S and sum of squares Q.
// Calls visit with the partial vector when complete.
void dfs_vectors(std::vector<int>& c, std::size_t pos, long S, long Q, bool nonincreasing,
                 const std::function<void(const std::vector<int>&)>& visit) {
    std::size_t n = c.size();
    if (pos == n) {
        if (S == 0 && Q == 0) visit(c);
        return;
    }
    long r = static_cast<long>(n - pos);
    if (S < 0 || Q < 0 || S > Q || S * S > r * Q) return;
    long hi = S;
    while (hi * hi > Q) --hi;
    if (nonincreasing && pos > 0) hi = std::min<long>(hi, c[pos - 1]);
    for (long v = hi; v >= 0; --v) {
        long S2 = S - v, Q2 = Q - v * v, r2 = r - 1;
        bool ok = r2 == 0 ? (S2 == 0 && Q2 == 0)
                          : (S2 >= 0 && Q2 >= 0 && S2 <= Q2 && S2 * S2 <= r2 * Q2);
        if (nonincreasing && S2 > r2 * v) break;
        if (!ok) continue;
        c[pos] = static_cast<int>(v);
        dfs_vectors(c, pos + 1, S2, Q2, nonincreasing, visit);
    }
    c[pos] = 0;
}

}  // namespace

NegClassReport enumerate_negative_classes(const Configuration& cfg, const DivisorClass& L,
                                          int degree_bound, int target_self_int,
                                          const std::string& justification) {
    if (degree_bound < 0) throw std::invalid_argument("degree_bound must be >= 0");
    if (target_self_int != -1 && target_self_int != -2)
        throw std::invalid_argument("target_self_int must be -1 or -2");
    check_labels(L, cfg);
    NegClassReport rep;
    rep.degree_bound_used = degree_bound;
    rep.complete = !justification.empty();
    rep.justification = justification;

    const auto& pts = cfg.points();
    std::size_t k = pts.size();
    auto emit = [&](DivisorClass c) {
        Int p = pair(c, L);
        rep.classes.push_back({std::move(c), target_self_int, p});
    };

    if (target_self_int == -1) {
        for (const auto& p : pts) emit(DivisorClass::exceptional(p.label));
    } else {
        for (const auto& a : pts)
            for (const auto& b : pts) {
                if (a.label == b.label) continue;
                DivisorClass c = DivisorClass::exceptional(a.label) - DivisorClass::exceptional(b.label);
                emit(c);
            }
    }

    for (int delta = 1; delta <= degree_bound; ++delta) {
        long S = 3L * delta + (target_self_int == -1 ? -1 : 0);
        long Q = static_cast<long>(delta) * delta - target_self_int;
        std::vector<int> c(k, 0);
        dfs_vectors(c, 0, S, Q, false, [&](const std::vector<int>& v) {
            DivisorClass cls(delta);
            for (std::size_t i = 0; i < k; ++i)
                if (v[i]) cls.mults.emplace_back(pts[i].label, Int(v[i]));
            emit(std::move(cls));
        });
    }
    std::stable_sort(rep.classes.begin(), rep.classes.end(),
                     [](const NegClass& a, const NegClass& b) { return a.pairing < b.pairing; });
    return rep;
}

NefVerdict is_nef_bounded(const DivisorClass& L, const Configuration& cfg, int degree_bound) {
    if (degree_bound < 0) throw std::invalid_argument("degree_bound must be >= 0");
    check_labels(L, cfg);
    const auto& pts = cfg.points();
    std::size_t k = pts.size();

    NefVerdict out;
    auto consider = [&](DivisorClass c, int s, const Int& p) {
        if (p < 0 && (!out.witness || p < out.witness->pairing)) {
            out.nef = false;
            out.witness = NegClass{std::move(c), s, p};
        }
    };

    for (const auto& p : pts) consider(DivisorClass::exceptional(p.label), -1, L.mult(p.label));
    for (const auto& p : pts)
        if (p.parent) {
            DivisorClass g = DivisorClass::exceptional(*p.parent) - DivisorClass::exceptional(p.label);
            consider(g, -2, L.mult(*p.parent) - L.mult(p.label));
        }

    // Rearrangement: the smallest pairing for a given multiset of c's pairs
    // the largest c with the largest multiplicity.
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::vector<Int> m(k);
    for (std::size_t i = 0; i < k; ++i) m[i] = L.mult(pts[i].label);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });

    for (int delta = 1; delta <= degree_bound; ++delta) {
        long S = 3L * delta - 1;
        long Q = static_cast<long>(delta) * delta + 1;
        std::vector<int> c(k, 0);
        dfs_vectors(c, 0, S, Q, true, [&](const std::vector<int>& v) {
            Int p = Int(delta) * L.degree;
            for (std::size_t i = 0; i < k && v[i]; ++i) p -= Int(v[i]) * m[order[i]];
            if (p < 0 && (!out.witness || p < out.witness->pairing)) {
                DivisorClass cls(delta);
                for (std::size_t i = 0; i < k && v[i]; ++i)
                    cls.mults.emplace_back(pts[order[i]].label, Int(v[i]));
                consider(std::move(cls), -1, p);
            }
        });
    }
    return out;
}

std::string int_str(const Int& v) { return v.str(); }

nlohmann::json int_json(const Int& v) {
    if (v >= Int(INT64_MIN) && v <= Int(INT64_MAX)) return static_cast<int64_t>(v);
    return v.str();
}

Int int_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    return Int(j.get<int64_t>());
}

nlohmann::json to_json(const Configuration& cfg) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : cfg.points())
        arr.push_back({{"label", p.label}, {"parent", p.parent ? nlohmann::json(*p.parent) : nlohmann::json()}});
    return arr;
}

nlohmann::json to_json(const DivisorClass& c, const Configuration& cfg) {
    DivisorClass a = c.aligned(cfg);
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const auto& p = cfg.points()[i];
        arr.push_back({{"label", p.label},
                       {"mult", int_json(a.mults[i].second)},
                       {"parent", p.parent ? nlohmann::json(*p.parent) : nlohmann::json()}});
    }
    return {{"degree", int_json(c.degree)}, {"mults", arr}};
}

LinearSystem system_from_json(const nlohmann::json& j) {
    LinearSystem s;
    s.cls.degree = int_from_json(j.at("degree"));
    for (const auto& e : j.at("mults")) {
        std::string label = e.at("label").get<std::string>();
        if (e.contains("parent") && !e.at("parent").is_null())
            s.cfg.add_child(label, e.at("parent").get<std::string>());
        else
            s.cfg.add_free(label);
        s.cls.mults.emplace_back(label, int_from_json(e.at("mult")));
    }
    return s;
}

}  // namespace shgh

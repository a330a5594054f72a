#include "shgh/degeneration.hpp"
#include "degen_internal.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace shgh {

using detail::render_class;

std::string to_string(Assumption a) {
    switch (a) {
        case Assumption::COMPLETE_RESTRICTION: return "COMPLETE-RESTRICTION";
        case Assumption::TRANSVERSALITY: return "TRANSVERSALITY";
        case Assumption::CORRESPONDENCE_GENERALITY: return "CORRESPONDENCE-GENERALITY";
    }
    return "?";
}

Assumption assumption_from_string(const std::string& text) {
    std::string t;
    for (char c : text) t += c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto a : {Assumption::COMPLETE_RESTRICTION, Assumption::TRANSVERSALITY,
                   Assumption::CORRESPONDENCE_GENERALITY})
        if (to_string(a) == t) return a;
    throw CatalogError("unknown assumption tag '" + text +
                       "'; known: COMPLETE-RESTRICTION, TRANSVERSALITY, CORRESPONDENCE-GENERALITY");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::EMPTY: return "EMPTY";
        case Verdict::DIM_UPPER_BOUND: return "DIM-UPPER-BOUND";
        case Verdict::DIM_EXACT_UNDER_ASSUMPTIONS: return "DIM-EXACT-UNDER-ASSUMPTIONS";
    }
    return "?";
}

std::string MatchingReport::verdict_string() const {
    std::string tags;
    for (const auto& a : assumptions_used) tags += (tags.empty() ? "" : ", ") + a;
    switch (verdict) {
        case Verdict::EMPTY: return "EMPTY";
        case Verdict::DIM_UPPER_BOUND: return "dim <= " + int_str(value);
        case Verdict::DIM_EXACT_UNDER_ASSUMPTIONS:
            return "dim = " + int_str(value) + (tags.empty() ? "" : " (under " + tags + ")");
    }
    return "?";
}

namespace {

std::string s(const Int& v) { return int_str(v); }
Int vec(const Int& proj) { return proj + 1; }
Int clamp(const Int& x) { return x < -1 ? Int(-1) : x; }
Int pos(const Int& x) { return x < 0 ? Int(0) : x; }

Int genus(const DivisorClass& C, const Configuration& cfg) {
    return (pair(C, C) + pair(C, canonical_class(cfg))) / 2 + 1;
}

// normalization genus + all nodes of both sides
Int arithmetic_genus(const Fiber& f, const DoubleCurve& dc) {
    const Component& A = f.component(dc.a.component);
    Int g0 = genus(A.curve(dc.a.curve), A.cfg) - dc.a.nodes;
    return g0 + dc.a.nodes + dc.b.nodes;
}

Int dim_or_throw(const DivisorClass& L, const Configuration& cfg, const std::map<std::string, Int>& dims,
                 const std::string& key) {
    if (auto it = dims.find(key); it != dims.end()) return it->second;
    try {
        return shgh_dim(L, cfg).dim;
    } catch (const Error& e) {
        throw IncompleteInput("no dimension for " + key + " (" + e.what() + "); pass it explicitly");
    }
}

struct Tagger {
    MatchingReport& r;
    const std::set<Assumption>& have;
    bool has(Assumption a) const { return have.count(a) > 0; }
    void use(Assumption a, LedgerStep& st) {
        r.assumptions_used.insert(to_string(a));
        if (std::find(st.tags.begin(), st.tags.end(), to_string(a)) == st.tags.end())
            st.tags.push_back(to_string(a));
    }
};

void settle(MatchingReport& r, bool exact) {
    r.delta = r.value;
    if (r.value < 0)
        r.verdict = Verdict::EMPTY;
    else
        r.verdict = exact ? Verdict::DIM_EXACT_UNDER_ASSUMPTIONS : Verdict::DIM_UPPER_BOUND;
}

std::string pair_str(const Int& d, const Int& m) { return "(" + s(d) + "," + s(m) + ")"; }

}  // namespace

std::vector<std::string> default_gluing_order(const Fiber& f) {
    std::vector<std::string> pref = f.stage >= 4 ? std::vector<std::string>{"V", "Z", "T"}
                                                 : std::vector<std::string>{"V", "T", "Z"};
    std::vector<std::string> out;
    for (const auto& n : pref)
        if (f.has_component(n)) out.push_back(n);
    for (const auto& c : f.components)
        if (std::find(out.begin(), out.end(), c.name) == out.end()) out.push_back(c.name);
    return out;
}

MatchingReport matching_dim(const Fiber& f, const std::set<Assumption>& assumptions,
                            const std::vector<std::string>& order_in, const std::map<std::string, Int>& dims) {
    auto order = order_in.empty() ? default_gluing_order(f) : order_in;
    for (const auto& n : order)
        if (!f.has_component(n)) throw TopologyError("gluing order names unknown component " + n);
    for (const auto& c : f.components)
        if (std::find(order.begin(), order.end(), c.name) == order.end())
            throw IncompleteInput("gluing order misses component " + c.name);

    MatchingReport r;
    const Params& p = f.params;
    r.title = "stage " + std::to_string(f.stage) + " ledger, (d,m,a)=(" + s(p.d) + "," + s(p.m) + "," + s(p.a) + ")";
    Tagger tg{r, assumptions};
    bool exact = true;
    Int W = -1;
    std::vector<std::string> glued;

    for (const auto& name : order) {
        const Component& X = f.component(name);
        LedgerStep st;
        st.label = glued.empty() ? name : "+" + name;
        st.component = name;
        st.dim_component = dim_or_throw(X.bundle, X.cfg, dims, name);
        Int dX = st.dim_component;

        // self gluings: the identified curves must cut matching divisors
        for (const auto& dc : f.double_curves) {
            if (!dc.self() || dc.a.component != name) continue;
            st.double_curves.push_back(dc.name);
            Int k = pos(pair(X.bundle, X.curve(dc.a.curve)));
            st.exact = false;
            if (tg.has(Assumption::TRANSVERSALITY)) {
                tg.use(Assumption::TRANSVERSALITY, st);
                dX = dX < 0 ? Int(-1) : clamp(dX - k);
                st.note += dc.name + ": " + s(k) + " matching conditions, upper bound; ";
            } else {
                st.note += dc.name + ": matching not counted (no TRANSVERSALITY), trivial bound; ";
            }
        }

        st.dim_before = glued.empty() ? Int(-1) : W;
        if (glued.empty()) {
            W = dX;
            st.dim_after = W;
            if (!st.exact) exact = false;
            r.steps.push_back(st);
            glued.push_back(name);
            continue;
        }

        std::vector<const DoubleCurve*> D;
        for (const auto& dc : f.double_curves) {
            if (dc.self()) continue;
            bool xa = dc.a.component == name && std::count(glued.begin(), glued.end(), dc.b.component);
            bool xb = dc.b.component == name && std::count(glued.begin(), glued.end(), dc.a.component);
            if (xa || xb) D.push_back(&dc);
        }

        if (D.empty()) {
            W = clamp(vec(W) + vec(dX) - 1);
            st.note += "no double curve with the glued part";
        } else {
            Int target = 0;
            bool rational = true;
            DivisorClass kerX = X.bundle;
            std::map<std::string, DivisorClass> kerY;
            for (const DoubleCurve* dc : D) {
                st.double_curves.push_back(dc->name);
                const Side& sx = dc->a.component == name ? dc->a : dc->b;
                const Side& sy = dc->a.component == name ? dc->b : dc->a;
                Int deg = pair(X.bundle, X.curve(sx.curve));
                Int pa = arithmetic_genus(f, *dc);
                Int h;
                if (deg < 0) {
                    h = 0;
                } else if (deg > 2 * pa - 2) {
                    h = deg + 1 - pa;
                } else if (deg == 0) {
                    h = 1;
                    st.note += dc->name + ": degree 0, restriction taken trivial; ";
                } else {
                    h = deg / 2 + 1;   // Clifford
                    st.exact = false;
                }
                if (pa > 0) rational = false;
                target += h;
                kerX -= X.curve(sx.curve);
                const Component& Y = f.component(sy.component);
                if (!kerY.count(Y.name)) kerY[Y.name] = Y.bundle;
                kerY[Y.name] -= Y.curve(sy.curve);
            }
            Int kX = std::min(clamp(dim_or_throw(kerX, X.cfg, dims, name + "/ker")), dX);
            Int rv = dX - kX - 1;

            Int rw;
            if (W < 0) {
                rw = -1;
            } else if (glued.size() == 1) {
                const Component& Y = f.component(glued[0]);
                Int kY = std::min(clamp(dim_or_throw(kerY.begin()->second, Y.cfg, dims, Y.name + "/ker")), W);
                rw = W - kY - 1;
            } else {
                Int sum = 0;
                for (const auto& [yn, kc] : kerY) {
                    const Component& Y = f.component(yn);
                    Int dY = dim_or_throw(Y.bundle, Y.cfg, dims, yn);
                    Int kY = std::min(clamp(dim_or_throw(kc, Y.cfg, dims, yn + "/ker")), dY);
                    sum += dY - kY;
                }
                rw = std::min({W, Int(sum - 1), Int(target - 1)});
                if (tg.has(Assumption::COMPLETE_RESTRICTION)) {
                    tg.use(Assumption::COMPLETE_RESTRICTION, st);
                } else {
                    st.exact = false;
                    st.note += "restriction of the glued part bounded by its components; ";
                }
            }
            Int kW = W - rw - 1;

            Int inter;
            Int naive = std::max(Int(0), vec(rv) + vec(rw) - target);
            if (vec(rv) == target || vec(rw) == target) {
                inter = std::min(vec(rv), vec(rw));
                st.note += "one restriction is complete; ";
            } else if (rational && tg.has(Assumption::COMPLETE_RESTRICTION) && rv + rw >= target - 2) {
                tg.use(Assumption::COMPLETE_RESTRICTION, st);
                inter = naive;
            } else if (tg.has(Assumption::TRANSVERSALITY)) {
                tg.use(Assumption::TRANSVERSALITY, st);
                inter = naive;
            } else {
                inter = std::min(vec(rv), vec(rw));
                st.exact = false;
                st.note += "no transversality: intersection bounded by the smaller series; ";
            }
            W = clamp(vec(kW) + vec(kX) + inter - 1);
            st.restricted_w = rw;
            st.restricted_v = rv;
            st.target_dim = target - 1;
        }
        st.dim_after = W;
        if (!st.exact) exact = false;
        r.steps.push_back(st);
        glued.push_back(name);
    }
    r.value = W;
    settle(r, exact);
    return r;
}

// ---- scripted ledgers for the three pairs the general argument leaves out ----

namespace {

enum class Reading { CHORD, SAME_BUNDLE };

struct ThirdOutcome {
    Int value = -1;
    Int delta = -1;
    bool v_ok = false, z_ok = false;
};

LedgerStep step(const std::string& label, const std::string& comp) {
    LedgerStep st;
    st.label = label;
    st.component = comp;
    return st;
}

// l = 1: third degeneration with the quartics split off once, read on the
// fourth-stage V where the eight points of D are explicit.
ThirdOutcome third_script(const Int& d, const Int& m, const Int& a, Reading reading, MatchingReport& r) {
    ThirdOutcome out;
    std::set<Assumption> all = {Assumption::TRANSVERSALITY, Assumption::CORRESPONDENCE_GENERALITY};
    Tagger tg{r, all};
    const Params p = Params::from(d, m, a);
    const std::string at = "a=" + s(a) + ": ";

    Fiber f;
    try {
        f = build_fourth_unchecked(d, m, a);
    } catch (const NoOpThrow& e) {
        DivisorClass Z = detail::z3_closed_form(p);
        Configuration cfg = detail::z_model();
        LedgerStep st = step(at + "Z", "Z");
        st.dim_component = shgh_dim(Z, cfg).dim;
        st.dim_after = -1;
        st.note = std::string("throws degenerate (") + e.what() + "); Z from its closed form " + render_class(Z, cfg);
        r.steps.push_back(st);
        if (st.dim_component >= 0) throw IncompleteInput(at + "Z non-empty but the throws degenerate");
        return out;
    }
    const Component& V = f.component("V");
    const Component& Z = f.component("Z");

    // V: L(a-2; 1^8) with the points of D, then the self matchings
    LedgerStep sv = step(at + "V", "V");
    sv.double_curves = {"F"};
    sv.dim_component = shgh_dim(V.bundle, V.cfg).dim;
    Int cF = pos(pair(V.bundle, V.curve("F1")));
    Int cH = 0;
    for (int j = 1; j <= 4; ++j) {
        sv.double_curves.push_back("H" + std::to_string(j));
        cH += pos(pair(V.bundle, V.curve("H" + std::to_string(j) + "1")));
    }
    Int Vm = sv.dim_component < 0 ? Int(-1) : clamp(sv.dim_component - cF - cH);
    sv.dim_after = Vm;
    tg.use(Assumption::CORRESPONDENCE_GENERALITY, sv);
    tg.use(Assumption::TRANSVERSALITY, sv);
    sv.note = "bundle " + render_class(V.bundle, V.cfg) + "; D imposes independent conditions; " + s(cF) +
              " conditions on F, " + s(cH) + " on the H curves";
    r.steps.push_back(sv);
    out.v_ok = Vm >= 0;

    // Z + T: Z must cut corresponding divisors on A1, A2
    LedgerStep sz = step(at + "+Z+T", "Z");
    sz.double_curves = {"A1", "A2"};
    sz.dim_component = shgh_dim(Z.bundle, Z.cfg).dim;
    Int cA = pair(Z.bundle, Z.curve("A1")) + p.e;
    out.delta = sz.dim_component < 0 ? Int(-1) : clamp(sz.dim_component - cA);
    sz.dim_after = out.delta;
    tg.use(Assumption::TRANSVERSALITY, sz);
    sz.note = "bundle " + render_class(Z.bundle, Z.cfg) + "; b-2a = " + s(cA) + " matching conditions with T";
    r.steps.push_back(sz);
    out.z_ok = sz.dim_component >= 0;

    if (Vm < 0 || out.delta < 0) {
        LedgerStep se = step(at + "verdict", "");
        se.note = Vm < 0 ? "no limit on V: not centrally effective" : "delta = -1: no limit on Z+T";
        r.steps.push_back(se);
        return out;
    }

    // restrictions to E
    DivisorClass KV = V.bundle - V.curve("E");
    Int kV = shgh_dim(KV, V.cfg).dim;
    Int eF = pair(V.curve("E"), V.curve("F1"));   // E meets F1, F2 in identified points
    Int kH = 0;
    for (int j = 1; j <= 4; ++j) kH += pos(pair(KV, V.curve("H" + std::to_string(j) + "1")));
    Int kVm = kV < 0 ? Int(-1) : clamp(kV - pos(pair(KV, V.curve("F1")) - eF) - kH);
    DivisorClass KZ = Z.bundle - Z.curve("E");
    Int kZ = shgh_dim(KZ, Z.cfg).dim;
    Int kZT = kZ < 0 ? Int(-1) : clamp(kZ - (pair(KZ, Z.curve("A1")) + p.e));
    Int rV = Vm - kVm - 1, rZ = out.delta - kZT - 1;
    Int deg = pair(V.bundle, V.curve("E"));
    Int pa = arithmetic_genus(f, f.double_curve("E"));

    LedgerStep se = step(at + "match on E", "");
    se.double_curves = {"E"};
    se.dim_before = Vm;
    se.restricted_w = rV;
    se.restricted_v = rZ;
    se.target_dim = deg - pa;
    Int common;
    if (reading == Reading::CHORD) {
        // g^r's identifying the node: hyperplanes through a (deg-1-r)-space
        // meeting the chord; general such spaces meet the chord apart
        Int span = std::min(deg, Int((deg - 1 - rV) + 1 + (deg - 1 - rZ)));
        common = deg - 1 - span;
        tg.use(Assumption::CORRESPONDENCE_GENERALITY, se);
        se.note = "E nodal of arithmetic genus " + s(pa) + ", degree " + s(deg) + "; series g^" + s(rV) + " and g^" +
                  s(rZ) + " span P^" + s(span) + " with the chord, common series dim " + s(common);
    } else {
        common = clamp(rV + rZ - (deg - pa));
        tg.use(Assumption::TRANSVERSALITY, se);
        se.note = "E nodal of arithmetic genus " + s(pa) + ", degree " + s(deg) + "; g^" + s(rV) + " and g^" + s(rZ) +
                  " in g^" + s(deg - pa) + " meet in dim " + s(common);
    }
    out.value = clamp(vec(kVm) + vec(kZT) + vec(common) - 1);
    se.dim_after = out.value;
    se.note += "; kernels " + s(kVm) + " (V), " + s(kZT) + " (Z+T)";
    r.steps.push_back(se);

    LedgerStep su = step(at + "+U,+Y", "");
    su.dim_before = su.dim_after = out.value;
    su.note = "planes carry trivial or degree-e bundles; no new parameters";
    r.steps.push_back(su);
    return out;
}

MatchingReport ledger_174(const Int& d, const Int& m, std::optional<Int> a) {
    MatchingReport r;
    r.title = "exceptional ledger " + pair_str(d, m) + ", third degeneration, quartics split";
    std::vector<Int> as;
    if (a) as.push_back(*a);
    else
        for (int i = 0; i <= 14; ++i) as.push_back(i);
    Int amin = -1, amax = -1, best = -1, delta = -1;
    bool have_min = false;
    for (const Int& x : as) {
        auto o = third_script(d, m, x, Reading::CHORD, r);
        if (o.v_ok && !have_min) {
            amin = x;
            have_min = true;
        }
        if (o.z_ok) amax = x;
        if (o.v_ok && o.z_ok) delta = std::max(delta, o.delta);
        best = std::max(best, o.value);
    }
    if (!a) {
        r.bounds["a_min"] = amin;
        r.bounds["a_max"] = amax;
        r.notes.push_back("central effectivity: V side needs a >= " + s(amin) + ", Z side needs a <= " + s(amax));
    }
    r.bounds["expected"] = expected_dim(homogeneous(d, m, 10).cls);
    r.value = best;
    settle(r, true);
    r.delta = delta;
    r.notes.push_back("delta = max(-1, dim L_Z - (b-2a)) over the effective range");
    return r;
}

MatchingReport ledger_193(const Int& d, const Int& m, const Int& a) {
    MatchingReport r;
    r.title = "exceptional ledger " + pair_str(d, m) + " at a=" + s(a) + ", third degeneration, quartics split";
    auto o = third_script(d, m, a, Reading::SAME_BUNDLE, r);
    r.value = o.value;
    settle(r, true);
    r.bounds["expected"] = expected_dim(homogeneous(d, m, 10).cls);
    return r;
}

MatchingReport ledger_348(const Int& d, const Int& m, const Int& a) {
    MatchingReport r;
    r.title = "exceptional ledger " + pair_str(d, m) + " at a=" + s(a) + ", fourth degeneration";
    std::set<Assumption> all = {Assumption::TRANSVERSALITY};
    Tagger tg{r, all};
    Fiber f = build_fourth_unchecked(d, m, a);
    const Params& p = f.params;
    const Component& V = f.component("V");
    const Component& Z = f.component("Z");

    LedgerStep sv = step("V", "V");
    sv.dim_component = shgh_dim(V.bundle, V.cfg).dim;
    Int cF = pos(pair(V.bundle, V.curve("F1")));
    Int cH = 0;
    sv.double_curves = {"F"};
    for (int j = 1; j <= 4; ++j) {
        sv.double_curves.push_back("H" + std::to_string(j));
        cH += pos(pair(V.bundle, V.curve("H" + std::to_string(j) + "1")));
    }
    Int Vm = clamp(sv.dim_component - cF - cH);
    sv.dim_after = Vm;
    sv.exact = false;
    tg.use(Assumption::TRANSVERSALITY, sv);
    sv.note = "bundle " + render_class(V.bundle, V.cfg) + "; at least " + s(cF) + " + " + s(cH) +
              " matching conditions on F and the H curves";
    r.steps.push_back(sv);

    auto v4f = lemma_check("V4F", d, m, a);
    LedgerStep sl = step("V4F", "");
    sl.note = std::string("lemma V4F ") + (v4f.pass ? "passes" : "FAILS") + ": matching curves on V cut a complete series on E";
    sl.exact = v4f.pass;
    r.steps.push_back(sl);
    if (!v4f.pass) r.notes.push_back("V4F does not hold here; the count below is not justified");

    LedgerStep sz = step("Z+T", "Z");
    sz.double_curves = {"A1", "A2"};
    sz.dim_component = shgh_dim(Z.bundle, Z.cfg).dim;
    Int cA = pair(Z.bundle, Z.curve("A1")) + p.e;
    Int zt = sz.dim_component < 0 ? Int(-1) : clamp(sz.dim_component - cA);
    sz.dim_after = zt;
    tg.use(Assumption::TRANSVERSALITY, sz);
    sz.note = "bundle " + render_class(Z.bundle, Z.cfg) + "; " + s(cA) + " matching conditions along A1, A2";
    r.steps.push_back(sz);

    // D1 on Z+T, then D2 on V cutting the same divisor on E
    Int deg = pair(V.bundle, V.curve("E"));
    LedgerStep se = step("match on E", "");
    se.double_curves = {"E"};
    se.dim_before = zt;
    se.target_dim = deg;
    se.exact = false;
    Int d2 = clamp(Vm - deg);
    r.value = (zt < 0 || d2 < 0) ? Int(-1) : zt + d2;
    se.dim_after = r.value;
    se.note = "D1 on Z+T: dim " + s(zt) + "; D2 on V with the same trace on E (degree " + s(deg) +
              "): at most " + s(d2);
    r.steps.push_back(se);

    LedgerStep su = step("+U,+Y", "");
    su.dim_before = su.dim_after = r.value;
    su.note = "trivial bundles; no new parameters";
    r.steps.push_back(su);

    settle(r, false);
    r.bounds["expected"] = expected_dim(homogeneous(d, m, 10).cls);
    if (r.value == r.bounds["expected"]) r.notes.push_back("upper bound equals the expected dimension");
    return r;
}

}  // namespace

MatchingReport exceptional_ledger(const Int& d, const Int& m, std::optional<Int> a) {
    if (d == 174 && m == 55) return ledger_174(d, m, a);
    if (d == 193 && m == 61) return ledger_193(d, m, a.value_or(7));
    if (d == 348 && m == 110) return ledger_348(d, m, a.value_or(14));
    throw HypothesisError("no exceptional script for " + pair_str(d, m) +
                          "; scripts exist for (174,55), (193,61), (348,110)");
}

nlohmann::json to_json(const MatchingReport& r) {
    nlohmann::json j;
    j["title"] = r.title;
    j["verdict"] = to_string(r.verdict);
    j["verdict_string"] = r.verdict_string();
    j["value"] = int_json(r.value);
    j["delta"] = int_json(r.delta);
    j["assumptions_used"] = r.assumptions_used;
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [k, v] : r.bounds) b[k] = int_json(v);
    j["bounds"] = b;
    j["notes"] = r.notes;
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : r.steps) {
        nlohmann::json x;
        x["label"] = st.label;
        x["component"] = st.component;
        x["double_curves"] = st.double_curves;
        x["dim_component"] = int_json(st.dim_component);
        x["dim_before"] = int_json(st.dim_before);
        x["dim_after"] = int_json(st.dim_after);
        x["restricted_w"] = st.restricted_w ? int_json(*st.restricted_w) : nlohmann::json(nullptr);
        x["restricted_v"] = st.restricted_v ? int_json(*st.restricted_v) : nlohmann::json(nullptr);
        x["target_dim"] = int_json(st.target_dim);
        x["exact"] = st.exact;
        x["tags"] = st.tags;
        x["note"] = st.note;
        steps.push_back(x);
    }
    j["steps"] = steps;
    return j;
}

std::string render_report(const MatchingReport& r) {
    std::ostringstream o;
    o << r.title << "\n";
    for (const auto& st : r.steps) {
        o << "  " << st.label;
        if (!st.double_curves.empty()) {
            o << " [";
            for (std::size_t i = 0; i < st.double_curves.size(); ++i) o << (i ? " " : "") << st.double_curves[i];
            o << "]";
        }
        if (!st.component.empty()) o << "  dim " << st.dim_component;
        o << "  " << st.dim_before << " -> " << st.dim_after;
        if (st.restricted_w) o << "  r_W " << *st.restricted_w;
        if (st.restricted_v) o << "  r_V " << *st.restricted_v;
        if (st.target_dim >= 0) o << "  target " << st.target_dim;
        if (!st.exact) o << "  (bound)";
        if (!st.tags.empty()) {
            o << "  {";
            for (std::size_t i = 0; i < st.tags.size(); ++i) o << (i ? "," : "") << st.tags[i];
            o << "}";
        }
        if (!st.note.empty()) o << "\n      " << st.note;
        o << "\n";
    }
    o << "  delta = " << r.delta << "\n";
    for (const auto& [k, v] : r.bounds) o << "  " << k << " = " << v << "\n";
    for (const auto& n : r.notes) o << "  note: " << n << "\n";
    o << "assumptions: ";
    if (r.assumptions_used.empty()) o << "none";
    bool first = true;
    for (const auto& a : r.assumptions_used) {
        o << (first ? "" : ", ") << a;
        first = false;
    }
    o << "\nverdict: " << r.verdict_string() << "\n";
    return o.str();
}

}  // namespace shgh

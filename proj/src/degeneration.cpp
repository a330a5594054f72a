#include "shgh/degeneration.hpp"
#include "degen_internal.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace shgh {

namespace {

Int floor_mod2(const Int& x) {
    Int r = x % 2;
    return r < 0 ? r + 2 : r;
}

DivisorClass line(const Int& n = 1) { return DivisorClass(n); }

std::string side_name(const Side& s) { return s.component + ":" + s.curve; }

}  // namespace

Params Params::from(const Int& d, const Int& m, const Int& a) {
    Params p;
    p.d = d;
    p.m = m;
    p.a = a;
    p.e = floor_mod2(d);
    p.c = (d - p.e) / 2;
    p.b = 5 * m + a - 3 * p.c - p.e;
    p.alpha = d - 3 * m;
    p.mu = 6 * d - 19 * m;
    p.ell = -p.mu;
    p.s = floor_mod2(p.ell);
    p.r = (p.ell + p.s) / 2;
    return p;
}

std::string to_string(Normality n) { return n == Normality::NORMAL ? "NORMAL" : "NON-NORMAL"; }

const DivisorClass& Component::curve(const std::string& n) const {
    auto it = curves.find(n);
    if (it == curves.end()) throw TopologyError("component " + name + " has no marked curve " + n);
    return it->second;
}

bool Fiber::has_component(const std::string& n) const {
    return std::any_of(components.begin(), components.end(), [&](const Component& c) { return c.name == n; });
}

const Component& Fiber::component(const std::string& n) const {
    for (const auto& c : components)
        if (c.name == n) return c;
    throw TopologyError("no component named " + n);
}

Component& Fiber::component(const std::string& n) {
    for (auto& c : components)
        if (c.name == n) return c;
    throw TopologyError("no component named " + n);
}

const DoubleCurve& Fiber::double_curve(const std::string& n) const {
    for (const auto& d : double_curves)
        if (d.name == n) return d;
    throw TopologyError("no double curve named " + n);
}

const DivisorClass& Fiber::side_class(const Side& s) const { return component(s.component).curve(s.curve); }

std::vector<std::string> Fiber::component_names() const {
    std::vector<std::string> out;
    for (const auto& c : components) out.push_back(c.name);
    return out;
}

Fiber twist(const Fiber& f, const std::string& component, const Int& t) {
    Fiber g = f;
    Component& x = g.component(component);
    for (const auto& dc : f.double_curves) {
        if (dc.self()) continue;
        const Side* mine = nullptr;
        const Side* other = nullptr;
        if (dc.a.component == component) mine = &dc.a, other = &dc.b;
        if (dc.b.component == component) mine = &dc.b, other = &dc.a;
        if (!mine) continue;
        x.bundle -= t * f.side_class(*mine);
        g.component(other->component).bundle += t * f.side_class(*other);
    }
    HistoryEntry h;
    h.kind = "twist";
    h.component = component;
    h.amount = t;
    g.history.push_back(h);
    return g;
}

Fiber mark_curve(const Fiber& f, const std::string& component, const std::string& name, const DivisorClass& cls) {
    Fiber g = f;
    Component& x = g.component(component);
    check_labels(cls, x.cfg);
    if (x.curves.count(name)) throw TopologyError("curve " + name + " already marked on " + component);
    x.curves[name] = cls;
    return g;
}

Int triple_points(const Fiber& f, const DoubleCurve& dc) {
    const DivisorClass& c = f.side_class(dc.a);
    Int t = 2 * dc.a.nodes;
    for (const auto& other : f.double_curves) {
        for (const Side* s : {&other.a, &other.b}) {
            if (s->component != dc.a.component) continue;
            if (&other == &dc && s == &dc.a) continue;
            t += pair(c, f.side_class(*s));
        }
    }
    return t;
}

namespace {

Int triple_from(const Fiber& f, const DoubleCurve& dc, bool side_a) {
    const Side& me = side_a ? dc.a : dc.b;
    const DivisorClass& c = f.side_class(me);
    Int t = 2 * me.nodes;
    for (const auto& other : f.double_curves)
        for (const Side* s : {&other.a, &other.b}) {
            if (s->component != me.component) continue;
            if (&other == &dc && s == &me) continue;
            t += pair(c, f.side_class(*s));
        }
    return t;
}

// Every double curve built here has rational normalization; a node of one side
// is a triple point already counted through the incidences.
Int chi_curve(const Int& deg) { return deg + 1; }

}  // namespace

ValidationReport validate(const Fiber& f) {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.errors.push_back(msg);
    };

    const Params& p = f.params;
    if (p.d != 2 * p.c + p.e) fail("d != 2c+e");
    if (p.b != 5 * p.m + p.a - 3 * p.c - p.e) fail("b != 5m+a-3c-e");
    if (p.alpha != p.d - 3 * p.m) fail("alpha != d-3m");
    if (p.ell != 19 * p.m - 6 * p.d || p.mu != -p.ell) fail("ell/mu mismatch");
    if (p.ell != 2 * p.r - p.s || (p.s != 0 && p.s != 1)) fail("ell != 2r-s");
    if (p.d != 3 * p.ell + 19 * p.alpha || p.m != p.ell + 6 * p.alpha) fail("d,m != 3l+19alpha, l+6alpha");

    for (const auto& c : f.components) {
        if (c.multiplicity < 1) fail(c.name + ": fibre multiplicity < 1");
        try {
            check_labels(c.bundle, c.cfg);
            for (const auto& [n, cls] : c.curves) check_labels(cls, c.cfg);
        } catch (const Error& e) {
            fail(c.name + ": " + e.what());
        }
        for (const auto& g : c.gluings) {
            if (!c.curves.count(g.curve_a) || !c.curves.count(g.curve_b)) {
                fail(c.name + ": gluing " + g.double_curve + " names unknown curves");
                continue;
            }
            Int meet = pair(c.curve(g.curve_a), c.curve(g.curve_b));
            (void)meet;  // the branches may meet after later throws; only degrees are checked here
            if (pair(c.bundle, c.curve(g.curve_a)) != pair(c.bundle, c.curve(g.curve_b)))
                fail(c.name + ": glued curves " + g.curve_a + ", " + g.curve_b + " carry different degrees");
        }
    }

    for (const auto& dc : f.double_curves) {
        CurveCheck cc;
        cc.name = dc.name;
        cc.side_a = side_name(dc.a);
        cc.side_b = side_name(dc.b);
        try {
            const Component& A = f.component(dc.a.component);
            const Component& B = f.component(dc.b.component);
            const DivisorClass& ca = A.curve(dc.a.curve);
            const DivisorClass& cb = B.curve(dc.b.curve);
            cc.degree_a = pair(A.bundle, ca);
            cc.degree_b = pair(B.bundle, cb);
            cc.self_a = pair(ca, ca);
            cc.self_b = pair(cb, cb);
            cc.nodes_a = dc.a.nodes;
            cc.nodes_b = dc.b.nodes;
            cc.triple_a = triple_from(f, dc, true);
            cc.triple_b = triple_from(f, dc, false);
            cc.tpf = (cc.self_a - 2 * cc.nodes_a) + (cc.self_b - 2 * cc.nodes_b) + cc.triple_a;
            cc.ok = true;
            if (cc.degree_a != cc.degree_b) {
                cc.ok = false;
                fail(dc.name + ": restriction degrees differ (" + int_str(cc.degree_a) + " on " + cc.side_a +
                     ", " + int_str(cc.degree_b) + " on " + cc.side_b + ")");
            }
            if (cc.triple_a != cc.triple_b) {
                cc.ok = false;
                fail(dc.name + ": triple point counts differ (" + int_str(cc.triple_a) + " vs " +
                     int_str(cc.triple_b) + ")");
            }
            if (cc.tpf != 0) {
                cc.ok = false;
                fail(dc.name + ": triple point formula gives " + int_str(cc.tpf) + " (" + int_str(cc.self_a) +
                     " + " + int_str(cc.self_b) + " + " + int_str(cc.triple_a) + ")");
            }
        } catch (const Error& e) {
            fail(dc.name + ": " + e.what());
        }
        rep.curves.push_back(cc);
    }

    // Euler characteristic of the limit bundle against the general fibre.
    rep.chi_general = (p.d + 1) * (p.d + 2) / 2 - 10 * p.m * (p.m + 1) / 2;
    Int chi = 0, triples = 0;
    for (const auto& c : f.components) chi += virtual_dim(c.bundle) + 1;
    for (std::size_t i = 0; i < f.double_curves.size(); ++i) {
        const auto& cc = rep.curves[i];
        chi -= chi_curve(cc.degree_a);
        triples += cc.triple_a;
    }
    rep.chi_central = chi + triples / 3;
    if (rep.ok && triples % 3 != 0) fail("triple point incidences " + int_str(triples) + " not divisible by 3");
    if (rep.ok && rep.chi_central != rep.chi_general)
        fail("Euler characteristic replay: central " + int_str(rep.chi_central) + " vs general " +
             int_str(rep.chi_general));
    return rep;
}

void require_valid(const Fiber& f) {
    auto rep = validate(f);
    if (rep.ok) return;
    std::string msg = "fiber validation failed:";
    for (const auto& e : rep.errors) msg += "\n  " + e;
    throw ValidationError(msg);
}

// ---- scripted degenerations ----

namespace {

std::string ratio_text(const Int& d, const Int& m) { return int_str(d) + "/" + int_str(m); }

void need(bool ok, const std::string& what, const Int& d, const Int& m, const Int& a) {
    if (!ok)
        throw HypothesisError("violated " + what + " at (d,m,a)=(" + int_str(d) + "," + int_str(m) + "," +
                              int_str(a) + "), d/m=" + ratio_text(d, m));
}

Fiber first_unchecked(const Int& d, const Int& m, const Int& a) {
    Fiber f;
    f.stage = 1;
    f.params = Params::from(d, m, a);

    Component V;
    V.name = "V";
    for (int i = 1; i <= 4; ++i) V.cfg.add_free("v" + std::to_string(i));
    V.curves["E"] = line();
    V.bundle = DivisorClass(0);
    for (int i = 1; i <= 4; ++i) V.bundle.set("v" + std::to_string(i), m);

    Component Z;
    Z.name = "Z";
    for (int i = 0; i <= 6; ++i) Z.cfg.add_free("z" + std::to_string(i));
    Z.curves["E"] = DivisorClass::exceptional("z0");
    Z.bundle = DivisorClass(d);
    Z.bundle.set("z0", 0);
    for (int i = 1; i <= 6; ++i) Z.bundle.set("z" + std::to_string(i), m);

    f.components = {V, Z};
    DoubleCurve E;
    E.name = "E";
    E.a = {"V", "E", 0, {}};
    E.b = {"Z", "E", 0, "z0"};
    f.double_curves = {E};
    return twist(f, "Z", 2 * m + a);
}

DivisorClass cubic_class() {
    DivisorClass c(3);
    c.set("z0", 2);
    for (int i = 1; i <= 6; ++i) c.set("z" + std::to_string(i), 1);
    return c;
}

Fiber second_unchecked(const Int& d, const Int& m, const Int& a) {
    Fiber f = first_unchecked(d, m, a);
    f = mark_curve(f, "Z", "C", cubic_class());
    ThrowNames n;
    n.plane = "T";
    n.points = {"f1", "f2"};
    n.fcurve = "F";
    n.gcurves = {"G1", "G2"};
    f = two_throw(f, "Z", "C", n);
    f.stage = 2;
    return f;
}

}  // namespace

DivisorClass conic_class(int i) {
    DivisorClass c(2);
    for (int j = 1; j <= 4; ++j) c.set("v" + std::to_string(j), 1);
    c.set("f" + std::to_string(i), 1);
    return c;
}

DivisorClass quartic_class(int j) {
    DivisorClass q(4);
    for (int i = 1; i <= 4; ++i) q.set("v" + std::to_string(i), i == j ? 1 : 2);
    for (int i = 1; i <= 2; ++i) {
        q.set("f" + std::to_string(i), 1);
        q.set("f" + std::to_string(i) + "'", 1);
    }
    return q;
}

namespace {

Fiber third_from_second(Fiber f) {
    const Params& p = f.params;
    f = twist(f, "T", -(p.b - 2 * p.a - p.e));
    for (int i = 1; i <= 2; ++i) {
        std::string s = std::to_string(i);
        f = mark_curve(f, "V", "C" + s, conic_class(i));
        ThrowNames n;
        n.plane = "U" + s;
        n.points = {"x" + s, "t" + s};
        n.fcurve = "A" + s;
        n.gcurves = {"B" + s, "N" + s};
        f = two_throw(f, "V", "C" + s, n);
    }
    f.stage = 3;
    return f;
}

Fiber fourth_from_third(Fiber f) {
    const Params& p = f.params;
    if (p.ell > 0) {
        for (int j = 1; j <= 4; ++j) {
            std::string s = std::to_string(j);
            f = mark_curve(f, "V", "Q" + s, quartic_class(j));
            ThrowNames n;
            n.plane = "Y" + s;
            n.points = {"s" + s, "u" + s};
            n.fcurve = "H" + s;
            n.gcurves = {"K" + s, "M" + s};
            f = two_throw(f, "V", "Q" + s, n);
        }
    }
    f.stage = 4;
    return f;
}

}  // namespace

Fiber build_first(const Int& d, const Int& m, const Int& a) {
    need(d >= 0, "d >= 0", d, m, a);
    need(m >= 0, "m >= 0", d, m, a);
    need(a >= 0, "a >= 0", d, m, a);
    Fiber f = first_unchecked(d, m, a);
    require_valid(f);
    return f;
}

Fiber build_second(const Int& d, const Int& m, const Int& a) {
    need(m > 0, "m > 0", d, m, a);
    need(a >= 0, "a >= 0", d, m, a);
    need(5 * d >= 16 * m, "16/5 <= d/m", d, m, a);
    need(3 * d < 10 * m, "d/m < 10/3", d, m, a);
    Fiber f = second_unchecked(d, m, a);
    require_valid(f);
    return f;
}

Fiber build_third_unchecked(const Int& d, const Int& m, const Int& a) {
    Fiber f = third_from_second(second_unchecked(d, m, a));
    f.scripted_window = false;
    require_valid(f);
    return f;
}

Fiber build_third(const Int& d, const Int& m, const Int& a) {
    need(m > 0, "m > 0", d, m, a);
    need(a >= 0, "a >= 0", d, m, a);
    need(6 * d >= 19 * m, "19/6 <= d/m", d, m, a);
    need(5 * d < 16 * m, "d/m < 16/5", d, m, a);
    Params p = Params::from(d, m, a);
    need(p.b > 2 * a, "b > 2a", d, m, a);
    Fiber f = third_from_second(second_unchecked(d, m, a));
    require_valid(f);
    return f;
}

Fiber build_fourth_unchecked(const Int& d, const Int& m, const Int& a) {
    Fiber f = fourth_from_third(third_from_second(second_unchecked(d, m, a)));
    f.scripted_window = false;
    require_valid(f);
    return f;
}

Fiber build_fourth(const Int& d, const Int& m, const Int& a) {
    need(m > 0, "m > 0", d, m, a);
    need(a >= 0, "a >= 0", d, m, a);
    need(55 * d >= 174 * m, "174/55 <= d/m", d, m, a);
    need(6 * d <= 19 * m, "d/m <= 19/6", d, m, a);
    Params p = Params::from(d, m, a);
    need(p.b > 2 * a, "b > 2a", d, m, a);
    Fiber f = fourth_from_third(third_from_second(second_unchecked(d, m, a)));
    require_valid(f);
    return f;
}

Fiber build_stage(int stage, const Int& d, const Int& m, const Int& a) {
    switch (stage) {
        case 1: return build_first(d, m, a);
        case 2: return build_second(d, m, a);
        case 3: return build_third(d, m, a);
        case 4: return build_fourth(d, m, a);
    }
    throw HypothesisError("stage must be 1..4, got " + std::to_string(stage));
}

// ---- serialization ----

namespace {

nlohmann::json params_json(const Params& p) {
    return {{"d", int_json(p.d)},         {"m", int_json(p.m)},   {"a", int_json(p.a)},
            {"b", int_json(p.b)},         {"c", int_json(p.c)},   {"e", int_json(p.e)},
            {"alpha", int_json(p.alpha)}, {"mu", int_json(p.mu)}, {"ell", int_json(p.ell)},
            {"r", int_json(p.r)},         {"s", int_json(p.s)}};
}

nlohmann::json side_json(const Side& s) {
    nlohmann::json j = {{"component", s.component}, {"curve", s.curve}, {"nodes", s.nodes}};
    j["on_point"] = s.on_point ? nlohmann::json(*s.on_point) : nlohmann::json();
    return j;
}

Side side_from(const nlohmann::json& j) {
    Side s{j.at("component").get<std::string>(), j.at("curve").get<std::string>(), j.at("nodes").get<int>(), {}};
    if (j.contains("on_point") && !j.at("on_point").is_null()) s.on_point = j.at("on_point").get<std::string>();
    return s;
}

DivisorClass class_from(const nlohmann::json& j, const Configuration& cfg) {
    DivisorClass c(int_from_json(j.at("degree")));
    for (const auto& e : j.at("mults")) c.set(e.at("label").get<std::string>(), int_from_json(e.at("mult")));
    check_labels(c, cfg);
    return c;
}

}  // namespace

nlohmann::json to_json(const Fiber& f) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : f.components) {
        nlohmann::json curves = nlohmann::json::object();
        for (const auto& [n, cls] : c.curves) curves[n] = to_json(cls, c.cfg);
        nlohmann::json glue = nlohmann::json::array();
        for (const auto& g : c.gluings)
            glue.push_back({{"double_curve", g.double_curve},
                            {"curve_a", g.curve_a},
                            {"curve_b", g.curve_b},
                            {"identified_points", g.identified_points},
                            {"assumption", g.assumption}});
        comps.push_back({{"name", c.name},
                         {"multiplicity", c.multiplicity},
                         {"normality", to_string(c.normality())},
                         {"configuration", to_json(c.cfg)},
                         {"bundle", to_json(c.bundle, c.cfg)},
                         {"curves", curves},
                         {"contracted", c.contracted},
                         {"gluings", glue}});
    }
    nlohmann::json dcs = nlohmann::json::array();
    for (const auto& d : f.double_curves)
        dcs.push_back({{"name", d.name},
                       {"a", side_json(d.a)},
                       {"b", side_json(d.b)},
                       {"triple_points", int_json(triple_points(f, d))}});
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& h : f.history)
        hist.push_back({{"kind", h.kind},
                        {"component", h.component},
                        {"curve", h.curve},
                        {"amount", int_json(h.amount)},
                        {"ell", int_json(h.ell)},
                        {"eps", int_json(h.eps)},
                        {"hits", h.hits},
                        {"created", h.created}});
    return {{"stage", f.stage},
            {"params", params_json(f.params)},
            {"scripted_window", f.scripted_window},
            {"components", comps},
            {"double_curves", dcs},
            {"history", hist}};
}

Fiber fiber_from_json(const nlohmann::json& j) {
    Fiber f;
    f.stage = j.at("stage").get<int>();
    const auto& p = j.at("params");
    f.params = Params::from(int_from_json(p.at("d")), int_from_json(p.at("m")), int_from_json(p.at("a")));
    f.scripted_window = j.at("scripted_window").get<bool>();
    for (const auto& cj : j.at("components")) {
        Component c;
        c.name = cj.at("name").get<std::string>();
        c.multiplicity = cj.at("multiplicity").get<int>();
        for (const auto& pt : cj.at("configuration")) {
            if (pt.at("parent").is_null())
                c.cfg.add_free(pt.at("label").get<std::string>());
            else
                c.cfg.add_child(pt.at("label").get<std::string>(), pt.at("parent").get<std::string>());
        }
        c.bundle = class_from(cj.at("bundle"), c.cfg);
        for (const auto& [n, cls] : cj.at("curves").items()) c.curves[n] = class_from(cls, c.cfg);
        c.contracted = cj.at("contracted").get<std::vector<std::string>>();
        for (const auto& g : cj.at("gluings"))
            c.gluings.push_back({g.at("double_curve").get<std::string>(), g.at("curve_a").get<std::string>(),
                                 g.at("curve_b").get<std::string>(),
                                 g.at("identified_points").get<std::vector<std::string>>(),
                                 g.at("assumption").get<std::string>()});
        f.components.push_back(std::move(c));
    }
    for (const auto& dj : j.at("double_curves"))
        f.double_curves.push_back({dj.at("name").get<std::string>(), side_from(dj.at("a")), side_from(dj.at("b"))});
    for (const auto& hj : j.at("history")) {
        HistoryEntry h;
        h.kind = hj.at("kind").get<std::string>();
        h.component = hj.at("component").get<std::string>();
        h.curve = hj.at("curve").get<std::string>();
        h.amount = int_from_json(hj.at("amount"));
        h.ell = int_from_json(hj.at("ell"));
        h.eps = int_from_json(hj.at("eps"));
        h.hits = hj.at("hits").get<std::vector<std::string>>();
        h.created = hj.at("created").get<std::string>();
        f.history.push_back(h);
    }
    return f;
}

nlohmann::json to_json(const ValidationReport& r) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : r.curves)
        curves.push_back({{"name", c.name},
                          {"side_a", c.side_a},
                          {"side_b", c.side_b},
                          {"degree_a", int_json(c.degree_a)},
                          {"degree_b", int_json(c.degree_b)},
                          {"self_a", int_json(c.self_a)},
                          {"self_b", int_json(c.self_b)},
                          {"nodes_a", c.nodes_a},
                          {"nodes_b", c.nodes_b},
                          {"triple_points", int_json(c.triple_a)},
                          {"tpf", int_json(c.tpf)},
                          {"ok", c.ok}});
    return {{"ok", r.ok},
            {"curves", curves},
            {"chi_general", int_json(r.chi_general)},
            {"chi_central", int_json(r.chi_central)},
            {"errors", r.errors}};
}

namespace detail {

std::string render_class(const DivisorClass& c, const Configuration& cfg, const std::vector<std::string>& marked) {
    auto fmt = [&](const std::string& l) {
        std::string v = int_str(c.mult(l));
        return std::find(marked.begin(), marked.end(), l) != marked.end() ? "_" + v + "_" : v;
    };
    std::vector<std::string> entries;
    std::function<void(const std::string&)> walk = [&](const std::string& root) {
        std::vector<std::string> chain{fmt(root)};
        std::string cur = root;
        for (;;) {
            auto ch = cfg.children(cur);
            if (ch.size() != 1) {
                std::string e = chain[0];
                if (chain.size() > 1) {
                    e = "[";
                    for (std::size_t i = 0; i < chain.size(); ++i) e += (i ? "," : "") + chain[i];
                    e += "]";
                }
                entries.push_back(e);
                for (const auto& k : ch) walk(k);
                return;
            }
            cur = ch[0];
            chain.push_back(fmt(cur));
        }
    };
    for (const auto& p : cfg.points())
        if (!p.parent) walk(p.label);
    std::string out = "L(" + int_str(c.degree);
    for (std::size_t j = 0; j < entries.size();) {
        std::size_t k = j + 1;
        while (k < entries.size() && entries[k] == entries[j]) ++k;
        out += (j ? ", " : "; ") + entries[j];
        if (k - j > 1) out += "^" + std::to_string(k - j);
        j = k;
    }
    return out + ")";
}

}  // namespace detail

using detail::render_class;

std::string render_fiber(const Fiber& f) {
    std::ostringstream os;
    const Params& p = f.params;
    os << "stage " << f.stage << "  (d,m,a)=(" << p.d << "," << p.m << "," << p.a << ")  b=" << p.b
       << " c=" << p.c << " e=" << p.e << " alpha=" << p.alpha << " ell=" << p.ell << " r=" << p.r
       << " s=" << p.s;
    if (!f.scripted_window) os << "  [outside section window]";
    os << "\ncomponents:\n";
    for (const auto& c : f.components) {
        os << "  " << c.name << "  " << render_class(c.bundle, c.cfg);
        if (c.normality() == Normality::NON_NORMAL) {
            os << "  non-normal:";
            for (const auto& g : c.gluings) os << " " << g.curve_a << "~" << g.curve_b;
        }
        if (!c.contracted.empty()) {
            os << "  contracted:";
            for (const auto& k : c.contracted) os << " " << k;
        }
        os << "\n";
    }
    os << "double curves:\n";
    for (const auto& d : f.double_curves) {
        const DivisorClass& ca = f.side_class(d.a);
        const DivisorClass& cb = f.side_class(d.b);
        os << "  " << d.name << "  " << d.a.component << "(" << pair(ca, ca);
        if (d.a.nodes) os << ", " << d.a.nodes << " node";
        os << ") -- " << d.b.component << "(" << pair(cb, cb);
        if (d.b.nodes) os << ", " << d.b.nodes << " node";
        os << ")  degree " << pair(f.component(d.a.component).bundle, ca) << "  triple points "
           << triple_points(f, d) << "\n";
    }
    return os.str();
}

}  // namespace shgh

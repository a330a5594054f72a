#include "shgh/degeneration.hpp"

#include <algorithm>

namespace shgh {

namespace {

struct Hit {
    std::size_t dc;       // index into double_curves
    bool side_a;          // which side lies on the throwing component
};


const Side& far_side(const Fiber& f, const Hit& h) {
    const auto& dc = f.double_curves[h.dc];
    return h.side_a ? dc.b : dc.a;
}

Int check_minus_one(const Fiber& f, const std::string& comp, const std::string& curve) {
    const Component& X = f.component(comp);
    const DivisorClass& C = X.curve(curve);
    if (std::find(X.contracted.begin(), X.contracted.end(), curve) != X.contracted.end())
        throw TopologyError(curve + " on " + comp + " was already thrown");
    Int c2 = pair(C, C);
    Int ck = pair(C, canonical_class(X.cfg));
    if (c2 != -1 || ck != -1)
        throw TopologyError(curve + " on " + comp + " is not a (-1)-curve (C^2=" + int_str(c2) +
                            ", C.K=" + int_str(ck) + ")");
    Int k = -pair(X.bundle, C);
    if (k <= 0)
        throw NoOpThrow("bundle on " + comp + " has degree " + int_str(-k) + " on " + curve +
                        "; nothing to throw");
    return k;
}

std::vector<Hit> collect_hits(const Fiber& f, const std::string& comp, const DivisorClass& C) {
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < f.double_curves.size(); ++i) {
        const auto& dc = f.double_curves[i];
        for (bool sa : {true, false}) {
            const Side& s = sa ? dc.a : dc.b;
            if (s.component != comp) continue;
            Int n = pair(C, f.side_class(s));
            if (n < 0)
                throw TopologyError("thrown curve is a component of double curve " + dc.name);
            for (Int t = 0; t < n; ++t) hits.push_back({i, sa});
        }
    }
    return hits;
}

// Pull every other marked curve on the throwing side back along C, and move
// the bundle off C.
void contract(Fiber& g, const std::string& comp, const std::string& curve, const Int& k) {
    Component& X = g.component(comp);
    const DivisorClass C = X.curve(curve);
    std::map<std::string, DivisorClass> updated;
    for (const auto& [n, cls] : X.curves) {
        if (n == curve) continue;
        if (std::find(X.contracted.begin(), X.contracted.end(), n) != X.contracted.end()) continue;
        updated[n] = cls + pair(cls, C) * C;
    }
    for (auto& [n, cls] : updated) X.curves[n] = cls;
    X.bundle -= k * C;
    X.contracted.push_back(curve);
}

void add_point(Component& N, const std::string& label, const Side& side) {
    if (N.cfg.contains(label)) throw TopologyError("point " + label + " already exists on " + N.name);
    if (side.on_point)
        N.cfg.add_child(label, *side.on_point);
    else
        N.cfg.add_free(label);
}

std::string hit_name(const Fiber& f, const Hit& h) {
    const auto& dc = f.double_curves[h.dc];
    if (!dc.self()) return dc.name;
    return dc.name + "(" + (h.side_a ? dc.a.curve : dc.b.curve) + ")";
}

std::vector<std::string> crossing_curves(const Component& c, const std::string& x, const std::string& y) {
    std::vector<std::string> out;
    for (const auto& [n, cls] : c.curves) {
        if (n == x || n == y) continue;
        if (std::find(c.contracted.begin(), c.contracted.end(), n) != c.contracted.end()) continue;
        if (pair(cls, c.curve(x)) != 0 || pair(cls, c.curve(y)) != 0) out.push_back(n);
    }
    return out;
}

}  // namespace

Fiber one_throw(const Fiber& f, const std::string& comp, const std::string& curve, const std::string& point) {
    Int k = check_minus_one(f, comp, curve);
    auto hits = collect_hits(f, comp, f.component(comp).curve(curve));
    if (hits.size() != 1)
        throw TopologyError("1-throw needs the curve to meet the double locus once, it meets it " +
                            std::to_string(hits.size()) + " times");
    Fiber g = f;
    const Hit h = hits[0];
    const Side nb = far_side(f, h);
    contract(g, comp, curve, k);

    Component& N = g.component(nb.component);
    std::string p = point.empty() ? curve + "_p" : point;
    add_point(N, p, nb);
    N.bundle.set(p, k);
    N.curves[nb.curve] -= DivisorClass::exceptional(p);

    HistoryEntry e;
    e.kind = "1-throw";
    e.component = comp;
    e.curve = curve;
    e.amount = k;
    e.hits = {hit_name(f, h)};
    g.history.push_back(e);
    return g;
}

Fiber two_throw(const Fiber& f, const std::string& comp, const std::string& curve, const ThrowNames& names_in) {
    Int k = check_minus_one(f, comp, curve);
    auto hits = collect_hits(f, comp, f.component(comp).curve(curve));
    if (hits.size() != 2)
        throw TopologyError("2-throw needs the curve to meet the double locus twice, it meets it " +
                            std::to_string(hits.size()) + " times");

    ThrowNames n = names_in;
    if (n.plane.empty()) n.plane = "P" + curve;
    for (int j = 0; j < 2; ++j) {
        std::string s = std::to_string(j + 1);
        if (n.points[j].empty()) n.points[j] = curve + "p" + s;
        if (n.gcurves[j].empty()) n.gcurves[j] = "G" + curve + s;
    }
    if (n.fcurve.empty()) n.fcurve = "F" + curve;
    if (f.has_component(n.plane)) throw TopologyError("component " + n.plane + " already exists");

    const Int eps = ((k % 2) + 2) % 2;
    const Int ell = (k + eps) / 2;

    Fiber g = f;
    const Side nb[2] = {far_side(f, hits[0]), far_side(f, hits[1])};
    const bool same_side = hits[0].dc == hits[1].dc && hits[0].side_a == hits[1].side_a;
    contract(g, comp, curve, k);
    if (same_side) {
        auto& dc = g.double_curves[hits[0].dc];
        (hits[0].side_a ? dc.a : dc.b).nodes += 1;
    }

    std::string child[2];
    for (int j = 0; j < 2; ++j) {
        Component& N = g.component(nb[j].component);
        const std::string& p = n.points[j];
        child[j] = p + "'";
        add_point(N, p, nb[j]);
        N.cfg.add_child(child[j], p);
        N.bundle.set(p, ell);
        N.bundle.set(child[j], ell - eps);
        N.curves[nb[j].curve] -= DivisorClass::exceptional(p) + DivisorClass::exceptional(child[j]);
    }

    // F curves
    std::vector<DoubleCurve> fresh;
    if (nb[0].component == nb[1].component) {
        Component& N = g.component(nb[0].component);
        std::string f1 = n.fcurve + "1", f2 = n.fcurve + "2";
        N.curves[f1] = DivisorClass::exceptional(child[0]);
        N.curves[f2] = DivisorClass::exceptional(child[1]);
        DoubleCurve dc;
        dc.name = n.fcurve;
        dc.a = {N.name, f1, 0, child[0]};
        dc.b = {N.name, f2, 0, child[1]};
        fresh.push_back(dc);
        GluingRecord gr;
        gr.double_curve = n.fcurve;
        gr.curve_a = f1;
        gr.curve_b = f2;
        gr.identified_points = crossing_curves(N, f1, f2);
        N.gluings.push_back(gr);
    } else {
        DoubleCurve dc;
        dc.name = n.fcurve;
        for (int j = 0; j < 2; ++j) {
            Component& N = g.component(nb[j].component);
            N.curves[n.fcurve] = DivisorClass::exceptional(child[j]);
            (j == 0 ? dc.a : dc.b) = Side{N.name, n.fcurve, 0, child[j]};
        }
        fresh.push_back(dc);
    }

    // new plane and the G curves
    Component P;
    P.name = n.plane;
    P.bundle = DivisorClass(eps);
    for (int j = 0; j < 2; ++j) {
        Component& N = g.component(nb[j].component);
        const std::string& gc = n.gcurves[j];
        if (N.curves.count(gc) || P.curves.count(gc)) throw TopologyError("curve name " + gc + " in use");
        N.curves[gc] = DivisorClass::exceptional(n.points[j]) - DivisorClass::exceptional(child[j]);
        P.curves[gc] = DivisorClass(1);
        DoubleCurve dc;
        dc.name = gc;
        dc.a = {N.name, gc, 0, n.points[j]};
        dc.b = {P.name, gc, 0, {}};
        fresh.push_back(dc);
    }
    g.components.push_back(P);
    for (auto& dc : fresh) g.double_curves.push_back(dc);

    HistoryEntry e;
    e.kind = "2-throw";
    e.component = comp;
    e.curve = curve;
    e.amount = k;
    e.ell = ell;
    e.eps = eps;
    e.hits = {hit_name(f, hits[0]), hit_name(f, hits[1])};
    e.created = n.plane + " (intermediate surface has multiplicity 2, blown down)";
    g.history.push_back(e);
    return g;
}

}  // namespace shgh

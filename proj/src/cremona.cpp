#include "shgh/cremona.hpp"

#include <algorithm>
#include <boost/multiprecision/integer.hpp>

namespace shgh {

std::size_t TransformLog::quadratic_steps() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += std::holds_alternative<QuadStep>(s);
    return n;
}

std::vector<SplitStep> TransformLog::splits() const {
    std::vector<SplitStep> out;
    for (const auto& s : steps)
        if (auto* p = std::get_if<SplitStep>(&s)) out.push_back(*p);
    return out;
}

DivisorClass quadratic_transform(const DivisorClass& L, const Triple& t, const Configuration& cfg) {
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
        throw InvalidTriple("quadratic transform needs three distinct points");
    for (const auto& l : t)
        if (!cfg.contains(l)) throw InvalidTriple("label " + l + " not in configuration");
    check_labels(L, cfg);
    Int m0 = L.mult(t[0]), m1 = L.mult(t[1]), m2 = L.mult(t[2]);
    const Int& d = L.degree;
    DivisorClass r = L;
    r.degree = 2 * d - m0 - m1 - m2;
    r.set(t[0], d - m1 - m2);
    r.set(t[1], d - m0 - m2);
    r.set(t[2], d - m0 - m1);
    return r;
}

std::vector<std::string> reduction_order(const DivisorClass& L, const Configuration& cfg) {
    struct Key {
        Int m;
        int depth;
        std::size_t idx;
        std::string label;
    };
    std::vector<Key> keys;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const auto& l = cfg.points()[i].label;
        keys.push_back({L.mult(l), cfg.depth(l), i, l});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.m != b.m) return a.m > b.m;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.idx < b.idx;
    });
    std::vector<std::string> out;
    for (auto& k : keys) out.push_back(std::move(k.label));
    return out;
}

bool is_standard(const DivisorClass& L, const Configuration& cfg) {
    auto ord = reduction_order(L, cfg);
    Int s = 0;
    for (std::size_t i = 0; i < 3 && i < ord.size(); ++i) s += L.mult(ord[i]);
    for (const auto& [l, m] : L.mults)
        if (m < 0) return false;
    return L.degree >= 0 && s <= L.degree;
}

Reduction reduce_to_standard(const LinearSystem& s) {
    Reduction r;
    r.cfg = s.cfg;
    r.input = s.cls.aligned(s.cfg);
    DivisorClass cur = r.input;
    std::vector<std::string> padding;
    std::vector<Triple> applied;

    auto pull_back = [&](DivisorClass c) {
        for (auto it = applied.rbegin(); it != applied.rend(); ++it) c = quadratic_transform(c, *it, r.cfg);
        return c;
    };

    for (;;) {
        for (const auto& p : r.cfg.points()) {
            Int m = cur.mult(p.label);
            if (m < 0) {
                r.log.steps.push_back(SplitStep{p.label, -m, pull_back(DivisorClass::exceptional(p.label))});
                cur.set(p.label, 0);
            }
        }
        if (cur.degree < 0) {
            r.empty = true;
            break;
        }
        auto ord = reduction_order(cur, r.cfg);
        Int top = 0;
        for (std::size_t i = 0; i < 3 && i < ord.size(); ++i) top += cur.mult(ord[i]);
        if (top <= cur.degree) break;
        if (ord.size() < 3) {
            PadStep pad;
            while (r.cfg.size() < 3) {
                std::string l = "o" + std::to_string(padding.size() + 1);
                r.cfg.add_free(l);
                cur.set(l, 0);
                padding.push_back(l);
                pad.labels.push_back(l);
            }
            r.log.steps.push_back(pad);
            ord = reduction_order(cur, r.cfg);
        }
        Triple t{ord[0], ord[1], ord[2]};
        QuadStep q;
        q.triple = t;
        q.before = cur;
        q.after = quadratic_transform(cur, t, r.cfg);
        for (const auto& l : t) q.advisory = q.advisory || r.cfg.depth(l) > 0;
        cur = q.after;
        applied.push_back(t);
        r.log.steps.push_back(std::move(q));
    }

    r.result = cur;
    std::erase_if(r.result.mults, [&](const auto& e) {
        return e.second == 0 && std::find(padding.begin(), padding.end(), e.first) != padding.end();
    });
    return r;
}

std::vector<DivisorClass> replay_chain(const DivisorClass& L, const Configuration& cfg,
                                       const std::vector<Triple>& chain) {
    std::vector<DivisorClass> out{L};
    for (const auto& t : chain) out.push_back(quadratic_transform(out.back(), t, cfg));
    return out;
}

std::string render_row(const DivisorClass& L, const Configuration& cfg, const std::vector<std::string>& marked) {
    auto fmt = [&](const std::string& l) {
        std::string v = int_str(L.mult(l));
        if (std::find(marked.begin(), marked.end(), l) != marked.end()) return "_" + v + "_";
        return v;
    };
    std::vector<std::string> entries;
    for (const auto& p : cfg.points()) {
        if (p.parent) continue;
        std::vector<std::string> chain{fmt(p.label)};
        std::string cur = p.label;
        for (;;) {
            auto ch = cfg.children(cur);
            if (ch.size() != 1) break;
            cur = ch[0];
            chain.push_back(fmt(cur));
        }
        if (chain.size() == 1) {
            entries.push_back(chain[0]);
        } else {
            std::string e = "[";
            for (std::size_t j = 0; j < chain.size(); ++j) e += (j ? ", " : "") + chain[j];
            entries.push_back(e + "]");
        }
    }
    std::string out = int_str(L.degree);
    for (std::size_t j = 0; j < entries.size(); ++j) out += (j ? ", " : "; ") + entries[j];
    return out;
}

std::vector<std::string> render_table(const Reduction& r) {
    std::vector<std::string> rows;
    for (const auto& s : r.log.steps)
        if (auto* q = std::get_if<QuadStep>(&s))
            rows.push_back(render_row(q->before, r.cfg, {q->triple.begin(), q->triple.end()}));
    DivisorClass last = r.result;
    rows.push_back(render_row(last, r.cfg, {}));
    return rows;
}

nlohmann::json to_json(const Reduction& r) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : r.log.steps) {
        if (auto* q = std::get_if<QuadStep>(&s)) {
            steps.push_back({{"kind", "quadratic"},
                             {"triple", {q->triple[0], q->triple[1], q->triple[2]}},
                             {"before", to_json(q->before, r.cfg)},
                             {"after", to_json(q->after, r.cfg)},
                             {"advisory", q->advisory}});
        } else if (auto* sp = std::get_if<SplitStep>(&s)) {
            steps.push_back({{"kind", "split"},
                             {"label", sp->label},
                             {"times", int_json(sp->times)},
                             {"original", to_json(sp->original, r.cfg)}});
        } else if (auto* pd = std::get_if<PadStep>(&s)) {
            steps.push_back({{"kind", "pad"}, {"labels", pd->labels}});
        }
    }
    return {{"input", to_json(r.input, r.cfg)},
            {"result", to_json(r.result, r.cfg)},
            {"empty", r.empty},
            {"steps", steps},
            {"table", render_table(r)}};
}

SplitResult split_fixed_neg_curves(const DivisorClass& L, const Configuration& cfg, int degree_bound) {
    check_labels(L, cfg);
    SplitResult out;
    out.residual = L;
    Int cap = 10 * (Int(cfg.size()) + abs(L.degree));
    for (Int it = 0;; ++it) {
        if (it > cap) throw BoundExceeded("splitting did not terminate within " + int_str(cap) + " steps");
        auto rep = enumerate_negative_classes(cfg, out.residual, degree_bound, -1);
        if (rep.classes.empty() || rep.classes.front().pairing >= 0) break;
        const auto& c = rep.classes.front();
        Int n = -c.pairing;
        out.residual -= n * c.cls;
        out.splits.push_back({c.cls, n});
    }
    return out;
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::EMPTY: return "EMPTY";
        case Kind::STANDARD: return "STANDARD";
        case Kind::CREMONA_REDUCIBLE: return "CREMONA-REDUCIBLE";
        case Kind::MINUS_ONE_SPECIAL: return "MINUS-ONE-SPECIAL";
        case Kind::EXCELLENT: return "EXCELLENT";
        case Kind::ALMOST_EXCELLENT: return "ALMOST-EXCELLENT";
    }
    return "?";
}

Classification classify(const DivisorClass& L, const Configuration& cfg) {
    Classification c{Kind::STANDARD, reduce_to_standard({cfg, L}), {}};
    const Reduction& r = c.reduction;
    if (r.empty) {
        c.kind = Kind::EMPTY;
        return c;
    }
    for (const auto& s : r.log.splits())
        if (s.times >= 2) c.special_splits.push_back(s);
    if (!c.special_splits.empty()) {
        c.kind = Kind::MINUS_ONE_SPECIAL;
        return c;
    }
    Int slack = 3 * r.result.degree;
    for (const auto& [l, m] : r.result.mults) slack -= m;
    if (slack > 0)
        c.kind = Kind::EXCELLENT;
    else if (slack == 0)
        c.kind = Kind::ALMOST_EXCELLENT;
    else if (r.log.steps.empty())
        c.kind = Kind::STANDARD;
    else
        c.kind = Kind::CREMONA_REDUCIBLE;
    return c;
}

std::string to_string(DimStatus s) { return s == DimStatus::PROVEN ? "PROVEN" : "CONJECTURAL"; }

DimResult shgh_dim(const DivisorClass& L, const Configuration& cfg) {
    DimResult out{-1, DimStatus::CONJECTURAL, reduce_to_standard({cfg, L}), ""};
    const Reduction& r = out.reduction;
    if (!r.empty) out.dim = expected_dim(r.result);

    std::size_t support = 0;
    bool all_free = true;
    for (const auto& [l, m] : L.mults)
        if (m != 0) {
            ++support;
            all_free = all_free && cfg.is_free(l);
        }
    for (const auto& p : cfg.points())
        if (p.parent && L.mult(p.label) == 0 && L.mult(*p.parent) != 0) all_free = false;
    if (support <= 9 && all_free) out.status = DimStatus::PROVEN;

    if (!r.empty && r.result.nonzero_count() == 9) {
        Int slack = 3 * r.result.degree;
        Int first = r.result.mults.empty() ? Int(0) : r.result.mults.front().second;
        bool uniform = true;
        for (const auto& [l, m] : r.result.mults) {
            slack -= m;
            if (m != 0 && m != first) uniform = false;
        }
        if (slack == 0 && uniform) out.note = "multiple of the anticanonical class on nine points: dimension 0";
    }
    return out;
}

std::string to_string(NagataVerdict v) {
    switch (v) {
        case NagataVerdict::EMPTY_CONJECTURAL: return "EMPTY-CONJECTURAL";
        case NagataVerdict::EMPTY_PROVEN: return "EMPTY-PROVEN";
        case NagataVerdict::NO_PREDICTION: return "NO-PREDICTION";
    }
    return "?";
}

NagataVerdict nagata_empty(const DivisorClass& L, std::size_t k) {
    if (k < 10) throw OutOfScope("Nagata predicate needs k >= 10");
    if (L.degree <= 0) return NagataVerdict::NO_PREDICTION;
    Int sum = 0;
    for (const auto& [l, m] : L.mults) sum += m;
    if (sum <= 0 || sum * sum < L.degree * L.degree * k) return NagataVerdict::NO_PREDICTION;
    Int r = boost::multiprecision::sqrt(Int(k));
    return r * r == Int(k) ? NagataVerdict::EMPTY_PROVEN : NagataVerdict::EMPTY_CONJECTURAL;
}

}  // namespace shgh

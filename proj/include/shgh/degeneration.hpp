#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shgh/cremona.hpp"
#include "shgh/lattice.hpp"

namespace shgh {

// Derived numbers attached to (d, m, a).
struct Params {
    Int d, m, a;
    Int c, e, b, alpha, mu, ell, r, s;
    static Params from(const Int& d, const Int& m, const Int& a);
};

struct GluingRecord {
    std::string double_curve;
    std::string curve_a, curve_b;                 // identified on the normalization
    std::vector<std::string> identified_points;   // marked curves crossing curve_a / curve_b
    std::string assumption = "OMEGA-GENERAL";
};

enum class Normality { NORMAL, NON_NORMAL };
std::string to_string(Normality n);

struct Component {
    std::string name;
    Configuration cfg;
    std::map<std::string, DivisorClass> curves;   // marked curves, incl. double-curve sides
    std::vector<std::string> contracted;          // thrown curves (kept on the blow-up model)
    int multiplicity = 1;
    DivisorClass bundle;
    std::vector<GluingRecord> gluings;

    Normality normality() const { return gluings.empty() ? Normality::NORMAL : Normality::NON_NORMAL; }
    const DivisorClass& curve(const std::string& n) const;
};

struct Side {
    std::string component;
    std::string curve;
    int nodes = 0;
    std::optional<std::string> on_point;   // new points on this curve attach here as children
};

struct DoubleCurve {
    std::string name;
    Side a, b;
    bool self() const { return a.component == b.component; }
};

struct HistoryEntry {
    std::string kind;       // "twist", "1-throw", "2-throw"
    std::string component;
    std::string curve;      // thrown curve; empty for twists
    Int amount;             // twist t, or throw k
    Int ell, eps;           // 2-throw split k = 2 ell - eps
    std::vector<std::string> hits;   // double curves crossed, in order
    std::string created;             // new plane component, if any
};

struct Fiber {
    int stage = 0;
    Params params;
    bool scripted_window = true;     // false when built outside the section window
    std::vector<Component> components;
    std::vector<DoubleCurve> double_curves;
    std::vector<HistoryEntry> history;

    bool has_component(const std::string& n) const;
    const Component& component(const std::string& n) const;
    Component& component(const std::string& n);
    const DoubleCurve& double_curve(const std::string& n) const;
    const DivisorClass& side_class(const Side& s) const;
    std::vector<std::string> component_names() const;
};

// Optional names for objects a throw creates. Empty fields get defaults
// derived from the thrown curve's name.
struct ThrowNames {
    std::string plane;
    std::array<std::string, 2> points;     // parents; children get a trailing '
    std::string fcurve;                    // double curve formed by the two F curves
    std::array<std::string, 2> gcurves;    // plane / neighbour double curves
};

Fiber twist(const Fiber& f, const std::string& component, const Int& t);
Fiber mark_curve(const Fiber& f, const std::string& component, const std::string& name,
                 const DivisorClass& cls);
Fiber one_throw(const Fiber& f, const std::string& component, const std::string& curve,
                const std::string& point = "");
Fiber two_throw(const Fiber& f, const std::string& component, const std::string& curve,
                const ThrowNames& names = {});

struct CurveCheck {
    std::string name;
    std::string side_a, side_b;
    Int degree_a, degree_b;
    Int self_a, self_b;
    int nodes_a = 0, nodes_b = 0;
    Int triple_a, triple_b;
    Int tpf;            // (C^2 - 2 nodes)_A + (C^2 - 2 nodes)_B + triple points
    bool ok = false;
};

struct ValidationReport {
    bool ok = true;
    std::vector<CurveCheck> curves;
    Int chi_general, chi_central;      // Euler characteristic replay
    std::vector<std::string> errors;
};

ValidationReport validate(const Fiber& f);
void require_valid(const Fiber& f);   // throws ValidationError listing every mismatch

// Triple points on a double curve, counted from side A.
Int triple_points(const Fiber& f, const DoubleCurve& dc);

Fiber build_first(const Int& d, const Int& m, const Int& a);
Fiber build_second(const Int& d, const Int& m, const Int& a);
Fiber build_third(const Int& d, const Int& m, const Int& a);
Fiber build_fourth(const Int& d, const Int& m, const Int& a);
Fiber build_stage(int stage, const Int& d, const Int& m, const Int& a);

// Same scripts without the ratio window; used by the exceptional-case ledgers.
Fiber build_third_unchecked(const Int& d, const Int& m, const Int& a);
Fiber build_fourth_unchecked(const Int& d, const Int& m, const Int& a);

// The quartics thrown in the fourth degeneration, on the third-stage V.
DivisorClass quartic_class(int j);
DivisorClass conic_class(int i);

nlohmann::json to_json(const Fiber& f);
Fiber fiber_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ValidationReport& r);
std::string render_fiber(const Fiber& f);

// ---- lemma catalogue ----

struct Inequality {
    std::string text;
    bool holds = false;
};

struct ChainReplay {
    std::string what;
    std::vector<std::string> rows;       // rendered states, first = input
    std::string final_form;
    std::string expected_form;
    bool matches = false;
};

struct HypothesisReport {
    std::string lemma;
    Int d, m, a;
    std::vector<Inequality> hypotheses;
    bool hypotheses_hold = false;
    std::vector<ChainReplay> replays;
    std::string branch;
    std::vector<std::string> checks;     // conclusion checks, "ok: ..." or "FAIL: ..."
    bool conclusion_ok = true;
    bool pass = false;
    std::vector<std::string> notes;
};

const std::vector<std::string>& lemma_catalog();
HypothesisReport lemma_check(const std::string& lemma_id, const Int& d, const Int& m, const Int& a);
nlohmann::json to_json(const HypothesisReport& r);

// h from the Z4F table, or nullopt when no row applies.
std::optional<Int> z4f_h(const Int& alpha, const Int& ell);

enum class ChoiceKind { CHOSEN, NONE, CITED };
std::string to_string(ChoiceKind k);

struct AChoice {
    ChoiceKind kind = ChoiceKind::NONE;
    std::optional<Int> a;
    std::optional<Int> h;
    std::string justification;
    std::vector<HypothesisReport> checks;
};

AChoice choose_a(const Int& d, const Int& m);
nlohmann::json to_json(const AChoice& c);

// ---- matching ledgers ----

enum class Assumption { COMPLETE_RESTRICTION, TRANSVERSALITY, CORRESPONDENCE_GENERALITY };
std::string to_string(Assumption a);
Assumption assumption_from_string(const std::string& s);

enum class Verdict { EMPTY, DIM_UPPER_BOUND, DIM_EXACT_UNDER_ASSUMPTIONS };
std::string to_string(Verdict v);

struct LedgerStep {
    std::string label;
    std::string component;
    std::vector<std::string> double_curves;
    Int dim_component = -1;                  // projective
    Int dim_before = -1, dim_after = -1;     // projective
    std::optional<Int> restricted_w, restricted_v;   // projective dims of restricted series
    Int target_dim = -1;                     // projective dim of H0 on the double locus
    bool exact = true;
    std::vector<std::string> tags;
    std::string note;
};

struct MatchingReport {
    std::string title;
    std::vector<LedgerStep> steps;
    Int delta = -1;
    Verdict verdict = Verdict::EMPTY;
    Int value = -1;
    std::set<std::string> assumptions_used;
    std::map<std::string, Int> bounds;
    std::vector<std::string> notes;
    std::string verdict_string() const;
};

std::vector<std::string> default_gluing_order(const Fiber& f);

MatchingReport matching_dim(const Fiber& f, const std::set<Assumption>& assumptions,
                            const std::vector<std::string>& order = {},
                            const std::map<std::string, Int>& dims = {});

// Scripts for (174,55), (193,61), (348,110) and their multiples' parameter a.
MatchingReport exceptional_ledger(const Int& d, const Int& m, std::optional<Int> a = std::nullopt);

nlohmann::json to_json(const MatchingReport& r);
std::string render_report(const MatchingReport& r);

// ---- scan ----

struct Ratio {
    long long num = 0, den = 1;
    static Ratio parse(const std::string& s);
    std::string str() const;
};

struct ScanRow {
    Int d, m;
    std::string regime;
    std::optional<Int> a;
    std::string verdict;
    Int expected;
    std::vector<std::string> lemmas;   // "V4a:ok", ...
    std::string note;
};

struct ScanOptions {
    bool coprime_only = true;
    unsigned jobs = 1;
};

std::vector<ScanRow> scan(const Ratio& lo, const Ratio& hi, long long m_max, const ScanOptions& opt = {});
nlohmann::json to_json(const ScanRow& r);

}  // namespace shgh

#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shgh/lattice.hpp"

namespace shgh {

using Triple = std::array<std::string, 3>;

struct QuadStep {
    Triple triple;
    DivisorClass before, after;
    bool advisory = false;  // triple contains an infinitely near point
};

struct SplitStep {
    std::string label;        // E_label in the basis current at the time of the split
    Int times;
    DivisorClass original;    // the same curve pulled back to the input basis
};

struct PadStep {
    std::vector<std::string> labels;
};

using Step = std::variant<QuadStep, SplitStep, PadStep>;

struct TransformLog {
    std::vector<Step> steps;
    std::size_t quadratic_steps() const;
    std::vector<SplitStep> splits() const;
};

DivisorClass quadratic_transform(const DivisorClass& L, const Triple& triple, const Configuration& cfg);

struct Reduction {
    Configuration cfg;     // input configuration plus any padding points
    DivisorClass input;
    DivisorClass result;   // standard form, padding labels dropped when zero
    TransformLog log;
    bool empty = false;
};

// Order used for picking transform points: multiplicity descending, then
// infinitely-near depth, then configuration index.
std::vector<std::string> reduction_order(const DivisorClass& L, const Configuration& cfg);

Reduction reduce_to_standard(const LinearSystem& s);

// Replays an explicit chain of triples (no sorting), clamping nothing.
std::vector<DivisorClass> replay_chain(const DivisorClass& L, const Configuration& cfg,
                                       const std::vector<Triple>& chain);

bool is_standard(const DivisorClass& L, const Configuration& cfg);

// One row per quadratic step (its before-state, transformed entries as _x_)
// and a last row with the final state. Entries follow configuration order.
std::vector<std::string> render_table(const Reduction& r);
std::string render_row(const DivisorClass& L, const Configuration& cfg,
                       const std::vector<std::string>& marked);
nlohmann::json to_json(const Reduction& r);

struct SplitRecord {
    DivisorClass cls;
    Int times;
};

struct SplitResult {
    DivisorClass residual;
    std::vector<SplitRecord> splits;
};

SplitResult split_fixed_neg_curves(const DivisorClass& L, const Configuration& cfg, int degree_bound);

enum class Kind { EMPTY, STANDARD, CREMONA_REDUCIBLE, MINUS_ONE_SPECIAL, EXCELLENT, ALMOST_EXCELLENT };
std::string to_string(Kind k);

struct Classification {
    Kind kind;
    Reduction reduction;
    std::vector<SplitStep> special_splits;  // splits with L.E <= -2
};

Classification classify(const DivisorClass& L, const Configuration& cfg);

enum class DimStatus { PROVEN, CONJECTURAL };
std::string to_string(DimStatus s);

struct DimResult {
    Int dim;
    DimStatus status;
    Reduction reduction;
    std::string note;
};

DimResult shgh_dim(const DivisorClass& L, const Configuration& cfg);

enum class NagataVerdict { EMPTY_CONJECTURAL, EMPTY_PROVEN, NO_PREDICTION };
std::string to_string(NagataVerdict v);

NagataVerdict nagata_empty(const DivisorClass& L, std::size_t k);

}  // namespace shgh

#pragma once

#include <string>
#include <vector>

#include "shgh/degeneration.hpp"

namespace shgh::detail {

// L(d; ...) with chains bracketed; a branching point ends its entry and each
// child opens a new one. Marked labels are wrapped in underscores.
std::string render_class(const DivisorClass& c, const Configuration& cfg,
                         const std::vector<std::string>& marked = {});

// The Z model of the third stage and its closed-form bundle; used where the
// scripted throws degenerate (b = 2a).
Configuration z_model();
DivisorClass z3_closed_form(const Params& p);

// d/m compared with num/den, m > 0
inline bool ratio_ge(const Int& d, const Int& m, long num, long den) { return d * den >= m * num; }
inline bool ratio_gt(const Int& d, const Int& m, long num, long den) { return d * den > m * num; }
inline bool ratio_le(const Int& d, const Int& m, long num, long den) { return d * den <= m * num; }
inline bool ratio_lt(const Int& d, const Int& m, long num, long den) { return d * den < m * num; }

}  // namespace shgh::detail

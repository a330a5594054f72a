#pragma once

#include <string>

#include "shgh/lattice.hpp"

namespace shgh {

// "d; m, m^k, [a,b], [a,b]^k", optionally wrapped as "L(...)".
// Free entry i gets label p<i>; a bracket [a,b,...] gets p<i>, p<i>', p<i>'', ...
LinearSystem parse_system(const std::string& text);

// Inverse of parse_system up to labels; consecutive equal entries are grouped.
std::string render_system(const LinearSystem& s);

}  // namespace shgh

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "shgh/lattice.hpp"

namespace shgh {

std::string sha1_hex(const std::string& data);

// Canonical text of a system: degree, then label:parent:mult per point in cfg order.
std::string canonical_system(const LinearSystem& s);

std::string witness_key(const LinearSystem& s, std::uint32_t p, std::uint64_t seed, bool frame);

std::string witness_path(const std::string& dir, const std::string& key);
std::optional<nlohmann::json> load_witness(const std::string& dir, const std::string& key);
std::string store_witness(const std::string& dir, const std::string& key, const nlohmann::json& j);

}  // namespace shgh

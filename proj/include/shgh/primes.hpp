#pragma once

#include <cstdint>

namespace shgh {

bool is_prime_u64(std::uint64_t n);

inline std::uint32_t mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

std::uint32_t powmod(std::uint32_t a, std::uint64_t e, std::uint32_t p);
std::uint32_t invmod(std::uint32_t a, std::uint32_t p);

constexpr std::uint32_t kPrime1 = 2147483647u;  // 2^31 - 1
constexpr std::uint32_t kPrime2 = 2147483629u;  // 2^31 - 19

}  // namespace shgh

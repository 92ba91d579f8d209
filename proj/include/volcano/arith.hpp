#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace volcano {

// Signed 128-bit integer; every helper below that can overflow checks and throws.
using Integer = __int128;

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Integer checked_add(Integer a, Integer b);
Integer checked_sub(Integer a, Integer b);
Integer checked_mul(Integer a, Integer b);
Integer checked_pow(Integer base, unsigned exp);

std::string to_string(Integer x);
Integer parse_integer(const std::string& s);

Integer abs_int(Integer x);
Integer gcd(Integer a, Integer b);
// floor(sqrt(n)) for n >= 0
Integer isqrt(Integer n);
bool is_square(Integer n, Integer* root = nullptr);
// Largest k with q^k | n (n != 0, q >= 2).
int valuation(Integer n, Integer q);
// Non-negative residue.
Integer mod(Integer a, Integer m);

// Modular helpers for moduli below 2^64.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

int kronecker(Integer a, Integer n);
bool is_prime(Integer n);
std::optional<Integer> sqrt_mod_p(Integer a, Integer p);

struct PrimePower {
    Integer prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

// Prime factors with multiplicity, ascending.
std::vector<Integer> factorize(Integer n, std::uint64_t rho_budget = 10'000'000);
std::vector<PrimePower> factor_powers(Integer n);
std::vector<Integer> divisors(Integer n);

struct SquarefreeDecomposition {
    Integer s;
    Integer x;
};
SquarefreeDecomposition squarefree_decompose(Integer n);

}  // namespace volcano

#pragma once

#include <cstdint>
#include <vector>

namespace volcano {

using Fp = std::uint64_t;

struct Weierstrass {
    Fp a;
    Fp b;
};

struct TraceSet {
    Fp j;
    std::vector<std::int64_t> traces;  // ascending, positive
    bool supersingular() const { return traces.empty(); }
};

// Quadratic character table chi[x] = (x/p) for 0 <= x < p.
class CharacterTable {
public:
    explicit CharacterTable(std::uint64_t p);
    std::uint64_t p() const { return p_; }
    int operator()(Fp x) const { return chi_[x]; }

private:
    std::uint64_t p_;
    std::vector<std::int8_t> chi_;
};

// Throws std::invalid_argument unless p is a prime >= 5 below 2^31.
void require_field_prime(std::uint64_t p);

Weierstrass curve_from_j(Fp j, std::uint64_t p);
Fp j_invariant(const Weierstrass& e, std::uint64_t p);

std::int64_t trace_abs(Fp j, std::uint64_t p);
std::int64_t trace_abs(Fp j, const CharacterTable& chi);

// Positive t with 4p = t^2 + k*v^2 for some v > 0.
std::vector<std::int64_t> norm_equation_traces(std::uint64_t p, std::int64_t k);

TraceSet traces_for_j(Fp j, std::uint64_t p);
TraceSet traces_for_j(Fp j, const CharacterTable& chi);

// Cheap necessary test that the curve with j-invariant j (or its twist) has trace +-t:
// random points are annihilated by p+1-t or p+1+t. j must not be 0 or 1728.
bool may_have_trace(Fp j, std::uint64_t p, std::int64_t t, int rounds = 4);

}  // namespace volcano

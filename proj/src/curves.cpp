#include "volcano/curves.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "volcano/arith.hpp"

namespace volcano {

namespace {

Fp add(Fp x, Fp y, std::uint64_t p) { return (x + y) % p; }
Fp sub(Fp x, Fp y, std::uint64_t p) { return (x + p - y) % p; }
Fp mul(Fp x, Fp y, std::uint64_t p) { return x * y % p; }

// Affine point; inf marks the identity.
struct Point {
    Fp x, y;
    bool inf;
};

Point add_points(const Point& P, const Point& Q, Fp a, std::uint64_t p) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    Fp lambda;
    if (P.x == Q.x) {
        if ((P.y + Q.y) % p == 0) return {0, 0, true};
        Fp num = add(mul(3, mul(P.x, P.x, p), p), a, p);
        lambda = mul(num, invmod(mul(2, P.y, p), p), p);
    } else {
        lambda = mul(sub(Q.y, P.y, p), invmod(sub(Q.x, P.x, p), p), p);
    }
    Fp x3 = sub(sub(mul(lambda, lambda, p), P.x, p), Q.x, p);
    Fp y3 = sub(mul(lambda, sub(P.x, x3, p), p), P.y, p);
    return {x3, y3, false};
}

Point scalar_mul(Point P, std::uint64_t k, Fp a, std::uint64_t p) {
    Point R{0, 0, true};
    while (k) {
        if (k & 1) R = add_points(R, P, a, p);
        P = add_points(P, P, a, p);
        k >>= 1;
    }
    return R;
}

}  // namespace

CharacterTable::CharacterTable(std::uint64_t p) : p_(p), chi_(p, -1) {
    require_field_prime(p);
    chi_[0] = 0;
    for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) chi_[x * x % p] = 1;
}

void require_field_prime(std::uint64_t p) {
    if (p < 5 || p >= (1ULL << 31) || !is_prime(static_cast<Integer>(p))) {
        throw std::invalid_argument("p must be a prime with 5 <= p < 2^31");
    }
}

Weierstrass curve_from_j(Fp j, std::uint64_t p) {
    j %= p;
    if (j == 0) return {0, 1};
    if (j == 1728 % p) return {1, 0};
    Fp k = sub(1728 % p, j, p);
    Fp jk = mul(j, k, p);
    return {mul(3, jk, p), mul(2, mul(jk, k, p), p)};
}

Fp j_invariant(const Weierstrass& e, std::uint64_t p) {
    Fp a3 = mul(4, mul(e.a, mul(e.a, e.a, p), p), p);
    Fp b2 = mul(27, mul(e.b, e.b, p), p);
    Fp den = add(a3, b2, p);
    if (den == 0) throw std::invalid_argument("singular curve");
    return mul(mul(1728 % p, a3, p), invmod(den, p), p);
}

std::int64_t trace_abs(Fp j, const CharacterTable& chi) {
    std::uint64_t p = chi.p();
    Weierstrass e = curve_from_j(j, p);
    std::int64_t s = 0;
    for (Fp x = 0; x < p; ++x) {
        Fp rhs = (mul(mul(x, x, p), x, p) + mul(e.a, x, p) + e.b) % p;
        s += chi(rhs);
    }
    return s < 0 ? -s : s;
}

std::int64_t trace_abs(Fp j, std::uint64_t p) { return trace_abs(j, CharacterTable(p)); }

std::vector<std::int64_t> norm_equation_traces(std::uint64_t p, std::int64_t k) {
    std::vector<std::int64_t> out;
    Integer four_p = 4 * static_cast<Integer>(p);
    for (Integer v = 1; k * v * v < four_p; ++v) {
        Integer t;
        if (is_square(four_p - k * v * v, &t) && t > 0) out.push_back(static_cast<std::int64_t>(t));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TraceSet traces_for_j(Fp j, const CharacterTable& chi) {
    std::uint64_t p = chi.p();
    j %= p;
    TraceSet ts{j, {}};
    if (j == 0) {
        if (p % 3 == 1) ts.traces = norm_equation_traces(p, 3);
    } else if (j == 1728 % p) {
        if (p % 4 == 1) ts.traces = norm_equation_traces(p, 4);
    } else {
        std::int64_t t = trace_abs(j, chi);
        if (t != 0) ts.traces = {t};
    }
    return ts;
}

TraceSet traces_for_j(Fp j, std::uint64_t p) { return traces_for_j(j, CharacterTable(p)); }

bool may_have_trace(Fp j, std::uint64_t p, std::int64_t t, int rounds) {
    Weierstrass e = curve_from_j(j, p);
    std::mt19937_64 rng(j * 0x9e3779b97f4a7c15ULL + p);
    std::uint64_t n_plus = p + 1 - static_cast<std::uint64_t>(t);
    std::uint64_t n_minus = p + 1 + static_cast<std::uint64_t>(t);
    // A point on E itself tests order p+1-t for trace t and p+1+t for trace -t.
    for (int r = 0; r < rounds; ++r) {
        Point P{0, 0, true};
        while (P.inf) {
            Fp x = rng() % p;
            Fp rhs = (mul(mul(x, x, p), x, p) + mul(e.a, x, p) + e.b) % p;
            if (rhs == 0) continue;
            auto y = sqrt_mod_p(static_cast<Integer>(rhs), static_cast<Integer>(p));
            if (!y) continue;
            P = {x, static_cast<Fp>(*y), false};
        }
        if (!scalar_mul(P, n_plus, e.a, p).inf && !scalar_mul(P, n_minus, e.a, p).inf) return false;
    }
    return true;
}

}  // namespace volcano

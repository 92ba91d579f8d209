#include "volcano/arith.hpp"

#include <algorithm>
#include <random>

namespace volcano {

namespace {

using u128 = unsigned __int128;

constexpr Integer kIntegerMax = static_cast<Integer>(~static_cast<u128>(0) >> 1);

u128 mulmod128(u128 a, u128 b, u128 m) {
    if (m <= UINT64_MAX) {
        return (a % m) * (b % m) % m;
    }
    a %= m;
    b %= m;
    u128 r = 0;
    while (b) {
        if (b & 1) {
            r = (r >= m - a) ? r - (m - a) : r + a;
        }
        a = (a >= m - a) ? a - (m - a) : a + a;
        b >>= 1;
    }
    return r;
}

u128 powmod128(u128 a, u128 e, u128 m) {
    u128 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod128(r, a, m);
        a = mulmod128(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_round(u128 n, u128 d, int s, u128 a) {
    a %= n;
    if (a == 0) return true;
    u128 x = powmod128(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod128(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

u128 ugcd(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 on budget exhaustion.
u128 pollard_brent(u128 n, std::uint64_t& budget, std::mt19937_64& rng) {
    if (n % 2 == 0) return 2;
    while (budget > 0) {
        u128 y = rng() % n, c = rng() % (n - 1) + 1, m = 128;
        u128 g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u128 v) {
            v = mulmod128(v, v, n) + c;
            return v >= n ? v - n : v;
        };
        do {
            x = y;
            for (u128 i = 0; i < r; ++i) y = f(y);
            u128 k = 0;
            do {
                ys = y;
                u128 steps = std::min(m, r - k);
                for (u128 i = 0; i < steps; ++i) {
                    y = f(y);
                    q = mulmod128(q, x > y ? x - y : y - x, n);
                }
                budget = budget > steps ? budget - static_cast<std::uint64_t>(steps) : 0;
                g = ugcd(q, n);
                k += m;
            } while (k < r && g == 1 && budget > 0);
            r *= 2;
        } while (g == 1 && budget > 0);
        if (g == n) {
            do {
                ys = f(ys);
                g = ugcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
    return 0;
}

void factor_into(u128 n, std::vector<Integer>& out, std::uint64_t& budget, std::mt19937_64& rng) {
    if (n == 1) return;
    if (is_prime(static_cast<Integer>(n))) {
        out.push_back(static_cast<Integer>(n));
        return;
    }
    Integer r = isqrt(static_cast<Integer>(n));
    if (static_cast<u128>(r) * static_cast<u128>(r) == n) {
        factor_into(static_cast<u128>(r), out, budget, rng);
        factor_into(static_cast<u128>(r), out, budget, rng);
        return;
    }
    u128 d = pollard_brent(n, budget, rng);
    if (d == 0) {
        throw FactorizationError("factorization budget exhausted on cofactor " +
                                 to_string(static_cast<Integer>(n)));
    }
    factor_into(d, out, budget, rng);
    factor_into(n / d, out, budget, rng);
}

}  // namespace

Integer checked_add(Integer a, Integer b) {
    Integer r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
}

Integer checked_sub(Integer a, Integer b) {
    Integer r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
    return r;
}

Integer checked_mul(Integer a, Integer b) {
    Integer r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
}

Integer checked_pow(Integer base, unsigned exp) {
    Integer r = 1;
    while (exp--) r = checked_mul(r, base);
    return r;
}

std::string to_string(Integer x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    u128 u = neg ? -static_cast<u128>(x) : static_cast<u128>(x);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Integer parse_integer(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    Integer r = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("not an integer: '" + s + "'");
        r = checked_add(checked_mul(r, 10), s[i] - '0');
    }
    return neg ? -r : r;
}

Integer abs_int(Integer x) {
    if (x == -kIntegerMax - 1) throw OverflowError("integer overflow in abs");
    return x < 0 ? -x : x;
}

Integer gcd(Integer a, Integer b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b) {
        Integer t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Integer isqrt(Integer n) {
    if (n < 0) throw std::domain_error("isqrt of negative integer");
    if (n < 2) return n;
    // Newton iteration from a power-of-two upper bound.
    int bits = 0;
    for (u128 u = static_cast<u128>(n); u; u >>= 1) ++bits;
    Integer x = static_cast<Integer>(1) << ((bits + 1) / 2);
    while (true) {
        Integer y = (x + n / x) / 2;
        if (y >= x) return x;
        x = y;
    }
}

bool is_square(Integer n, Integer* root) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

int valuation(Integer n, Integer q) {
    if (n == 0) throw std::domain_error("valuation of zero");
    if (q < 2) throw std::domain_error("valuation base must be at least 2");
    int k = 0;
    while (n % q == 0) {
        n /= q;
        ++k;
    }
    return k;
}

Integer mod(Integer a, Integer m) {
    Integer r = a % m;
    return r < 0 ? r + m : r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    return static_cast<std::uint64_t>(powmod128(a, e, m));
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    Integer r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1) {
        Integer q = r0 / r1;
        Integer t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw std::domain_error("element not invertible");
    return static_cast<std::uint64_t>(mod(s0, m));
}

int kronecker(Integer a, Integer n) {
    if (n == 0) return abs_int(a) == 1 ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -1;
    }
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) {
        int r8 = static_cast<int>(mod(a, 8));
        if (r8 == 3 || r8 == 5) sign = -sign;
    }
    // Jacobi symbol (a/n) for odd n > 0.
    a = mod(a, n);
    int result = sign;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int r8 = static_cast<int>(n % 8);
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_prime(Integer n) {
    if (n < 2) return false;
    static constexpr int kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int q : kSmall) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u128 un = static_cast<u128>(n);
    u128 d = un - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    if (un <= UINT64_MAX) {
        for (int a : kSmall) {
            if (!miller_rabin_round(un, d, s, static_cast<u128>(a))) return false;
        }
        return true;
    }
    std::mt19937_64 rng(0x5eed'c0ffeeULL);
    for (int round = 0; round < 48; ++round) {
        u128 a = ((static_cast<u128>(rng()) << 64) | rng()) % (un - 3) + 2;
        if (!miller_rabin_round(un, d, s, a)) return false;
    }
    return true;
}

std::optional<Integer> sqrt_mod_p(Integer a, Integer p) {
    a = mod(a, p);
    if (a == 0) return Integer{0};
    if (p == 2) return a;
    u128 up = static_cast<u128>(p), ua = static_cast<u128>(a);
    if (powmod128(ua, (up - 1) / 2, up) != 1) return std::nullopt;
    if (up % 4 == 3) return static_cast<Integer>(powmod128(ua, (up + 1) / 4, up));
    // Tonelli-Shanks.
    u128 q = up - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    u128 z = 2;
    while (powmod128(z, (up - 1) / 2, up) != up - 1) ++z;
    u128 c = powmod128(z, q, up);
    u128 x = powmod128(ua, (q + 1) / 2, up);
    u128 t = powmod128(ua, q, up);
    int m = s;
    while (t != 1) {
        int i = 0;
        u128 tt = t;
        while (tt != 1) {
            tt = mulmod128(tt, tt, up);
            ++i;
        }
        u128 b = c;
        for (int k = 0; k < m - i - 1; ++k) b = mulmod128(b, b, up);
        x = mulmod128(x, b, up);
        c = mulmod128(b, b, up);
        t = mulmod128(t, c, up);
        m = i;
    }
    return static_cast<Integer>(x);
}

std::vector<Integer> factorize(Integer n, std::uint64_t rho_budget) {
    if (n < 1) throw std::domain_error("factorize expects a positive integer");
    std::vector<Integer> out;
    for (Integer q = 2; q < 1000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
        while (n % q == 0) {
            out.push_back(q);
            n /= q;
        }
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uint64_t budget = rho_budget;
    factor_into(static_cast<u128>(n), out, budget, rng);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PrimePower> factor_powers(Integer n) {
    std::vector<PrimePower> out;
    for (Integer q : factorize(n)) {
        if (!out.empty() && out.back().prime == q) {
            ++out.back().exponent;
        } else {
            out.push_back({q, 1});
        }
    }
    return out;
}

std::vector<Integer> divisors(Integer n) {
    std::vector<Integer> ds{1};
    for (const auto& [q, e] : factor_powers(n)) {
        std::size_t base = ds.size();
        Integer pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= q;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

SquarefreeDecomposition squarefree_decompose(Integer n) {
    if (n < 1) throw std::domain_error("squarefree_decompose expects a positive integer");
    Integer s = 1, x = 1;
    for (const auto& [q, e] : factor_powers(n)) {
        for (int k = 0; k < e / 2; ++k) x *= q;
        if (e % 2) s *= q;
    }
    return {s, x};
}

}  // namespace volcano

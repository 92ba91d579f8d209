#include "volcano/classgroup.hpp"

#include <algorithm>
#include <stdexcept>

namespace volcano {

namespace {

struct Egcd {
    Integer g, x, y;
};

// g = x*a + y*b
Egcd egcd(Integer a, Integer b) {
    Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Integer q = a / b;
        Integer t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) return {-a, -x0, -y0};
    return {a, x0, y0};
}

Integer floor_div(Integer a, Integer b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

QuadForm normalize(QuadForm f) {
    // Bring b into (-a, a].
    Integer two_a = 2 * f.a;
    Integer r = floor_div(f.a - f.b, two_a);
    Integer b = f.b + two_a * r;
    f.c = checked_add(checked_add(f.c, checked_mul(f.b, r)), checked_mul(checked_mul(f.a, r), r));
    f.b = b;
    return f;
}

}  // namespace

Discriminant::Discriminant(Integer value) : value_(value) {
    if (!is_discriminant(value)) {
        throw std::invalid_argument("not a negative discriminant: " + volcano::to_string(value));
    }
}

Integer QuadForm::discriminant() const {
    return checked_sub(checked_mul(b, b), checked_mul(4, checked_mul(a, c)));
}

bool QuadForm::is_reduced() const {
    Integer ab = abs_int(b);
    if (!(ab <= a && a <= c)) return false;
    if ((ab == a || a == c) && b < 0) return false;
    return true;
}

bool QuadForm::is_primitive() const { return gcd(gcd(a, b), c) == 1; }

std::string QuadForm::str() const {
    return "(" + volcano::to_string(a) + "," + volcano::to_string(b) + "," + volcano::to_string(c) + ")";
}

std::string Rational::str() const {
    if (den == 1) return volcano::to_string(num);
    return volcano::to_string(num) + "/" + volcano::to_string(den);
}

Rational operator+(const Rational& x, const Rational& y) {
    Integer n = checked_add(checked_mul(x.num, y.den), checked_mul(y.num, x.den));
    Integer d = checked_mul(x.den, y.den);
    Integer g = gcd(n, d);
    if (g == 0) return {0, 1};
    return {n / g, d / g};
}

bool is_discriminant(Integer d) {
    if (d >= 0) return false;
    Integer r = mod(d, 4);
    return r == 0 || r == 1;
}

FundamentalPart fundamental_discriminant(Discriminant d) {
    auto [s, x] = squarefree_decompose(-d.value());
    Integer dk = -s;
    if (mod(dk, 4) != 1) dk *= 4;
    Integer f2 = d.value() / dk;
    Integer f = isqrt(f2);
    return {Discriminant(dk), f};
}

Discriminant field_discriminant(Integer n) {
    if (n >= 0) throw std::invalid_argument("field_discriminant expects a negative integer");
    Integer s = -squarefree_decompose(-n).s;
    return Discriminant(mod(s, 4) == 1 ? s : checked_mul(4, s));
}

bool divides_conductor(Discriminant d, Integer ell) {
    Integer l2 = checked_mul(ell, ell);
    if (d.value() % l2 != 0) return false;
    return is_discriminant(d.value() / l2);
}

QuadForm reduce(QuadForm f) {
    if (f.a <= 0) throw std::invalid_argument("reduce expects a positive definite form");
    f = normalize(f);
    while (f.a > f.c) {
        std::swap(f.a, f.c);
        f.b = -f.b;
        f = normalize(f);
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

QuadForm principal_form(Discriminant d) {
    Integer dv = d.value();
    if (mod(dv, 4) == 0) return {1, 0, -dv / 4};
    return {1, 1, (1 - dv) / 4};
}

QuadForm inverse(const QuadForm& f) { return reduce({f.a, -f.b, f.c}); }

QuadForm compose(const QuadForm& f1, const QuadForm& f2) {
    Integer d = f1.discriminant();
    if (d != f2.discriminant()) throw std::invalid_argument("compose: discriminant mismatch");
    Integer a1 = f1.a, b1 = f1.b, a2 = f2.a, b2 = f2.b;
    Integer beta = (b1 + b2) / 2;
    auto [g0, u0, v0] = egcd(a1, a2);
    auto [e, x, w] = egcd(g0, beta);
    Integer u = x * u0, v = x * v0;
    Integer a3 = checked_mul(a1 / e, a2 / e);
    Integer t = checked_add(checked_add(checked_mul(checked_mul(u, a1), b2), checked_mul(checked_mul(v, a2), b1)),
                            checked_mul(w, (checked_mul(b1, b2) + d) / 2));
    if (t % e != 0) throw std::logic_error("compose: non-integral middle coefficient");
    Integer b3 = mod(t / e, 2 * a3);
    Integer num = checked_sub(checked_mul(b3, b3), d);
    Integer den = checked_mul(4, a3);
    if (num % den != 0) throw std::logic_error("compose: non-integral result");
    return reduce({a3, b3, num / den});
}

std::vector<QuadForm> reduced_forms(Discriminant d) {
    Integer dv = d.value();
    std::vector<QuadForm> out;
    Integer amax = isqrt(-dv / 3);
    for (Integer a = 1; a <= amax; ++a) {
        for (Integer b = -a + 1; b <= a; ++b) {
            if (mod(b - dv, 2) != 0) continue;
            Integer num = b * b - dv;
            if (num % (4 * a) != 0) continue;
            Integer c = num / (4 * a);
            QuadForm f{a, b, c};
            if (c < a || !f.is_reduced() || !f.is_primitive()) continue;
            out.push_back(f);
        }
    }
    return out;
}

Integer class_number(Discriminant d) { return static_cast<Integer>(reduced_forms(d).size()); }

PrimeIdeal prime_form(Discriminant d, Integer ell) {
    if (!is_prime(ell)) throw std::invalid_argument("prime_form expects a prime");
    if (divides_conductor(d, ell)) return NonInvertible{};
    Integer dv = d.value();
    if (kronecker(dv, ell) == -1) return InertPrime{};
    Integer four_l = 4 * ell;
    Integer parity = mod(dv, 2);
    std::vector<Integer> candidates;
    if (ell == 2) {
        for (Integer b = 0; b <= 4; ++b) candidates.push_back(b);
    } else {
        Integer r = *sqrt_mod_p(mod(dv, ell), ell);
        for (Integer base : {r, ell - r}) {
            for (Integer b = mod(base, ell); b <= 2 * ell; b += ell) candidates.push_back(b);
        }
        std::sort(candidates.begin(), candidates.end());
    }
    for (Integer b : candidates) {
        if (mod(b, 2) != parity) continue;
        if (mod(b * b - dv, four_l) != 0) continue;
        return QuadForm{ell, b, (b * b - dv) / four_l};
    }
    throw std::logic_error("prime_form: no square root of D modulo 4*ell");
}

Integer order_of_class(const QuadForm& f, Integer limit) {
    QuadForm g = reduce(f);
    QuadForm one = principal_form(Discriminant(f.discriminant()));
    QuadForm acc = g;
    for (Integer k = 1; k <= limit; ++k) {
        if (acc == one) return k;
        acc = compose(acc, g);
    }
    throw std::runtime_error("order_of_class: iteration limit reached");
}

SplittingType splitting_type(Discriminant d, Integer ell) {
    PrimeIdeal pi = prime_form(d, ell);
    if (std::holds_alternative<NonInvertible>(pi)) {
        throw std::invalid_argument("splitting_type: ell divides the conductor of " +
                                    volcano::to_string(d.value()));
    }
    if (std::holds_alternative<InertPrime>(pi)) return {Splitting::Inert, 0};
    Integer order = order_of_class(std::get<QuadForm>(pi));
    int k = kronecker(d.value(), ell);
    return {k == 0 ? Splitting::Ramified : Splitting::Split, order};
}

Rational hurwitz_class_number(Integer n) {
    if (!is_discriminant(n)) throw std::invalid_argument("hurwitz_class_number expects N < 0, N = 0,1 mod 4");
    Rational total{0, 1};
    Integer fmax = isqrt(-n);
    for (Integer f = 1; f <= fmax; ++f) {
        if (n % (f * f) != 0) continue;
        Integer m = n / (f * f);
        if (!is_discriminant(m)) continue;
        Integer h = class_number(Discriminant(m));
        if (m == -3) {
            total = total + Rational{h, 3};
        } else if (m == -4) {
            total = total + Rational{h, 2};
        } else {
            total = total + Rational{h, 1};
        }
    }
    return total;
}

std::string to_string(const SplittingType& s) {
    switch (s.kind) {
        case Splitting::Inert:
            return "inert";
        case Splitting::Ramified:
            return "ramified, order " + volcano::to_string(s.order);
        case Splitting::Split:
            return "split, order " + volcano::to_string(s.order);
    }
    return "";
}

}  // namespace volcano

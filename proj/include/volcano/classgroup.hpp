#pragma once

#include <string>
#include <variant>
#include <vector>

#include "volcano/arith.hpp"

namespace volcano {

class Discriminant {
public:
    // Throws std::invalid_argument unless value < 0 and value mod 4 is 0 or 1.
    explicit Discriminant(Integer value);
    Integer value() const { return value_; }
    auto operator<=>(const Discriminant&) const = default;

private:
    Integer value_;
};

struct QuadForm {
    Integer a, b, c;
    Integer discriminant() const;
    bool is_reduced() const;
    bool is_primitive() const;
    bool operator==(const QuadForm&) const = default;
    std::string str() const;
};

enum class Splitting { Inert, Ramified, Split };

struct SplittingType {
    Splitting kind;
    // Order of the class of a prime above ell; 0 when inert.
    Integer order;
};

// Marker for the case where ell divides the conductor: the ideals of norm ell are not invertible.
struct NonInvertible {};
struct InertPrime {};
using PrimeIdeal = std::variant<QuadForm, InertPrime, NonInvertible>;

struct FundamentalPart {
    Discriminant dk;
    Integer f;
};

struct Rational {
    Integer num;
    Integer den;
    bool operator==(const Rational&) const = default;
    std::string str() const;
};
Rational operator+(const Rational& x, const Rational& y);

bool is_discriminant(Integer d);
FundamentalPart fundamental_discriminant(Discriminant d);
// Discriminant of the imaginary quadratic field Q(sqrt(n)) for any n < 0.
Discriminant field_discriminant(Integer n);
// True iff ell divides the conductor of d.
bool divides_conductor(Discriminant d, Integer ell);

QuadForm reduce(QuadForm f);
QuadForm principal_form(Discriminant d);
QuadForm inverse(const QuadForm& f);
QuadForm compose(const QuadForm& f1, const QuadForm& f2);
std::vector<QuadForm> reduced_forms(Discriminant d);
Integer class_number(Discriminant d);
PrimeIdeal prime_form(Discriminant d, Integer ell);
Integer order_of_class(const QuadForm& f, Integer limit = 100'000'000);
SplittingType splitting_type(Discriminant d, Integer ell);
Rational hurwitz_class_number(Integer n);

std::string to_string(const SplittingType& s);

}  // namespace volcano

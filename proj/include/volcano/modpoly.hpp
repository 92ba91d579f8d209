#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "volcano/curves.hpp"

namespace volcano {

using BigInt = boost::multiprecision::cpp_int;

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModularPolynomial {
    int ell = 0;
    // (i, j) -> coefficient of X^i Y^j, stored for i >= j only.
    std::map<std::pair<int, int>, BigInt> coefficients;

    BigInt coefficient(int i, int j) const;
};

bool is_supported_ell(int ell);
std::vector<int> supported_ells();

// Directory lookup order: explicit argument, VOLCANO_DATA_DIR, compiled-in default.
std::filesystem::path modpoly_data_dir(const std::optional<std::filesystem::path>& override_dir = std::nullopt);
ModularPolynomial parse_modpoly(const std::string& text);
// Cached and thread-safe; throws std::invalid_argument for unsupported ell, DataError on bad files.
const ModularPolynomial& load_modpoly(int ell, const std::optional<std::filesystem::path>& dir = std::nullopt);

// Dense polynomial over F_p, coefficients low to high.
using PolyFp = std::vector<Fp>;

struct Root {
    Fp value;
    int multiplicity;
    bool operator==(const Root&) const = default;
};

struct RootFindingOptions {
    // Plain evaluation at every element of F_p for p up to this bound.
    std::uint64_t scan_limit = 1024;
};

std::vector<Root> roots_by_scan(const PolyFp& f, std::uint64_t p);
std::vector<Root> roots_by_frobenius(const PolyFp& f, std::uint64_t p);
std::vector<Root> roots_with_multiplicity(const PolyFp& f, std::uint64_t p, const RootFindingOptions& opt = {});

// Phi_ell reduced mod p; immutable after construction, safe to share between threads.
class ReducedModPoly {
public:
    ReducedModPoly(const ModularPolynomial& phi, std::uint64_t p);
    int ell() const { return ell_; }
    std::uint64_t p() const { return p_; }
    Fp coefficient(int i, int j) const { return coeffs_[i * (ell_ + 2) + j]; }
    // Phi_ell(j, Y) as a polynomial in Y.
    PolyFp specialize(Fp j) const;
    Fp evaluate(Fp x, Fp y) const;
    std::vector<Root> neighbors(Fp j, const RootFindingOptions& opt = {}) const;

private:
    int ell_;
    std::uint64_t p_;
    std::vector<Fp> coeffs_;
};

std::vector<Root> neighbors(Fp j, std::uint64_t p, int ell);

}  // namespace volcano

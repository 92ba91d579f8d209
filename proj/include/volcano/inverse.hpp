#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "volcano/classgroup.hpp"
#include "volcano/graph.hpp"

namespace volcano {

enum class Strategy { Family, Minimal };
Strategy parse_strategy(const std::string& s);

struct AbstractVolcano {
    CraterShape crater;
    std::optional<int> ell;
    int depth = 0;
    // Profile of the regular volcano induced by (crater, ell, depth).
    VolcanoProfile profile(int ell_value) const;
};

class SearchExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Discriminant family_discriminant(Integer ell, int n);

// Split discriminants D < -4 with ell not dividing the conductor whose prime class above ell has order n,
// for |D| <= bound, ascending in |D|.
std::vector<Discriminant> split_order_discriminants(Integer ell, int n, Integer bound);
// Smallest such |D|; the scan stops at 4 ell^n - 1.
Discriminant minimal_crater_discriminant(Integer ell, int n, Integer budget = 100'000'000);

struct CraterRealization {
    Discriminant d;
    PrimeIdeal prime;
    CraterShape shape;
    std::string prime_form_description() const;
};

CraterRealization realize_crater(const CraterShape& shape, Integer ell, Strategy strategy);

struct PrimeCandidate {
    std::uint64_t p;
    std::int64_t t;
    Integer v;
};

// Ascending primes p with 4p = t^2 + v^2 |D_K|, v = f ell^d w, ell not dividing w.
class PrimeSearch {
public:
    PrimeSearch(Discriminant d_o, Integer ell, int depth, Integer max_p = 1'000'000'000'000'000LL);
    std::optional<PrimeCandidate> next();
    bool exhausted() const { return exhausted_; }

private:
    using Entry = std::tuple<Integer, Integer, Integer>;  // (4p, t, w)
    Integer next_w(Integer w) const;
    Integer conductor(Integer w) const;
    bool admissible(const PrimeCandidate& c, Integer w) const;

    Integer dk_abs_;
    Integer f_;
    Integer ell_;
    int depth_;
    Integer ell_d_;
    Integer max_p_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
    std::uint64_t last_p_ = 0;
    bool exhausted_ = false;
};

std::vector<PrimeCandidate> find_primes(Discriminant d_o, Integer ell, int depth, std::size_t count,
                                        Integer max_p = 1'000'000'000'000'000LL);

// True iff 4p = t'^2 + v'^2 |D_K| has a solution with f ell^(d+1) | v'.
bool has_deeper_representation(std::uint64_t p, Integer dk_abs, Integer f, Integer ell, int depth);

enum class CertificateStatus { Verified, Unverified, Rejected };

struct RealizationCertificate {
    CraterShape crater;
    int ell = 0;
    int depth = 0;
    Integer d = 0;
    std::string prime_form;
    std::int64_t t = 0;
    Integer v = 0;
    std::uint64_t p = 0;
    CertificateStatus status = CertificateStatus::Unverified;
    std::optional<Fp> witness_j;
    std::vector<VolcanoProfile> observed;
    std::string note;

    bool verified() const { return status == CertificateStatus::Verified; }
    std::string to_json() const;
};

struct VerifyOptions {
    std::uint64_t verify_cap = 200'000;
    // Above this, only the t-cordillera is built.
    std::uint64_t full_build_limit = 20'000;
    unsigned threads = 1;
    RootFindingOptions roots;
    std::optional<std::filesystem::path> data_dir;
};

RealizationCertificate verify_realization(RealizationCertificate cert, const AbstractVolcano& target,
                                          const VerifyOptions& opt = {});

struct SolveOptions {
    Strategy strategy = Strategy::Family;
    std::size_t count = 1;
    Integer max_p = 1'000'000'000'000'000LL;
    VerifyOptions verify;
    // Called as each certificate is produced.
    std::function<void(const RealizationCertificate&)> on_certificate;
};

class VerificationFailure : public std::runtime_error {
public:
    VerificationFailure(const std::string& what, RealizationCertificate cert)
        : std::runtime_error(what), certificate(std::move(cert)) {}
    RealizationCertificate certificate;
};

std::vector<RealizationCertificate> solve_inverse(const AbstractVolcano& target, const SolveOptions& opt = {});

}  // namespace volcano

#include "volcano/inverse.hpp"

#include <json.hpp>

#include <algorithm>

namespace volcano {

namespace {

// True iff the class of f has order exactly n.
bool has_order(const QuadForm& f, int n) {
    QuadForm g = reduce(f);
    QuadForm one = principal_form(Discriminant(f.discriminant()));
    QuadForm acc = g;
    for (int k = 1; k <= n; ++k) {
        if (acc == one) return k == n;
        acc = compose(acc, g);
    }
    return false;
}

bool split_with_order(Integer dv, Integer ell, int n, bool allow_units = false) {
    if (!is_discriminant(dv) || dv > -3 || (!allow_units && dv >= -4)) return false;
    Discriminant d(dv);
    if (divides_conductor(d, ell) || kronecker(dv, ell) != 1) return false;
    return has_order(std::get<QuadForm>(prime_form(d, ell)), n);
}

Integer split_order_bound(Integer ell, int n) { return checked_sub(checked_mul(4, checked_pow(ell, n)), 1); }

void require_prime(Integer ell) {
    if (!is_prime(ell)) throw std::invalid_argument("ell must be prime");
}

}  // namespace

Strategy parse_strategy(const std::string& s) {
    if (s == "family") return Strategy::Family;
    if (s == "minimal") return Strategy::Minimal;
    throw std::invalid_argument("unknown strategy '" + s + "' (family | minimal)");
}

VolcanoProfile AbstractVolcano::profile(int ell_value) const {
    return {crater, ell_value, depth, induced_level_sizes(crater, ell_value, depth), false};
}

Discriminant family_discriminant(Integer ell, int n) {
    require_prime(ell);
    if (n < 1) throw std::invalid_argument("n must be positive");
    Discriminant d(-3);
    if (ell == 2) {
        d = n == 4 ? Discriminant(-39) : field_discriminant(checked_sub(1, checked_pow(2, n + 2)));
    } else {
        bool first;
        if (n % 2 == 1) {
            first = n >= 3 && !(ell == 3 && n == 5);
        } else {
            Integer half = checked_pow(ell, n / 2);
            first = !is_square((half + 1) / 2) && !is_square((half - 1) / 2);
        }
        Integer pw = checked_pow(ell, n);
        d = field_discriminant(first ? 1 - pw : checked_sub(1, checked_mul(4, pw)));
    }
    if (!split_with_order(d.value(), ell, n, true)) {
        throw std::logic_error("family discriminant " + to_string(d.value()) + " fails the order check for ell=" +
                               to_string(ell) + ", n=" + std::to_string(n));
    }
    return d;
}

std::vector<Discriminant> split_order_discriminants(Integer ell, int n, Integer bound) {
    require_prime(ell);
    std::vector<Discriminant> out;
    for (Integer a = 5; a <= bound; ++a) {
        if (split_with_order(-a, ell, n)) out.emplace_back(-a);
    }
    return out;
}

Discriminant minimal_crater_discriminant(Integer ell, int n, Integer budget) {
    require_prime(ell);
    if (n < 1) throw std::invalid_argument("n must be positive");
    Integer bound = split_order_bound(ell, n);
    if (bound > budget) {
        throw BudgetExceeded("discriminant scan bound " + to_string(bound) + " exceeds the budget " + to_string(budget));
    }
    for (Integer a = 5; a <= bound; ++a) {
        if (split_with_order(-a, ell, n)) return Discriminant(-a);
    }
    throw std::logic_error("no discriminant within 4 ell^n - 1 for ell=" + to_string(ell) + ", n=" + std::to_string(n));
}

std::string CraterRealization::prime_form_description() const {
    if (std::holds_alternative<InertPrime>(prime)) return "inert";
    if (std::holds_alternative<NonInvertible>(prime)) return "non-invertible";
    return std::get<QuadForm>(prime).str();
}

CraterRealization realize_crater(const CraterShape& shape, Integer ell, Strategy strategy) {
    require_prime(ell);
    std::optional<Discriminant> d;
    auto first_valid = [&](auto pred) {
        for (Integer a = 5;; ++a) {
            Integer dv = -a;
            if (!is_discriminant(dv) || divides_conductor(Discriminant(dv), ell)) continue;
            if (pred(Discriminant(dv))) return Discriminant(dv);
        }
    };
    switch (shape.kind) {
        case CraterKind::Point:
            d = first_valid([&](Discriminant x) { return kronecker(x.value(), ell) == -1; });
            break;
        case CraterKind::SelfLoop: {
            std::vector<Integer> candidates;
            if (mod(-ell, 4) == 1 && -ell < -4) candidates.push_back(-ell);
            candidates.push_back(-4 * ell);
            for (Integer c : candidates) {
                if (predicted_crater(Discriminant(c), ell) == shape) {
                    d = Discriminant(c);
                    break;
                }
            }
            if (!d) {
                d = first_valid([&](Discriminant x) {
                    return kronecker(x.value(), ell) == 0 && predicted_crater(x, ell) == shape;
                });
            }
            break;
        }
        case CraterKind::DoubleSelfLoop:
            if (strategy == Strategy::Family) {
                // Q(sqrt(-3)) for ell = 7; fall back to the order of discriminant 1 - 4 ell.
                d = field_discriminant(1 - 4 * ell);
                if (d->value() >= -4) d = Discriminant(1 - 4 * ell);
            } else {
                d = minimal_crater_discriminant(ell, 1);
            }
            break;
        case CraterKind::Edge2:
            for (Integer q = 2; !d; ++q) {
                if (!is_prime(q) || q == ell) continue;
                Discriminant c = field_discriminant(-ell * q);
                if (c.value() < -4 && kronecker(c.value(), ell) == 0 &&
                    has_order(std::get<QuadForm>(prime_form(c, ell)), 2)) {
                    d = c;
                }
            }
            break;
        case CraterKind::DoubleEdge2:
        case CraterKind::Cycle: {
            int n = shape.size();
            d = strategy == Strategy::Family ? family_discriminant(ell, n) : minimal_crater_discriminant(ell, n);
            break;
        }
    }
    if (d->value() >= -4 || divides_conductor(*d, ell) || !(predicted_crater(*d, ell) == shape)) {
        throw std::logic_error("realization of " + shape.str() + " failed its own check");
    }
    return {*d, prime_form(*d, ell), shape};
}

bool has_deeper_representation(std::uint64_t p, Integer dk_abs, Integer f, Integer ell, int depth) {
    Integer step = checked_mul(f, checked_pow(ell, depth + 1));
    Integer four_p = 4 * static_cast<Integer>(p);
    for (Integer v = step; checked_mul(checked_mul(v, v), dk_abs) < four_p; v += step) {
        Integer t;
        if (is_square(four_p - v * v * dk_abs, &t) && t > 0) return true;
    }
    return false;
}

PrimeSearch::PrimeSearch(Discriminant d_o, Integer ell, int depth, Integer max_p)
    : ell_(ell), depth_(depth), max_p_(max_p) {
    require_prime(ell);
    if (d_o.value() >= -4) throw std::invalid_argument("D_O must be below -4");
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    if (divides_conductor(d_o, ell)) throw std::invalid_argument("ell divides the conductor of D_O");
    if (ell == 2 && depth == 0) {
        throw std::invalid_argument("depth 0 with ell = 2 is not supported; choose an odd ell");
    }
    auto fd = fundamental_discriminant(d_o);
    dk_abs_ = -fd.dk.value();
    f_ = fd.f;
    ell_d_ = checked_pow(ell, depth);
    Integer v = conductor(1);
    heap_.emplace(checked_add(1, checked_mul(checked_mul(v, v), dk_abs_)), 1, 1);
}

Integer PrimeSearch::next_w(Integer w) const {
    ++w;
    while (w % ell_ == 0) ++w;
    return w;
}

Integer PrimeSearch::conductor(Integer w) const { return checked_mul(checked_mul(f_, ell_d_), w); }

bool PrimeSearch::admissible(const PrimeCandidate& c, Integer w) const {
    Integer p = static_cast<Integer>(c.p);
    if (c.t % p == 0 || f_ % p == 0 || w % p == 0) return false;
    if (ell_ == 2 && dk_abs_ > 4 && has_deeper_representation(c.p, dk_abs_, f_, ell_, depth_)) return false;
    return true;
}

std::optional<PrimeCandidate> PrimeSearch::next() {
    while (!heap_.empty()) {
        auto [value, t, w] = heap_.top();
        if (value / 4 > max_p_) break;
        heap_.pop();
        Integer v = conductor(w);
        heap_.emplace(checked_add(value, 2 * t + 1), t + 1, w);
        if (t == 1) {
            Integer w2 = next_w(w);
            Integer v2 = conductor(w2);
            heap_.emplace(checked_add(1, checked_mul(checked_mul(v2, v2), dk_abs_)), 1, w2);
        }
        if (value % 4 != 0) continue;
        Integer p = value / 4;
        if (p < 5 || p == ell_ || !is_prime(p)) continue;
        PrimeCandidate c{static_cast<std::uint64_t>(p), static_cast<std::int64_t>(t), v};
        if (c.p == last_p_ || !admissible(c, w)) continue;
        last_p_ = c.p;
        return c;
    }
    exhausted_ = true;
    return std::nullopt;
}

std::vector<PrimeCandidate> find_primes(Discriminant d_o, Integer ell, int depth, std::size_t count, Integer max_p) {
    PrimeSearch search(d_o, ell, depth, max_p);
    std::vector<PrimeCandidate> out;
    while (out.size() < count) {
        auto c = search.next();
        if (!c) throw SearchExhausted("no further primes below " + to_string(max_p));
        out.push_back(*c);
    }
    return out;
}

std::string RealizationCertificate::to_json() const {
    nlohmann::ordered_json j;
    j["crater"] = crater.str();
    j["ell"] = ell;
    j["depth"] = depth;
    j["D"] = static_cast<std::int64_t>(d);
    j["prime_form"] = prime_form;
    j["t"] = t;
    j["v"] = static_cast<std::int64_t>(v);
    j["p"] = p;
    j["verified"] = verified();
    j["status"] = status == CertificateStatus::Verified ? "verified"
                  : status == CertificateStatus::Unverified ? "unverified" : "rejected";
    j["witness_j"] = witness_j ? nlohmann::ordered_json(*witness_j) : nlohmann::ordered_json(nullptr);
    if (!note.empty()) j["note"] = note;
    if (!observed.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& pr : observed) arr.push_back(pr.str());
        j["observed"] = arr;
    }
    return j.dump();
}

RealizationCertificate verify_realization(RealizationCertificate cert, const AbstractVolcano& target,
                                          const VerifyOptions& opt) {
    cert.observed.clear();
    cert.witness_j.reset();
    if (cert.p > opt.verify_cap) {
        cert.status = CertificateStatus::Unverified;
        cert.note = "p above verify cap " + std::to_string(opt.verify_cap);
        return cert;
    }
    Integer lhs = 4 * static_cast<Integer>(cert.p) - static_cast<Integer>(cert.t) * cert.t;
    auto fd = fundamental_discriminant(Discriminant(cert.d));
    if (!is_prime(cert.p) || lhs != cert.v * cert.v * -fd.dk.value() ||
        valuation(cert.v, cert.ell) != cert.depth + valuation(fd.f, cert.ell)) {
        cert.status = CertificateStatus::Rejected;
        cert.note = "arithmetic invariants do not hold";
        return cert;
    }
    BuildOptions bo;
    bo.graph_cap = std::max<std::uint64_t>(opt.verify_cap, opt.full_build_limit);
    bo.threads = opt.threads;
    bo.roots = opt.roots;
    bo.data_dir = opt.data_dir;
    VolcanoProfile want = target.profile(cert.ell);
    try {
        IsogenyGraph g = cert.p <= opt.full_build_limit ? build_graph(cert.p, cert.ell, bo)
                                                        : build_cordillera_graph(cert.p, cert.ell, cert.t, bo);
        Decomposition dec = decompose(g);
        for (const auto& comp : dec.components) {
            if (comp.trace != cert.t) continue;
            VolcanoProfile got = comp.profile();
            got.ell = cert.ell;
            if (got == want) {
                cert.status = CertificateStatus::Verified;
                for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
                    if (comp.levels[i] == 0) {
                        cert.witness_j = comp.vertices[i];
                        break;
                    }
                }
                cert.observed.clear();
                return cert;
            }
            cert.observed.push_back(got);
        }
        cert.status = CertificateStatus::Rejected;
        cert.note = "no component of the t-cordillera has the target profile " + want.str();
    } catch (const StructureError& e) {
        cert.status = CertificateStatus::Rejected;
        cert.note = e.what();
    }
    return cert;
}

std::vector<RealizationCertificate> solve_inverse(const AbstractVolcano& target, const SolveOptions& opt) {
    if (target.depth < 0) throw std::invalid_argument("depth must be non-negative");
    int ell;
    if (target.ell) {
        ell = *target.ell;
        if (!is_prime(ell)) throw std::invalid_argument("ell must be prime");
        if (!is_supported_ell(ell)) throw std::invalid_argument("ell must be one of 2, 3, 5, 7, 11, 13 for verification");
        if (ell == 2 && target.depth == 0) {
            throw std::invalid_argument("depth-0 targets cannot use ell = 2; choose an odd ell such as 3");
        }
    } else {
        if (target.depth > 0) throw std::invalid_argument("ell is required when depth > 0");
        ell = 3;
    }
    CraterRealization real = realize_crater(target.crater, ell, opt.strategy);
    PrimeSearch search(real.d, ell, target.depth, opt.max_p);
    std::vector<RealizationCertificate> out;
    while (out.size() < opt.count) {
        auto c = search.next();
        if (!c) throw SearchExhausted("prime search exhausted below " + to_string(opt.max_p));
        RealizationCertificate cert;
        cert.crater = target.crater;
        cert.ell = ell;
        cert.depth = target.depth;
        cert.d = real.d.value();
        cert.prime_form = real.prime_form_description();
        cert.t = c->t;
        cert.v = c->v;
        cert.p = c->p;
        cert = verify_realization(cert, target, opt.verify);
        if (cert.status == CertificateStatus::Rejected) {
            throw VerificationFailure("certificate for p=" + std::to_string(cert.p) + " rejected: " + cert.note, cert);
        }
        if (opt.on_certificate) opt.on_certificate(cert);
        out.push_back(std::move(cert));
    }
    return out;
}

}  // namespace volcano

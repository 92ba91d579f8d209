#include "common.hpp"

#include <set>

#include "volcano/inverse.hpp"

using namespace volcano;

namespace {

VerifyOptions vopts() {
    VerifyOptions o;
    o.data_dir = VOLCANO_SOURCE_DATA_DIR;
    return o;
}

SolveOptions sopts(Strategy s, std::size_t count) {
    SolveOptions o;
    o.strategy = s;
    o.count = count;
    o.verify = vopts();
    return o;
}

// Smallest |D| found by searching b with b^2 = D mod 4 ell directly: an oracle independent of prime_form.
Integer brute_minimal(Integer ell, int n) {
    for (Integer a = 5;; ++a) {
        Integer d = -a;
        if (!is_discriminant(d) || divides_conductor(Discriminant(d), ell) || kronecker(d, ell) != 1) continue;
        for (Integer b = 0; b < 2 * ell; ++b) {
            if ((b * b - d) % (4 * ell) != 0) continue;
            QuadForm f{ell, b, (b * b - d) / (4 * ell)};
            if (f.is_primitive() && order_of_class(f) == n) return d;
            break;
        }
    }
}

}  // namespace

TEST_CASE("family discriminants") {
    CHECK(family_discriminant(2, 4).value() == -39);
    CHECK(family_discriminant(2, 3).value() == -31);
    CHECK(family_discriminant(3, 5).value() == -971);
    for (Integer ell : {2, 3, 5, 7}) {
        for (int n = 1; n <= 10; ++n) {
            Discriminant d = family_discriminant(ell, n);
            auto pf = prime_form(d, ell);
            REQUIRE(std::holds_alternative<QuadForm>(pf));
            CHECK(kronecker(d.value(), ell) == 1);
            CHECK(order_of_class(std::get<QuadForm>(pf)) == n);
        }
    }
}

TEST_CASE("minimal crater discriminants") {
    CHECK(minimal_crater_discriminant(2, 2).value() == -15);
    CHECK(split_order_discriminants(2, 2, 4 * 4 - 1).size() == 1);
    CHECK(minimal_crater_discriminant(3, 5).value() == -47);
    CHECK(minimal_crater_discriminant(2, 6).value() == -87);
    for (Integer ell : {2, 3, 5}) {
        for (int n = 1; n <= 5; ++n) {
            Integer d = minimal_crater_discriminant(ell, n).value();
            CHECK(d == brute_minimal(ell, n));
            CHECK(-d <= 4 * checked_pow(ell, n) - 1);
        }
    }
    CHECK_THROWS_AS(minimal_crater_discriminant(7, 10, 1'000'000), BudgetExceeded);
}

TEST_CASE("crater realizations") {
    CHECK(realize_crater(CraterShape::self_loop(), 3, Strategy::Family).d.value() == -12);
    CHECK(realize_crater(CraterShape::double_self_loop(), 2, Strategy::Family).d.value() == -7);
    CHECK(realize_crater(CraterShape::cycle(6), 2, Strategy::Minimal).d.value() == -87);
    for (Integer ell : {2, 3, 5, 7, 11, 13}) {
        for (auto shape : {CraterShape::point(), CraterShape::self_loop(), CraterShape::double_self_loop(),
                           CraterShape::edge2(), CraterShape::double_edge2(), CraterShape::cycle(3),
                           CraterShape::cycle(5)}) {
            for (Strategy s : {Strategy::Family, Strategy::Minimal}) {
                auto r = realize_crater(shape, ell, s);
                CHECK(r.d.value() < -4);
                CHECK_FALSE(divides_conductor(r.d, ell));
                CHECK(predicted_crater(r.d, ell) == shape);
            }
        }
    }
}

TEST_CASE("prime search") {
    auto ps = find_primes(Discriminant(-87), 2, 1, 5);
    CHECK(ps.front().p == 103);
    CHECK(ps.front().t == 8);
    CHECK(ps.front().v == 2);
    std::uint64_t last = 0;
    for (const auto& c : ps) {
        CHECK(c.p > last);
        last = c.p;
        CHECK(c.t != 0);
        CHECK(4 * static_cast<Integer>(c.p) == static_cast<Integer>(c.t) * c.t + c.v * c.v * 87);
    }
    // Direct enumeration oracle for (-31, 2, 1): smallest p = (t^2 + 31 v^2)/4 with v_2(v) = 1 exactly,
    // and no representation with 4 | v'.
    auto first = find_primes(Discriminant(-31), 2, 1, 1).front();
    std::uint64_t best = 0;
    for (std::uint64_t p = 5; p < 100000 && !best; ++p) {
        if (!is_prime(p)) continue;
        bool good = false, deeper = false;
        for (Integer v = 1; v * v * 31 < 4 * static_cast<Integer>(p); ++v) {
            Integer t;
            if (!is_square(4 * static_cast<Integer>(p) - v * v * 31, &t) || t == 0) continue;
            if (valuation(v, 2) == 1) good = true;
            if (valuation(v, 2) >= 2) deeper = true;
        }
        if (good && !deeper) best = p;
    }
    CHECK(first.p == best);
    CHECK_THROWS_AS(PrimeSearch(Discriminant(-7), 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(find_primes(Discriminant(-87), 2, 1, 3, 150), SearchExhausted);
}

TEST_CASE("verification of the worked example") {
    RealizationCertificate c;
    c.crater = CraterShape::cycle(6);
    c.ell = 2;
    c.depth = 1;
    c.d = -87;
    c.t = 8;
    c.v = 2;
    c.p = 103;
    AbstractVolcano target{CraterShape::cycle(6), 2, 1};
    auto v = verify_realization(c, target, vopts());
    CHECK(v.verified());
    REQUIRE(v.witness_j);
    auto again = verify_realization(v, target, vopts());
    CHECK(again.verified());
    // Wrong depth is rejected.
    AbstractVolcano wrong{CraterShape::cycle(6), 2, 2};
    CHECK(verify_realization(c, wrong, vopts()).status == CertificateStatus::Rejected);
    VerifyOptions capped = vopts();
    capped.verify_cap = 100;
    CHECK(verify_realization(c, target, capped).status == CertificateStatus::Unverified);
}

TEST_CASE("solve inverse") {
    AbstractVolcano six{CraterShape::cycle(6), 2, 1};
    auto certs = solve_inverse(six, sopts(Strategy::Minimal, 3));
    REQUIRE(certs.size() == 3);
    CHECK(certs.front().d == -87);
    CHECK(certs.front().p <= 103);
    std::set<std::uint64_t> ps;
    for (const auto& c : certs) {
        CHECK(c.verified());
        ps.insert(c.p);
    }
    CHECK(ps.size() == 3);
    CHECK(certs.front().to_json().find("\"D\":-87") != std::string::npos);

    AbstractVolcano point{CraterShape::point(), std::nullopt, 0};
    auto pc = solve_inverse(point, sopts(Strategy::Family, 1));
    CHECK(pc.front().verified());
    CHECK(pc.front().ell % 2 == 1);
    CHECK(pc.front().prime_form == "inert");

    AbstractVolcano loop{CraterShape::self_loop(), 3, 2};
    auto lc = solve_inverse(loop, sopts(Strategy::Family, 1));
    CHECK(lc.front().d == -12);
    CHECK(lc.front().verified());
    CHECK(loop.profile(3).level_sizes == std::vector<std::int64_t>{1, 3, 9});

    AbstractVolcano bad{CraterShape::point(), 2, 0};
    CHECK_THROWS_AS(solve_inverse(bad, sopts(Strategy::Family, 1)), std::invalid_argument);
    AbstractVolcano no_ell{CraterShape::point(), std::nullopt, 1};
    CHECK_THROWS_AS(solve_inverse(no_ell, sopts(Strategy::Family, 1)), std::invalid_argument);
}

TEST_CASE("every crater shape realizes for small ell and depth") {
    for (int ell : {2, 3, 5}) {
        for (int depth : {0, 1, 2}) {
            if (ell == 2 && depth == 0) continue;
            for (auto shape : {CraterShape::point(), CraterShape::self_loop(), CraterShape::double_self_loop(),
                               CraterShape::edge2(), CraterShape::double_edge2(), CraterShape::cycle(3),
                               CraterShape::cycle(4)}) {
                AbstractVolcano t{shape, ell, depth};
                auto o = sopts(Strategy::Minimal, 2);
                auto certs = solve_inverse(t, o);
                for (const auto& c : certs) {
                    CHECK_MESSAGE(c.status != CertificateStatus::Rejected, shape.str() << " ell=" << ell);
                    if (c.p <= o.verify.verify_cap) CHECK(c.verified());
                }
            }
        }
    }
}

#include "common.hpp"

#include <cmath>

#include "volcano/curves.hpp"

using namespace volcano;

namespace {

// #E(F_p) by enumerating every pair (x, y).
std::int64_t naive_trace(const Weierstrass& e, std::uint64_t p) {
    std::int64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t rhs = (mulmod(mulmod(x, x, p), x, p) + mulmod(e.a, x, p) + e.b) % p;
        for (std::uint64_t y = 0; y < p; ++y)
            if (mulmod(y, y, p) == rhs) ++count;
    }
    return static_cast<std::int64_t>(p) + 1 - count;
}

}  // namespace

TEST_CASE("field prime validation") {
    CHECK_THROWS(require_field_prime(4));
    CHECK_THROWS(require_field_prime(3));
    CHECK_NOTHROW(require_field_prime(1009));
}

TEST_CASE("curve from j round-trips") {
    auto e0 = curve_from_j(0, 7);
    CHECK(e0.a == 0);
    CHECK(e0.b == 1);
    auto e1 = curve_from_j(719, 1009);
    CHECK(e1.a == 1);
    CHECK(e1.b == 0);
    for (std::uint64_t p : {5ULL, 7ULL, 101ULL, 1009ULL, 7321ULL}) {
        for (Fp j = 0; j < p; ++j) CHECK(j_invariant(curve_from_j(j, p), p) == j);
    }
}

TEST_CASE("character-sum trace agrees with brute force counting") {
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL, 53ULL, 101ULL, 197ULL}) {
        for (Fp j = 0; j < p; ++j) {
            CHECK(trace_abs(j, p) == std::llabs(naive_trace(curve_from_j(j, p), p)));
        }
    }
}

TEST_CASE("supersingular and special traces") {
    CHECK(trace_abs(149, 1009) == 0);
    CHECK(trace_abs(0, 11) == 0);
    auto t0 = trace_abs(0, 1009);
    CHECK((t0 == 19 || t0 == 43 || t0 == 62));
    CHECK(traces_for_j(0, 1009).traces == std::vector<std::int64_t>{19, 43, 62});
    CHECK(traces_for_j(719, 1009).traces == std::vector<std::int64_t>{30, 56});
    auto five = traces_for_j(5, 1009);
    CHECK(five.traces.size() == 1);
    CHECK(five.traces.front() == trace_abs(5, 1009));
    CHECK(traces_for_j(0, 11).supersingular());
    CHECK(traces_for_j(1728 % 1019, 1019).supersingular());  // 1019 = 3 mod 4
}

TEST_CASE("norm equation traces") {
    // 4p = t^2 + 3 v^2 and t^2 + 4 v^2 solutions, by brute force.
    for (std::uint64_t p : {13ULL, 37ULL, 61ULL, 1009ULL, 7321ULL}) {
        for (std::int64_t k : {3, 4}) {
            std::vector<std::int64_t> brute;
            for (std::int64_t t = 1; t * t < 4 * static_cast<std::int64_t>(p); ++t) {
                std::int64_t r = 4 * static_cast<std::int64_t>(p) - t * t;
                if (r % k) continue;
                auto v = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(r / k))));
                if (v > 0 && v * v == r / k) brute.push_back(t);
            }
            CHECK(norm_equation_traces(p, k) == brute);
        }
    }
}

TEST_CASE("Hasse bound and the point-order filter") {
    for (std::uint64_t p : {1009ULL, 1303ULL, 4999ULL}) {
        CharacterTable chi(p);
        auto bound = static_cast<std::int64_t>(std::floor(2 * std::sqrt(static_cast<double>(p))));
        for (Fp j = 0; j < p; ++j) {
            auto ts = traces_for_j(j, chi);
            for (auto t : ts.traces) {
                CHECK(t > 0);
                CHECK(t <= bound);
            }
            if (j != 0 && j != 1728 % p && !ts.supersingular()) {
                CHECK(may_have_trace(j, p, ts.traces.front()));
            }
        }
    }
}

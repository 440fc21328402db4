#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gapinterp/error.hpp"
#include "gapinterp/patterns.hpp"

using namespace gapinterp;

namespace {

std::vector<int> K(const ObservationPattern& p) { return missing_indices(p); }

}  // namespace

TEST_CASE("missing sets of the finite kinds") {
    CHECK(K(ObservationPattern::s4(3, 1, 3)) == std::vector<int>{0, 1, -4, -5, -6});
    CHECK(K(ObservationPattern::s4(2, 1, 3)) == std::vector<int>{0, 1, -3, -4, -5});
    CHECK(K(ObservationPattern::s5(1, 2, 3)) == std::vector<int>{0, 1, 4, 5, 6});
    CHECK(K(ObservationPattern::s6(1, 0, 1, 1, 1)) == std::vector<int>{0, -2, 2});
}

TEST_CASE("missing sets of the truncated infinite kinds") {
    CHECK(K(ObservationPattern::s1(2, 1, 3)) == std::vector<int>{0, 1, -3, -4, -5});
    CHECK(K(ObservationPattern::s2(1, 2, 2)) == std::vector<int>{0, 1, 4, 5});
    CHECK(K(ObservationPattern::s3(1, 0, 1, 2)) == std::vector<int>{0, -2, -3, 2, 3});
}

TEST_CASE("block sizes") {
    for (int N = 0; N < 4; ++N) {
        for (int N1 = 0; N1 < 4; ++N1) {
            for (int N2 = 0; N2 < 4; ++N2) {
                CHECK(ObservationPattern::s4(2, N, N1).size() == N + 1 + N1);
                CHECK(ObservationPattern::s5(N, 2, N2).size() == N + 1 + N2);
                CHECK(ObservationPattern::s6(2, N, N1, 3, N2).size() == N + 1 + N1 + N2);
                CHECK(K(ObservationPattern::s6(2, N, N1, 3, N2)).size() == std::size_t(N + 1 + N1 + N2));
            }
        }
    }
}

TEST_CASE("empty right block reduces S6 to S4 and empty left block reduces it to S5") {
    for (int M1 = 1; M1 < 4; ++M1) {
        for (int N = 0; N < 3; ++N) {
            for (int N1 = 0; N1 < 4; ++N1) {
                CHECK(K(ObservationPattern::s6(M1, N, N1, 2, 0)) == K(ObservationPattern::s4(M1, N, N1)));
                CHECK(K(ObservationPattern::s6(M1, N, 0, 2, N1)) == K(ObservationPattern::s5(N, 2, N1)));
            }
        }
    }
}

TEST_CASE("ordering is stable and truncation only appends") {
    const auto p = ObservationPattern::s3(2, 1, 3, 5);
    CHECK(K(p) == K(p));
    for (int T = 1; T < 20; ++T) {
        const auto a = K(ObservationPattern::s1(2, 1, T));
        const auto b = K(ObservationPattern::s1(2, 1, T + 1));
        REQUIRE(b.size() == a.size() + 1);
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
        const auto c = K(ObservationPattern::s2(1, 2, T));
        const auto d = K(ObservationPattern::s2(1, 2, T + 1));
        CHECK(std::equal(c.begin(), c.end(), d.begin()));
    }
}

TEST_CASE("membership agrees with enumeration") {
    const auto p = ObservationPattern::s6(2, 1, 3, 2, 2);
    const auto k = K(p);
    for (int j = -20; j <= 20; ++j) {
        const bool listed = std::find(k.begin(), k.end(), j) != k.end();
        CHECK(listed == p.is_missing(j));
    }
    const auto s1 = ObservationPattern::s1(2, 1, 3);
    CHECK(s1.is_missing(-100));
    CHECK_FALSE(s1.is_missing(-1));
    CHECK_FALSE(s1.is_missing(2));
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(ObservationPattern::s4(0, 1, 1), Error);
    CHECK_THROWS_AS(ObservationPattern::s4(1, -1, 1), Error);
    CHECK_THROWS_AS(ObservationPattern::s5(1, 0, 1), Error);
    CHECK_THROWS_AS(ObservationPattern::s1(1, 1, 0), Error);
    CHECK_THROWS_AS(ObservationPattern::s6(1, 1, -1, 1, 1), Error);
    CHECK_THROWS_AS(ObservationPattern::s4(1, 1, 1).with_truncation(3), Error);
    CHECK_THROWS_AS(parse_pattern_kind("S7"), Error);
}

TEST_CASE("weight vectors") {
    const auto ones = weight_vector(FunctionalWeights::constant(1.0), ObservationPattern::s4(3, 1, 3));
    CHECK(ones.size() == 5);
    for (Eigen::Index i = 0; i < ones.size(); ++i) CHECK(ones(i) == cplx(1.0));

    const auto g = weight_vector(FunctionalWeights::geometric(1.0, 0.5), ObservationPattern::s5(0, 1, 2));
    REQUIRE(g.size() == 3);
    CHECK(std::abs(g(0) - 1.0) < 1e-15);
    CHECK(std::abs(g(1) - 0.25) < 1e-15);
    CHECK(std::abs(g(2) - 0.125) < 1e-15);

    const auto e = weight_vector(FunctionalWeights::explicit_values({{0, 2.0}, {5, cplx(0, 1)}}),
                                 ObservationPattern::s5(1, 2, 3));
    CHECK(e(0) == cplx(2.0));
    CHECK(e(1) == cplx(0.0));
    CHECK(e(3) == cplx(0, 1));
}

TEST_CASE("geometric weights on a truncated S1 and the tail bound") {
    const auto p = ObservationPattern::s1(2, 3, 50);
    const auto w = FunctionalWeights::geometric(1.0, 0.5);
    CHECK(weight_vector(w, p).size() == 3 + 1 + 50);
    CHECK(tail_bound(w, p) == doctest::Approx(std::pow(0.5, 51)).epsilon(1e-14));
    // geometric tail sum oracle
    double omitted = 0.0;
    for (int j = 2 + 50 + 1; j < 2000; ++j) omitted += std::pow(0.25, j);
    const double kept = weight_vector(w, p).squaredNorm();
    CHECK(tail_mass_fraction(w, p) == doctest::Approx(omitted / (kept + omitted)).epsilon(1e-10));
    CHECK(tail_mass_fraction(w, p) < 1e-10);
    CHECK(tail_bound(w, ObservationPattern::s4(1, 1, 1)) == 0.0);
}

TEST_CASE("support mismatches") {
    CHECK_THROWS_AS(weight_vector(FunctionalWeights::explicit_values({{-1, 1.0}}), ObservationPattern::s4(2, 1, 3)),
                    Error);
    CHECK_THROWS_AS(weight_vector(FunctionalWeights::explicit_values({{-30, 1.0}}), ObservationPattern::s1(2, 1, 3)),
                    Error);
    CHECK_THROWS_AS(weight_vector(FunctionalWeights::constant(1.0), ObservationPattern::s1(2, 1, 3)), Error);
    try {
        (void)weight_vector(FunctionalWeights::explicit_values({{3, 1.0}}), ObservationPattern::s4(2, 1, 3));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SupportMismatch);
    }
}

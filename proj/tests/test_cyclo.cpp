#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "q3/errors.hpp"
#include "q3/series.hpp"

using namespace q3;

namespace {

CycloSeries random_cyclo(std::mt19937_64& rng, std::int64_t prec) {
    return CycloSeries(oracle::random_series(rng, 0, prec, 30), oracle::random_series(rng, 0, prec, 30));
}

}  // namespace

TEST_CASE("ring axioms under w^2 = -1 - w") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_cyclo(rng, 25), b = random_cyclo(rng, 25), c = random_cyclo(rng, 25);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("w is a primitive cube root of unity") {
    const auto w = CycloSeries(LaurentSeries::zero(5), LaurentSeries::constant(1, 5));
    const auto one = CycloSeries::embed(LaurentSeries::constant(1, 5));
    CHECK(w * w * w == one);
    CHECK(one + w + w * w == CycloSeries::embed(LaurentSeries::zero(5)));
}

TEST_CASE("embedding commutes with arithmetic") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 30; ++t) {
        const auto a = oracle::random_series(rng, 0, 20, 40), b = oracle::random_series(rng, 0, 20, 40);
        CHECK(CycloSeries::embed(a) * CycloSeries::embed(b) == CycloSeries::embed(a * b));
        CHECK(CycloSeries::embed(a) + CycloSeries::embed(b) == CycloSeries::embed(a + b));
        CHECK(CycloSeries::embed(a) - CycloSeries::embed(b) == CycloSeries::embed(a - b));
    }
}

TEST_CASE("twist examples") {
    const auto s = LaurentSeries::from_coeffs(0, {BigInt(4), BigInt(5), BigInt(6)}, 3);
    CHECK(twist(s, 0) == CycloSeries::embed(s));
    const auto q = LaurentSeries::monomial(1, 1, 5);
    const auto tq = twist(q, 1);
    CHECK(tq.real().is_zero());
    CHECK(tq.omega() == q);
    const auto q3 = LaurentSeries::monomial(1, 3, 5);
    CHECK(twist(q3, 1) == CycloSeries::embed(q3));
    // q^2 under k = 1 becomes w^2 q^2 = (-1 - w) q^2.
    const auto t2 = twist(LaurentSeries::monomial(1, 2, 5), 1);
    CHECK(t2.real().coeff(2) == -1);
    CHECK(t2.omega().coeff(2) == -1);
    CHECK_THROWS_AS(twist(s, 3), UsageError);
}

TEST_CASE("root-of-unity filtering at 90 terms") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const auto f = oracle::random_series(rng, 0, 90, 60);
        const CycloSeries sum = twist(f, 0) + twist(f, 1) + twist(f, 2);
        CHECK(sum.is_real());
        const CycloSeries third = divide_exact(sum, 3);
        CHECK(third.real().truncated(88) == dilate(u3(f), 3));
    }
}

TEST_CASE("twist respects negative exponents") {
    const auto s = LaurentSeries::monomial(1, -1, 4);
    // w^{-1} = w^2 = -1 - w
    const auto t = twist(s, 1);
    CHECK(t.real().coeff(-1) == -1);
    CHECK(t.omega().coeff(-1) == -1);
}

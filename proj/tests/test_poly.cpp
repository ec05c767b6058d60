#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "q3/errors.hpp"
#include "q3/modeq.hpp"
#include "q3/poly.hpp"

using namespace q3;

namespace {

IntPoly P(std::initializer_list<long> c) {
    std::vector<BigInt> v;
    for (long x : c) v.emplace_back(x);
    return IntPoly(std::move(v));
}

}  // namespace

TEST_CASE("arithmetic examples") {
    const auto a = P({0, 1, -3, 3});
    CHECK(a * a == P({0, 0, 1, -6, 15, -18, 9}));
    CHECK(a * IntPoly::constant(1) == a);
    CHECK((a - a).is_zero());
    CHECK((a - a).degree() == -1);
    CHECK(BigInt(3) * a == P({0, 3, -9, 9}));
    CHECK(-a == P({0, -1, 3, -3}));
    CHECK(P({1, 2, 0, 0}).degree() == 1);
    CHECK(IntPoly::monomial(5, 3) == P({0, 0, 0, 5}));
    CHECK(IntPoly::monomial(0, 3).is_zero());
    CHECK(a.coeff(2) == -3);
    CHECK(a.coeff(10) == 0);
}

TEST_CASE("min_degree examples") {
    const auto t = build_table(Side::xi, 4);
    CHECK(t.row(2).min_degree() == 1);
    CHECK(t.row(4).min_degree() == 2);
    CHECK(IntPoly::constant(1).min_degree() == 0);
    CHECK_THROWS_AS(IntPoly().min_degree(), UsageError);
}

TEST_CASE("shifts") {
    const auto a = P({0, 0, 4, 5});
    CHECK(a.shift_down(2) == P({4, 5}));
    CHECK(a.shift_up(1) == P({0, 0, 0, 4, 5}));
    CHECK_THROWS_AS(a.shift_down(3), StructuralError);
    CHECK(IntPoly().shift_down(4).is_zero());
}

TEST_CASE("eval_series examples") {
    const auto xi = named_series(NamedSeries::xi, 30);
    CHECK(P({1, -3, 3}).eval_series(xi).truncated(10) == u3(named_series(NamedSeries::gamma, 30)));
    CHECK(IntPoly().eval_series(xi) == LaurentSeries::zero(30));
    CHECK(P({0, 1}).eval_series(xi) == xi);
    CHECK(P({1, -3, 3}).eval_series(xi).precision() == 30);
}

TEST_CASE("eval_series is a ring homomorphism") {
    std::mt19937_64 rng(31);
    const auto x = named_series(NamedSeries::zeta, 40);
    for (int t = 0; t < 40; ++t) {
        const auto a = oracle::random_poly(rng, 8, 20), b = oracle::random_poly(rng, 8, 20);
        CHECK(first_difference((a * b).eval_series(x), a.eval_series(x) * b.eval_series(x)) == std::nullopt);
        const auto lhs = (a + b).eval_series(x), rhs = a.eval_series(x) + b.eval_series(x);
        INFO(to_json(lhs).dump(), " vs ", to_json(rhs).dump());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("multiplication agrees with naive convolution on 200 instances") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 200; ++t) {
        const std::size_t len = t < 150 ? 30 : 400;
        const auto a = oracle::random_poly(rng, len, 30 + t), b = oracle::random_poly(rng, len, 30);
        const IntPoly want(oracle::naive_convolution(std::vector<BigInt>(a.coeffs().begin(), a.coeffs().end()),
                                                     std::vector<BigInt>(b.coeffs().begin(), b.coeffs().end())));
        CHECK(a * b == want);
    }
}

TEST_CASE("json round trip") {
    const auto a = P({7, 0, -123456789});
    const auto j = to_json(a);
    CHECK(j["coeffs"][2] == "-123456789");
    CHECK(poly_from_json(j) == a);
    CHECK(poly_from_json(to_json(IntPoly())) == IntPoly());
    CHECK_THROWS(poly_from_json(nlohmann::json{{"coeffs", {"1", "x"}}}));
    CHECK_THROWS(poly_from_json(nlohmann::json{{"coefs", {"1"}}}));
}

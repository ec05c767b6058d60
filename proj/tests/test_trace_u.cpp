#include <doctest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "q3/engine.hpp"
#include "q3/trace_u.hpp"

using namespace q3;

namespace {

IntPoly P(std::initializer_list<long> c) {
    std::vector<BigInt> v;
    for (long x : c) v.emplace_back(x);
    return IntPoly(std::move(v));
}

// p(b) by plain Horner.
IntPoly horner(const IntPoly& p, const IntPoly& b) {
    IntPoly acc;
    for (auto i = p.degree(); i >= 0; --i) acc = acc * b + IntPoly::constant(p.coeff(i));
    return acc;
}

const ModEqTable& xi_table() {
    static const ModEqTable t = build_table(Side::xi, 183);
    return t;
}

}  // namespace

TEST_CASE("trinomial powers") {
    CHECK(trinomial_power(0) == P({1}));
    CHECK(trinomial_power(1) == P({1, 1, 1}));
    CHECK(trinomial_power(2) == P({1, 2, 3, 2, 1}));
    IntPoly t = IntPoly::constant(1);
    for (int n = 1; n <= 40; ++n) {
        t = t * P({1, 1, 1});
        CHECK(trinomial_power(n) == t);
    }
}

TEST_CASE("reflection and composition match Horner") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const auto p = oracle::random_poly(rng, t < 30 ? 20 : 150, 40);
        CHECK(reflect_one_minus(p) == horner(p, P({1, -1})));
        const auto b = oracle::random_poly(rng, 4, 10);
        CHECK(compose(p, b) == horner(p, b));
    }
    CHECK(compose(IntPoly(), P({1, 2})).is_zero());
}

TEST_CASE("trace route agrees with the table on monomials and random polynomials") {
    const auto& tab = xi_table();
    const TraceU tr(tab.row(1));
    for (std::int64_t i = 0; i <= 40; ++i) CHECK(tr.apply(IntPoly::monomial(1, i)) == tab.row(i));
    std::mt19937_64 rng(42);
    for (int t = 0; t < 30; ++t) {
        const auto p = oracle::random_poly(rng, 60, 50);
        CHECK(tr.apply(p) == u_poly(p, tab));
        CHECK(tr.apply_gamma(p) == u_gamma_poly(p, tab));
    }
}

TEST_CASE("Phi sequence agrees on both routes through M = 5") {
    auto tab = std::make_shared<const ModEqTable>(xi_table());
    const auto by_table = build_phi(Family::ph3, 5, UOperator(tab, URoute::table));
    const auto by_trace = build_phi(Family::ph3, 5, UOperator(tab, URoute::trace));
    CHECK(by_table.polys == by_trace.polys);
    CHECK(by_trace.at(5).degree() == 182);
}

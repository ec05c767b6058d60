#include <doctest.h>

#include <atomic>
#include <memory>

#include "oracles.hpp"
#include "q3/engine.hpp"
#include "q3/errors.hpp"

using namespace q3;

namespace {

IntPoly P(std::initializer_list<long long> c) {
    std::vector<BigInt> v;
    for (long long x : c) v.emplace_back(std::to_string(x));
    return IntPoly(std::move(v));
}

std::shared_ptr<const ModEqTable> table(Side s) {
    static const auto xi = std::make_shared<const ModEqTable>(build_table(Side::xi, 60));
    static const auto zeta = std::make_shared<const ModEqTable>(build_table(Side::zeta, 60));
    return s == Side::xi ? xi : zeta;
}

const PhiSequence& phi(Family f) {
    static const PhiSequence ph = build_phi(Family::ph3, 7, UOperator(table(Side::xi)));
    static const PhiSequence ps = build_phi(Family::ps3, 7, UOperator(table(Side::zeta)));
    return f == Family::ph3 ? ph : ps;
}

const IntPoly kPhi3 = P({55, -2163, 34509, -330318, 2227338, -11501919, 47744397, -164234952,
                         477601434, -1189266543, 2554873083, -4751141589, 7644778785, -10594276335,
                         12526595811, -12440502369, 10115979435, -6457008150, 3013270470, -903981141,
                         129140163});

}  // namespace

TEST_CASE("u_poly and u_gamma_poly examples") {
    const auto& t = *table(Side::xi);
    const auto phi1 = P({1, -3, 3});
    CHECK(u_poly(phi1, t) == P({1, -9, 36, -81, 135, -162, 81}));
    CHECK(u_poly(IntPoly::constant(1), t) == IntPoly::constant(1));
    CHECK(u_poly(P({0, 1}), t) == t.row(1));
    CHECK(u_gamma_poly(IntPoly::constant(1), t) == phi1);
    const auto phi3 = u_gamma_poly(u_poly(phi1, t), t);
    CHECK(phi3 == kPhi3);
    CHECK(phi3.coeff(20) == BigInt(pow3(17)));
    CHECK(phi3.degree() == 3 * 6 + 2);
    CHECK_THROWS_AS(u_poly(IntPoly::monomial(1, 61), t), PreconditionError);
    CHECK_THROWS_AS(u_gamma_poly(IntPoly::monomial(1, 60), t), PreconditionError);
}

TEST_CASE("UOperator picks a route and both routes agree") {
    const UOperator u(table(Side::xi));
    CHECK(u.route_for(60, false) == URoute::table);
    CHECK(u.route_for(60, true) == URoute::trace);
    CHECK(u.route_for(61, false) == URoute::trace);
    const UOperator by_table(table(Side::xi), URoute::table), by_trace(table(Side::xi), URoute::trace);
    std::mt19937_64 rng(51);
    for (int t = 0; t < 20; ++t) {
        const auto p = oracle::random_poly(rng, 50, 80);
        CHECK(by_table.u(p) == by_trace.u(p));
        CHECK(by_table.u_gamma(p) == by_trace.u_gamma(p));
    }
    ModEqTable bad = *table(Side::xi);
    bad.rows[2] = bad.rows[2] + IntPoly::monomial(9, 3);
    CHECK_THROWS_AS(UOperator(std::make_shared<const ModEqTable>(bad)), StructuralError);
}

TEST_CASE("Phi sequence") {
    const auto& s = phi(Family::ph3);
    CHECK(s.at(1) == P({1, -3, 3}));
    CHECK(s.at(2) == P({1, -9, 36, -81, 135, -162, 81}));
    CHECK(s.at(3).coeff(0) == 55);
    CHECK(s.at(3) == kPhi3);
    std::int64_t deg = 2;
    for (std::int64_t m = 2; m <= 7; ++m) {
        deg = m % 2 == 0 ? 3 * deg : 3 * deg + 2;
        CHECK(s.at(m).degree() == deg);
    }
    CHECK_THROWS_AS(s.at(8), PreconditionError);
    CHECK_THROWS_AS(build_phi(Family::ps3, 3, UOperator(table(Side::xi))), UsageError);
    CHECK_THROWS_AS(build_phi(Family::ph3, 0, UOperator(table(Side::xi))), UsageError);
    CHECK(phi_mirror_check(phi(Family::ph3), phi(Family::ps3)).ok());
}

TEST_CASE("Phi polynomials match their defining series") {
    CHECK(verify_phi_series(phi(Family::ph3), 1, 300).ok());
    CHECK(verify_phi_series(phi(Family::ph3), 2, 300).ok());
    CHECK(verify_phi_series(phi(Family::ps3), 3, 2000).ok());
    CHECK(verify_phi_series(phi(Family::ps3), 2, 300).ok());
    CHECK(iterated_series(Family::ph3, 1, 5).coeff(0) == 1);

    PhiSequence bad = phi(Family::ph3);
    bad.polys[2] = bad.polys[2] + IntPoly::monomial(1, 6);
    const auto c = verify_phi_series(bad, 2, 300);
    CHECK(c.status == Status::fail);
    CHECK(c.witness.has_value());
}

TEST_CASE("progression offsets") {
    CHECK(progression_offset(Family::ph3, 5) == 0);
    CHECK(progression_offset(Family::ps3, 1) == 2);
    CHECK(progression_offset(Family::ps3, 2) == 2);
    CHECK(progression_offset(Family::ps3, 3) == 20);
    CHECK(progression_offset(Family::ps3, 5) == 182);
    for (std::int64_t m = 1; m <= 15; ++m)
        for (Family f : {Family::ph3, Family::ps3})
            CHECK(progression_offset(f, m) == progression_offset_iterated(f, m));
    CHECK_THROWS_AS(progression_offset(Family::ps3, 0), UsageError);
}

TEST_CASE("hats") {
    const UOperator u(table(Side::xi));
    const auto hats = build_hats(phi(Family::ph3), 3, u);
    CHECK(hats.hats[1].coeff(0) == 54);
    CHECK(hats.hats[1].coeff(1) == -2160);
    CHECK(hats.hats[1].coeff(2) == 34506);
    CHECK(nu3(hats.hats[1].coeff(2)) == Nu3(5));
    const auto rep = hat_bound_check(hats, 3);
    CHECK(rep.ok());
    CHECK(two_path_hat_check(phi(Family::ph3), hats, 2, u).ok());
    CHECK_THROWS_AS(build_hats(phi(Family::ph3), 4, u), PreconditionError);

    // Perturbing C_2(0) by 27 breaks the m + 2 = 4 bound and the anchor.
    HatSequence bad = hats;
    bad.hats[2] = bad.hats[2] + IntPoly::constant(27);
    const auto f = hat_bound_check(bad, 3);
    REQUIRE(f.failures.size() == 2);
    CHECK(f.failures[0].check == "hat-coefficient");
    CHECK(f.failures[0].row == 2);
    CHECK(f.failures[0].index == 0);
    CHECK(f.failures[1].check == "anchor-constant-term");
}

TEST_CASE("congruence scans") {
    const auto a = scan_congruence(Family::ph3, 1, 200);
    CHECK(a.ok());
    CHECK(a.modulus_exponent == 3);
    CHECK(a.high_step == 27);
    CHECK(a.low_step == 3);
    const auto b = scan_congruence(Family::ps3, 1, 200);
    CHECK(b.ok());
    CHECK(b.high_offset == 20);
    CHECK(b.low_offset == 2);
    const auto c = scan_congruence(Family::ps3, 2, 40);
    CHECK(c.ok());
    CHECK(c.high_offset == 182);
    CHECK(c.low_offset == 20);

    const auto strong = scan_congruence(Family::ph3, 1, 200, 5);
    CHECK_FALSE(strong.ok());
    CHECK(strong.violations.front().nu < Nu3(8));
    CHECK(a.max_uniform_extra_power.has_value());
    CHECK(*a.max_uniform_extra_power < 5);
    CHECK(to_json(strong)["violations"].size() >= 1);

    CHECK_THROWS_AS(scan_congruence(Family::ph3, 0, 10), UsageError);
    CHECK_THROWS_AS(scan_congruence(Family::ph3, 1, 10, 0, generating_function(Family::ph3, 100)),
                    PrecisionError);
    CHECK(scan_horizon(Family::ph3, 1, 10) == 271);
    CHECK(scan_horizon(Family::ps3, 1, 10) == 291);
    CHECK_THROWS_AS(scan_horizon(Family::ph3, 6, 1000), PrecisionError);
}

TEST_CASE("mod 27 readings") {
    const auto r = attributed_mod27_readings(200);
    REQUIRE(r.size() == 2);
    CHECK_FALSE(r[0].ok());
    CHECK(r[1].ok());
}

TEST_CASE("pod3") {
    const auto pod = pod3_by_product(30);
    for (int n = 0; n <= 30; ++n) CHECK(pod[static_cast<std::size_t>(n)] == oracle::count_pod3(n));
    const auto g = generating_function(Family::ps3, 2);
    CHECK(g.coeff(0) == 1);
    CHECK(g.coeff(1) == -1);
    CHECK(pod_cross_check(500).ok());
    CHECK_THROWS_AS(pod_cross_check(0), UsageError);
}

TEST_CASE("open problem probe") {
    const auto c = probe_open_problem(3);
    CHECK(c.ok());
    const auto& v = c.data["values"];
    REQUIRE(v.size() == 3);
    CHECK(v[0]["n_low"] == 2);
    CHECK(v[0]["n_high"] == 20);
    CHECK(v[1]["n_high"] == 182);
}

TEST_CASE("parallel_for") {
    std::atomic<int> sum{0};
    parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
    CHECK(sum == 4950);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7) throw UsageError("boom");
                    }),
                    UsageError);
    parallel_for(0, 2, [](std::size_t) { FAIL("no work expected"); });
}

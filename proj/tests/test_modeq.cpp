#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "q3/errors.hpp"
#include "q3/modeq.hpp"

using namespace q3;

namespace {

IntPoly P(std::initializer_list<long> c) {
    std::vector<BigInt> v;
    for (long x : c) v.emplace_back(x);
    return IntPoly(std::move(v));
}

const ModEqTable& table(Side s) {
    static const ModEqTable xi = build_table(Side::xi, 60);
    static const ModEqTable zeta = build_table(Side::zeta, 60);
    return s == Side::xi ? xi : zeta;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("q3cong-test-" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("published base rows") {
    const auto xi = base_rows(Side::xi);
    CHECK(xi[0] == P({0, 1, -3, 3}));
    CHECK(xi[1] == P({0, -2, 9, -24, 45, -54, 27}));
    const auto zeta = base_rows(Side::zeta, 80);
    CHECK(zeta[2] == P({0, 1, -12, 66, -216, 486, -810, 972, -729, 243}));
    CHECK(zeta == xi);
    CHECK_THROWS_AS(base_rows(Side::xi, 39), UsageError);
}

TEST_CASE("series_fit rediscovers a known polynomial") {
    const auto x = base_series(Side::xi, 80);
    const auto p = P({5, -7, 0, 11});
    CHECK(series_fit(p.eval_series(x), x, 5) == p);
    CHECK_THROWS_AS(series_fit(x.shifted(1) + x, x, 3), CertificationError);
}

TEST_CASE("extend_table examples") {
    const auto& t = table(Side::xi);
    CHECK(t.row(0) == IntPoly::constant(1));
    CHECK(t.row(4).coeff(2) == 10);
    CHECK(t.row(9).min_degree() == 3);
    CHECK(t.row(4).degree() == 12);
    CHECK(t.provenance == Provenance::recurrence);
    CHECK_THROWS_AS(t.row(61), PreconditionError);
    for (std::int64_t i = 1; i <= 60; ++i) {
        CHECK(t.row(i).min_degree() == minimal_degree(i));
        CHECK(t.row(i).degree() == 3 * i);
    }
    CHECK_NOTHROW(check_recurrence(t));
}

TEST_CASE("a row with the wrong shape is rejected by extend_table") {
    auto base = published_base_rows();
    base[2] = base[2] + IntPoly::monomial(1, 0);
    CHECK_THROWS_AS(extend_table(seed_table(Side::xi, base), 6), StructuralError);
}

TEST_CASE("verify_rows") {
    const auto c = verify_rows(table(Side::xi), 12, 400);
    CHECK(c.ok());
    CHECK_FALSE(c.horizon_note.empty());
    CHECK(verify_rows(table(Side::xi), 0).ok());
    CHECK(verify_rows(table(Side::zeta), 6).ok());

    ModEqTable bad = table(Side::xi);
    std::vector<BigInt> c5(bad.rows[5].coeffs().begin(), bad.rows[5].coeffs().end());
    c5[3] += 1;
    bad.rows[5] = IntPoly(c5);
    const auto f = verify_rows(bad, 6);
    CHECK(f.status == Status::fail);
    REQUIRE(f.witness.has_value());
    CHECK(f.witness->extra["row"] == 5);
    CHECK(f.witness->expected != f.witness->actual);
    CHECK_THROWS_AS(check_recurrence(bad), StructuralError);
}

TEST_CASE("u_gamma_row") {
    for (Side s : {Side::xi, Side::zeta}) {
        for (std::int64_t i = 0; i <= 2; ++i) CHECK(u_gamma_row(table(s), i, 300).ok());
    }
    const auto x = base_series(Side::zeta, 60);
    CHECK(first_difference(u3(gamma_series(Side::zeta, 60)), P({1, -3, 3}).eval_series(x)) ==
          std::nullopt);
}

TEST_CASE("newton scaffolding on both sides") {
    const auto a = newton_check(Side::xi, 300);
    CHECK(a.ok());
    CHECK(newton_check(Side::zeta, 300).ok());
    CHECK_THROWS_AS(newton_check(Side::xi, 100), UsageError);
}

TEST_CASE("valuation examples and bounds") {
    const auto& t = table(Side::xi);
    CHECK(nu3(t.row(2).coeff(minimal_degree(2))) == Nu3(0));
    CHECK(t.row(2).coeff(4) == 45);
    CHECK(nu3(t.row(2).coeff(4)) == Nu3(2));
    for (Side s : {Side::xi, Side::zeta}) {
        const auto rep = valuation_check(table(s), 60);
        CHECK(rep.ok());
        CHECK(rep.last == 60);
        CHECK(min_degree_check(table(s), 60).ok());
    }
}

TEST_CASE("valuation failures are reported, not thrown") {
    ModEqTable bad = table(Side::xi);
    std::vector<BigInt> c(bad.rows[7].coeffs().begin(), bad.rows[7].coeffs().end());
    c[3] = 3;                  // leading entry becomes divisible by 3
    c[5] += 1;                 // j = 2 needs nu >= 1
    bad.rows[7] = IntPoly(c);
    const auto rep = valuation_check(bad, 10);
    REQUIRE(rep.failures.size() == 2);
    CHECK(rep.failures[0].check == "leading-unit");
    CHECK(rep.failures[0].row == 7);
    CHECK(rep.failures[1].check == "lower-bound");
    CHECK(rep.failures[1].index == 5);
    CHECK(to_json(rep.failures[1])["required"] == 1);

    c[3] = 0;
    bad.rows[7] = IntPoly(c);
    const auto zero_lead = valuation_check(bad, 10);
    CHECK(zero_lead.failures.front().observed.is_infinite());
    CHECK_FALSE(min_degree_check(bad, 10).ok());
}

TEST_CASE("xi and zeta tables coincide") {
    CHECK(cross_side_check(table(Side::xi), table(Side::zeta), 60).ok());
    ModEqTable bad = table(Side::zeta);
    bad.rows[9] = bad.rows[9] + IntPoly::monomial(3, 10);
    const auto c = cross_side_check(table(Side::xi), bad, 60);
    CHECK(c.status == Status::fail);
    CHECK(c.witness->location["i"] == 9);
    CHECK(c.witness->location["j"] == 10);
}

TEST_CASE("table json and cache") {
    const auto& t = table(Side::zeta);
    const auto j = to_json(t);
    CHECK(j["side"] == "zeta");
    CHECK(j["max_i"] == 60);
    CHECK(j["rows"].size() == 60);
    CHECK(j["rows"][0]["i"] == 1);
    CHECK(j["rows"][0]["coeffs"] == nlohmann::json({"0", "1", "-3", "3"}));
    const auto back = table_from_json(j);
    CHECK(back.rows == t.rows);
    CHECK_THROWS_AS(table_from_json(nlohmann::json{{"side", "xi"}}), StructuralError);

    const auto dir = fresh_dir("cache");
    const auto built = load_or_build_table(Side::xi, 20, dir);
    const auto path = table_cache_path(dir, Side::xi, 20);
    REQUIRE(std::filesystem::exists(path));
    CHECK(load_or_build_table(Side::xi, 20, dir).rows == built.rows);

    {  // a tampered row is rejected and the file is rebuilt
        auto doc = to_json(built);
        doc["rows"][8]["coeffs"][4] = "1";
        std::ofstream(path) << doc.dump();
    }
    CHECK(load_or_build_table(Side::xi, 20, dir).rows == built.rows);
    CHECK(table_from_json(nlohmann::json::parse(std::ifstream(path))).rows == built.rows);

    std::ofstream(path) << "{not json";
    CHECK(load_or_build_table(Side::xi, 20, dir).rows == built.rows);
    CHECK_THROWS_AS(load_or_build_table(Side::xi, 2, dir), UsageError);
    std::filesystem::remove_all(dir);
}

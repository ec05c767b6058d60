#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "q3/bigint.hpp"
#include "q3/errors.hpp"

using namespace q3;

TEST_CASE("decimal round trip") {
    for (const char* s : {"0", "1", "-1", "123456789012345678901234567890", "-98765432109876543210"})
        CHECK(to_decimal(from_decimal(s)) == s);
}

TEST_CASE("strict decimal parser") {
    for (const char* s : {"", "-", "+1", "1.0", " 1", "1 ", "0x10", "1e5", "--1", "12a"})
        CHECK_THROWS_AS(from_decimal(s), UsageError);
}

TEST_CASE("elided rendering keeps short numbers") {
    CHECK(elide_decimal(BigInt(12345), 40) == "12345");
    BigInt big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 100);
    const std::string e = elide_decimal(big, 20);
    CHECK(e.find("...") != std::string::npos);
    CHECK(e.find("(101 digits)") != std::string::npos);
    CHECK(decimal_digits(big) == 101);
    CHECK(decimal_digits(BigInt(-999)) == 3);
    CHECK(decimal_digits(BigInt(0)) == 1);
}

TEST_CASE("nu3 agrees with repeated division") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        BigInt x = oracle::random_bigint(rng, 300);
        const int k = static_cast<int>(rng() % 40);
        x *= pow3(static_cast<unsigned>(k));
        const int want = oracle::nu3_by_division(x);
        const Nu3 got = nu3(x);
        if (want < 0) {
            CHECK(got.is_infinite());
        } else {
            CHECK(got.value() == want);
            CHECK(divisible_by_pow3(x, static_cast<unsigned>(want)));
            CHECK_FALSE(divisible_by_pow3(x, static_cast<unsigned>(want + 1)));
        }
    }
}

TEST_CASE("nu3 of zero is infinite and dominates finite bounds") {
    const Nu3 z = nu3(BigInt(0));
    CHECK(z.is_infinite());
    CHECK(z.at_least(1000000));
    CHECK_FALSE(z.is_zero());
    CHECK(z.to_string() == "inf");
    CHECK(Nu3(5) < z);
    CHECK_FALSE(z < Nu3(5));
    CHECK_THROWS_AS(z.value(), UsageError);
    CHECK(divisible_by_pow3(BigInt(0), 100000));
}

TEST_CASE("nu3 small values") {
    CHECK(nu3(BigInt(-2)).value() == 0);
    CHECK(nu3(BigInt(45)).value() == 2);
    CHECK(nu3(BigInt(54)).value() == 3);
    CHECK(nu3(BigInt(34506)).value() == 5);
    CHECK(nu3(BigInt(129140163)).value() == 17);
}

TEST_CASE("powers of three above the cache") {
    BigInt want;
    mpz_ui_pow_ui(want.get_mpz_t(), 3, 5000);
    CHECK(pow3(5000) == want);
    CHECK(divisible_by_pow3(want, 5000));
    CHECK_FALSE(divisible_by_pow3(want, 5001));
    CHECK(pow3(0) == 1);
    CHECK(pow3(4) == 81);
}

TEST_CASE("max bit length") {
    std::vector<BigInt> v = {BigInt(0), BigInt(-8), BigInt(3)};
    CHECK(max_bit_length(v) == 4);
    std::vector<BigInt> zeros(3);
    CHECK(max_bit_length(zeros) == 0);
}

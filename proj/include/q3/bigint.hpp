#ifndef Q3_BIGINT_HPP
#define Q3_BIGINT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace q3 {

using BigInt = mpz_class;

std::string to_decimal(const BigInt& x);

// Strict parser: optional leading '-', then decimal digits only.
BigInt from_decimal(std::string_view text);

// Decimal rendering for humans: long numbers become "head...tail (N digits)".
std::string elide_decimal(const BigInt& x, std::size_t max_digits = 40);

std::size_t decimal_digits(const BigInt& x);

// 3^e, cached for small e.
const BigInt& pow3(unsigned e);

// 3-adic valuation with nu(0) = infinity.
class Nu3 {
public:
    explicit constexpr Nu3(std::int64_t value) : value_(value) {}
    static constexpr Nu3 infinity() { return Nu3(); }

    constexpr bool is_infinite() const { return infinite_; }
    std::int64_t value() const;

    constexpr bool at_least(std::int64_t bound) const { return infinite_ || value_ >= bound; }
    constexpr bool is_zero() const { return !infinite_ && value_ == 0; }

    std::string to_string() const;

    friend constexpr bool operator==(const Nu3& a, const Nu3& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr bool operator<(const Nu3& a, const Nu3& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }

private:
    constexpr Nu3() : value_(0), infinite_(true) {}
    std::int64_t value_;
    bool infinite_ = false;
};

Nu3 nu3(const BigInt& x);

// True iff 3^e divides x (always true for x = 0).
bool divisible_by_pow3(const BigInt& x, unsigned e);

std::size_t max_bit_length(std::span<const BigInt> xs);

}  // namespace q3

#endif

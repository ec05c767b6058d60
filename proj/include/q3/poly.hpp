#ifndef Q3_POLY_HPP
#define Q3_POLY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "q3/bigint.hpp"
#include "q3/series.hpp"

namespace q3 {

// Dense integer polynomial, coefficient of x^k at index k, no trailing zeros.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs);
    static IntPoly constant(const BigInt& c);
    static IntPoly monomial(const BigInt& c, std::int64_t k);

    // -1 for the zero polynomial.
    std::int64_t degree() const noexcept { return static_cast<std::int64_t>(c_.size()) - 1; }
    // Smallest k with a nonzero coefficient; UsageError for zero.
    std::int64_t min_degree() const;
    bool is_zero() const noexcept { return c_.empty(); }

    BigInt coeff(std::int64_t k) const;
    std::span<const BigInt> coeffs() const noexcept { return c_; }

    // Multiplication by x^k.
    IntPoly shift_up(std::int64_t k) const;
    // Division by x^k; StructuralError if a dropped coefficient is nonzero.
    IntPoly shift_down(std::int64_t k) const;

    // p(x) at a series x; horizon is that of x times powers (Horner).
    LaurentSeries eval_series(const LaurentSeries& x) const;

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void trim();
    std::vector<BigInt> c_;
};

IntPoly operator-(const IntPoly& a);
IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const BigInt& k, const IntPoly& a);

nlohmann::json to_json(const IntPoly& p);
IntPoly poly_from_json(const nlohmann::json& j);

}  // namespace q3

#endif

#ifndef Q3_SERIES_HPP
#define Q3_SERIES_HPP

// Truncated Laurent series  sum_{n >= v} a_n q^n + O(q^P)  over exact integers.
//
// Every value carries its horizon P: coefficients at exponents >= P are unknown,
// not zero.  Operations propagate the horizon that is guaranteed correct:
//   add/sub : min(P_a, P_b)
//   mul     : min(P_a + v_b, P_b + v_a)    (v of a zero series is taken as P)
//   invert  : P_a - 2 v_a
//   dilate  : t (P_a - 1) + 1
//   u3      : ceil(P_a / 3)

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "q3/bigint.hpp"

namespace q3 {

inline constexpr std::int64_t kDefaultMaxHorizon = 200000;

class LaurentSeries {
public:
    // The zero series known to precision 0.
    LaurentSeries() = default;

    static LaurentSeries zero(std::int64_t precision);
    static LaurentSeries constant(const BigInt& c, std::int64_t precision);
    static LaurentSeries monomial(const BigInt& c, std::int64_t exponent, std::int64_t precision);
    // coeffs[k] is the coefficient of q^(valuation + k); missing tail entries are zero.
    static LaurentSeries from_coeffs(std::int64_t valuation, std::vector<BigInt> coeffs,
                                     std::int64_t precision);

    std::int64_t valuation() const noexcept { return val_; }
    std::int64_t precision() const noexcept { return prec_; }
    bool is_zero() const noexcept { return c_.empty(); }

    // Lowest exponent whose coefficient may be nonzero (precision for the zero series).
    std::int64_t effective_valuation() const noexcept { return is_zero() ? prec_ : val_; }

    // Coefficient of q^e; throws PrecisionError for e >= precision().
    BigInt coeff(std::int64_t e) const;

    // Dense block for exponents valuation() .. precision()-1.
    std::span<const BigInt> coeffs() const noexcept { return c_; }

    LaurentSeries truncated(std::int64_t precision) const;
    // Multiplication by q^k.
    LaurentSeries shifted(std::int64_t k) const;

    friend bool operator==(const LaurentSeries&, const LaurentSeries&) = default;

private:
    void normalize();

    std::int64_t val_ = 0;
    std::int64_t prec_ = 0;
    std::vector<BigInt> c_;
};

LaurentSeries operator-(const LaurentSeries& a);
LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(const BigInt& k, const LaurentSeries& a);

// Adds a constant without touching the horizon.
LaurentSeries add_constant(const LaurentSeries& a, const BigInt& c);

LaurentSeries pow(const LaurentSeries& a, unsigned e);

// Requires a unit leading coefficient; throws IntegralityError otherwise.
LaurentSeries invert(const LaurentSeries& a);

// q -> q^t.  Throws PrecisionError when the result horizon would exceed max_horizon.
LaurentSeries dilate(const LaurentSeries& a, std::int64_t t,
                     std::int64_t max_horizon = kDefaultMaxHorizon);

// Degree-3 unitizing operator: sum a_n q^n -> sum a_{3n} q^n.
LaurentSeries u3(const LaurentSeries& a);

// First exponent below the shared horizon where a and b differ.
std::optional<std::int64_t> first_difference(const LaurentSeries& a, const LaurentSeries& b);

// Throws CertificationError at the first differing exponent below the shared horizon,
// and PrecisionError if that horizon is below min_horizon.
void require_series_equal(const LaurentSeries& expected, const LaurentSeries& actual,
                          const std::string& what, std::int64_t min_horizon = 1);

// Divides every coefficient by k, throwing IntegralityError if any division is inexact.
LaurentSeries divide_exact(const LaurentSeries& a, const BigInt& k);

// ---------------------------------------------------------------- constructors

// (q^delta; q^delta)_inf^r + O(q^prec).
LaurentSeries pochhammer_power(std::int64_t delta, std::int64_t r, std::int64_t prec);

struct ThetaArg {
    int sign = 1;            // +1 or -1
    std::int64_t power = 1;  // the argument is sign * q^power
};

// Ramanujan's f(a, b) = sum_k a^{k(k+1)/2} b^{k(k-1)/2} at monomial arguments.
LaurentSeries theta_f(ThetaArg a, ThetaArg b, std::int64_t prec);

// phi(sign q^t) and psi(q^t).
LaurentSeries phi_series(int sign, std::int64_t t, std::int64_t prec);
LaurentSeries psi_series(std::int64_t t, std::int64_t prec);

enum class NamedSeries { phi_neg, psi, F, G, xi, zeta, gamma, delta };

NamedSeries parse_named_series(std::string_view name);
std::string_view to_string(NamedSeries s);

// Every named series is returned with horizon exactly prec.
LaurentSeries named_series(NamedSeries name, std::int64_t prec);

// ---------------------------------------------------------------- cyclotomic

// Coefficients a + b w with w^2 = -1 - w, stored as two integer series.
class CycloSeries {
public:
    CycloSeries() = default;
    CycloSeries(LaurentSeries real, LaurentSeries omega);
    static CycloSeries embed(const LaurentSeries& a);

    const LaurentSeries& real() const noexcept { return re_; }
    const LaurentSeries& omega() const noexcept { return om_; }
    std::int64_t precision() const noexcept { return re_.precision(); }
    // True when every omega-component below the horizon vanishes.
    bool is_real() const noexcept { return om_.is_zero(); }

    friend bool operator==(const CycloSeries&, const CycloSeries&) = default;

private:
    LaurentSeries re_;
    LaurentSeries om_;
};

CycloSeries operator+(const CycloSeries& a, const CycloSeries& b);
CycloSeries operator-(const CycloSeries& a, const CycloSeries& b);
CycloSeries operator*(const CycloSeries& a, const CycloSeries& b);
CycloSeries divide_exact(const CycloSeries& a, const BigInt& k);

// f(w^k q): coefficient of q^n becomes a_n w^{kn mod 3}.
CycloSeries twist(const LaurentSeries& a, int k);

// ---------------------------------------------------------------- serialization

nlohmann::json to_json(const LaurentSeries& s);
LaurentSeries series_from_json(const nlohmann::json& j);

}  // namespace q3

#endif

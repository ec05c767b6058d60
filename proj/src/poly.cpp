#include "q3/poly.hpp"

#include <algorithm>

#include "q3/errors.hpp"
#include "q3/kernels.hpp"

namespace q3 {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const BigInt& c) { return IntPoly({c}); }

IntPoly IntPoly::monomial(const BigInt& c, std::int64_t k) {
    if (k < 0) throw UsageError("IntPoly::monomial: negative exponent");
    std::vector<BigInt> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return IntPoly(std::move(v));
}

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::int64_t IntPoly::min_degree() const {
    if (is_zero()) throw UsageError("min_degree of the zero polynomial");
    std::size_t k = 0;
    while (c_[k] == 0) ++k;
    return static_cast<std::int64_t>(k);
}

BigInt IntPoly::coeff(std::int64_t k) const {
    if (k < 0 || k > degree()) return BigInt(0);
    return c_[static_cast<std::size_t>(k)];
}

IntPoly IntPoly::shift_up(std::int64_t k) const {
    if (k < 0) return shift_down(-k);
    if (is_zero() || k == 0) return *this;
    std::vector<BigInt> v(static_cast<std::size_t>(k));
    v.insert(v.end(), c_.begin(), c_.end());
    return IntPoly(std::move(v));
}

IntPoly IntPoly::shift_down(std::int64_t k) const {
    if (k < 0) return shift_up(-k);
    if (is_zero() || k == 0) return *this;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(k), c_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (c_[i] != 0)
            throw StructuralError("shift_down by " + std::to_string(k) +
                                  " drops nonzero coefficient of x^" + std::to_string(i));
    return IntPoly(std::vector<BigInt>(c_.begin() + static_cast<std::ptrdiff_t>(n), c_.end()));
}

LaurentSeries IntPoly::eval_series(const LaurentSeries& x) const {
    const std::int64_t prec = x.precision();
    if (is_zero()) return LaurentSeries::zero(prec);
    LaurentSeries acc = LaurentSeries::constant(c_.back(), prec);
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = add_constant(acc * x, c_[i]);
    return acc.truncated(prec);
}

IntPoly operator-(const IntPoly& a) {
    std::vector<BigInt> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& c : v) c = -c;
    return IntPoly(std::move(v));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    const auto& big = a.coeffs().size() >= b.coeffs().size() ? a : b;
    const auto& small = a.coeffs().size() >= b.coeffs().size() ? b : a;
    std::vector<BigInt> v(big.coeffs().begin(), big.coeffs().end());
    for (std::size_t i = 0; i < small.coeffs().size(); ++i) v[i] += small.coeffs()[i];
    return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> v(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) v[i] = a.coeffs()[i];
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) v[i] -= b.coeffs()[i];
    return IntPoly(std::move(v));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    return IntPoly(kernels::mul(a.coeffs(), b.coeffs()));
}

IntPoly operator*(const BigInt& k, const IntPoly& a) {
    if (k == 0) return IntPoly();
    std::vector<BigInt> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& c : v) c *= k;
    return IntPoly(std::move(v));
}

nlohmann::json to_json(const IntPoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : p.coeffs()) arr.push_back(to_decimal(c));
    return nlohmann::json{{"coeffs", arr}};
}

IntPoly poly_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw UsageError("polynomial JSON needs a \"coeffs\" array");
    std::vector<BigInt> v;
    v.reserve(j["coeffs"].size());
    for (const auto& e : j["coeffs"]) {
        if (!e.is_string()) throw UsageError("polynomial coefficients must be decimal strings");
        v.push_back(from_decimal(e.get<std::string>()));
    }
    return IntPoly(std::move(v));
}

}  // namespace q3

#include "q3/series.hpp"

#include <algorithm>

#include "q3/errors.hpp"
#include "q3/kernels.hpp"

namespace q3 {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

LaurentSeries LaurentSeries::zero(std::int64_t precision) {
    LaurentSeries s;
    s.prec_ = precision;
    return s;
}

LaurentSeries LaurentSeries::constant(const BigInt& c, std::int64_t precision) {
    return monomial(c, 0, precision);
}

LaurentSeries LaurentSeries::monomial(const BigInt& c, std::int64_t exponent,
                                      std::int64_t precision) {
    if (exponent >= precision || c == 0) return zero(precision);
    return from_coeffs(exponent, {c}, precision);
}

LaurentSeries LaurentSeries::from_coeffs(std::int64_t valuation, std::vector<BigInt> coeffs,
                                         std::int64_t precision) {
    LaurentSeries s;
    s.val_ = valuation;
    s.prec_ = precision;
    s.c_ = std::move(coeffs);
    s.normalize();
    return s;
}

void LaurentSeries::normalize() {
    if (prec_ <= val_) {
        c_.clear();
        val_ = 0;
        return;
    }
    const auto span = static_cast<std::size_t>(prec_ - val_);
    if (c_.size() > span) c_.resize(span);
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        val_ = 0;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_ += static_cast<std::int64_t>(lead);
    }
    c_.resize(static_cast<std::size_t>(prec_ - val_));
}

BigInt LaurentSeries::coeff(std::int64_t e) const {
    if (e >= prec_)
        throw PrecisionError("coefficient of q^" + std::to_string(e) +
                             " requested beyond horizon " + std::to_string(prec_));
    if (is_zero() || e < val_) return BigInt(0);
    return c_[static_cast<std::size_t>(e - val_)];
}

LaurentSeries LaurentSeries::truncated(std::int64_t precision) const {
    if (precision >= prec_) return *this;
    LaurentSeries s = *this;
    s.prec_ = precision;
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::shifted(std::int64_t k) const {
    LaurentSeries s = *this;
    s.prec_ += k;
    if (!s.is_zero()) s.val_ += k;
    return s;
}

LaurentSeries operator-(const LaurentSeries& a) {
    std::vector<BigInt> c(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : c) x = -x;
    return LaurentSeries::from_coeffs(a.valuation(), std::move(c), a.precision());
}

namespace {

LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
    const std::int64_t prec = std::min(a.precision(), b.precision());
    const std::int64_t lo = std::min(a.effective_valuation(), b.effective_valuation());
    if (lo >= prec) return LaurentSeries::zero(prec);
    std::vector<BigInt> c(static_cast<std::size_t>(prec - lo));
    auto place = [&](const LaurentSeries& s, bool negate) {
        if (s.is_zero()) return;
        const auto src = s.coeffs();
        const std::int64_t off = s.valuation() - lo;
        const std::int64_t n = std::min<std::int64_t>(static_cast<std::int64_t>(src.size()), prec - s.valuation());
        for (std::int64_t k = 0; k < n; ++k) {
            auto& dst = c[static_cast<std::size_t>(off + k)];
            if (negate)
                dst -= src[static_cast<std::size_t>(k)];
            else
                dst += src[static_cast<std::size_t>(k)];
        }
    };
    place(a, false);
    place(b, subtract);
    return LaurentSeries::from_coeffs(lo, std::move(c), prec);
}

}  // namespace

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    const std::int64_t prec = std::min(a.precision() + b.effective_valuation(),
                                       b.precision() + a.effective_valuation());
    if (a.is_zero() || b.is_zero()) return LaurentSeries::zero(prec);
    const std::int64_t val = a.valuation() + b.valuation();
    if (prec <= val) return LaurentSeries::zero(prec);
    auto c = kernels::mul(a.coeffs(), b.coeffs(), static_cast<std::size_t>(prec - val));
    return LaurentSeries::from_coeffs(val, std::move(c), prec);
}

LaurentSeries operator*(const BigInt& k, const LaurentSeries& a) {
    std::vector<BigInt> c(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : c) x *= k;
    return LaurentSeries::from_coeffs(a.valuation(), std::move(c), a.precision());
}

LaurentSeries add_constant(const LaurentSeries& a, const BigInt& c) {
    return a + LaurentSeries::constant(c, a.precision());
}

LaurentSeries pow(const LaurentSeries& a, unsigned e) {
    LaurentSeries result = LaurentSeries::constant(1, a.precision());
    if (e == 0) return result;
    LaurentSeries base = a;
    bool first = true;
    while (e > 0) {
        if (e & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

namespace {

// Inverse of the unit-leading block c (c[0] = +-1) to n terms.
std::vector<BigInt> invert_block_backsub(std::span<const BigInt> c, std::size_t n) {
    const long lead = c[0].get_si();
    std::vector<std::size_t> nz;
    for (std::size_t k = 1; k < std::min(c.size(), n); ++k)
        if (c[k] != 0) nz.push_back(k);
    std::vector<BigInt> d(n);
    d[0] = lead;
    BigInt acc;
    for (std::size_t m = 1; m < n; ++m) {
        acc = 0;
        for (std::size_t k : nz) {
            if (k > m) break;
            mpz_addmul(acc.get_mpz_t(), c[k].get_mpz_t(), d[m - k].get_mpz_t());
        }
        // d_m = -lead * acc, using lead^2 = 1.
        if (lead > 0)
            mpz_neg(d[m].get_mpz_t(), acc.get_mpz_t());
        else
            d[m] = acc;
    }
    return d;
}

// Newton iteration d <- d (2 - c d), doubling the number of correct terms.
std::vector<BigInt> invert_block_newton(std::span<const BigInt> c, std::size_t n) {
    std::size_t have = std::min<std::size_t>(n, 64);
    std::vector<BigInt> d = invert_block_backsub(c, have);
    while (have < n) {
        const std::size_t next = std::min(2 * have, n);
        auto cd = kernels::mul(c.first(std::min(c.size(), next)), d, next);
        cd.resize(next);
        for (auto& x : cd) x = -x;
        cd[0] += 2;
        d = kernels::mul(d, cd, next);
        d.resize(next);
        have = next;
    }
    return d;
}

}  // namespace

LaurentSeries invert(const LaurentSeries& a) {
    if (a.is_zero()) throw IntegralityError("cannot invert a series with no known nonzero term");
    const BigInt& lead = a.coeffs()[0];
    if (lead != 1 && lead != -1)
        throw IntegralityError("inverse leaves the integers: leading coefficient " +
                               elide_decimal(lead));
    const std::int64_t v = a.valuation();
    const auto rel = static_cast<std::size_t>(a.precision() - v);
    const auto c = a.coeffs();
    const std::size_t nnz = kernels::count_nonzero(c);
    std::vector<BigInt> d = (nnz <= 64 || rel <= 256) ? invert_block_backsub(c, rel)
                                                      : invert_block_newton(c, rel);
    return LaurentSeries::from_coeffs(-v, std::move(d), a.precision() - 2 * v);
}

LaurentSeries dilate(const LaurentSeries& a, std::int64_t t, std::int64_t max_horizon) {
    if (t < 1) throw UsageError("dilation factor must be positive");
    const std::int64_t prec = t * (a.precision() - 1) + 1;
    if (prec > max_horizon)
        throw PrecisionError("dilation by " + std::to_string(t) + " needs horizon " +
                             std::to_string(prec) + " > cap " + std::to_string(max_horizon));
    if (a.is_zero()) return LaurentSeries::zero(prec);
    const std::int64_t val = t * a.valuation();
    if (prec <= val) return LaurentSeries::zero(prec);
    std::vector<BigInt> c(static_cast<std::size_t>(prec - val));
    const auto src = a.coeffs();
    for (std::size_t k = 0; k < src.size(); ++k) {
        const auto pos = static_cast<std::size_t>(t) * k;
        if (pos >= c.size()) break;
        c[pos] = src[k];
    }
    return LaurentSeries::from_coeffs(val, std::move(c), prec);
}

LaurentSeries u3(const LaurentSeries& a) {
    const std::int64_t prec = ceil_div(a.precision(), 3);
    if (a.is_zero()) return LaurentSeries::zero(prec);
    const std::int64_t val = ceil_div(a.valuation(), 3);
    if (prec <= val) return LaurentSeries::zero(prec);
    std::vector<BigInt> c(static_cast<std::size_t>(prec - val));
    for (std::int64_t n = val; n < prec; ++n) {
        c[static_cast<std::size_t>(n - val)] = a.coeffs()[static_cast<std::size_t>(3 * n - a.valuation())];
    }
    return LaurentSeries::from_coeffs(val, std::move(c), prec);
}

std::optional<std::int64_t> first_difference(const LaurentSeries& a, const LaurentSeries& b) {
    const std::int64_t h = std::min(a.precision(), b.precision());
    const std::int64_t lo = std::min(a.effective_valuation(), b.effective_valuation());
    for (std::int64_t e = lo; e < h; ++e) {
        if (a.coeff(e) != b.coeff(e)) return e;
    }
    return std::nullopt;
}

void require_series_equal(const LaurentSeries& expected, const LaurentSeries& actual,
                          const std::string& what, std::int64_t min_horizon) {
    const std::int64_t h = std::min(expected.precision(), actual.precision());
    if (h < min_horizon)
        throw PrecisionError(what + ": shared horizon " + std::to_string(h) + " is below " +
                             std::to_string(min_horizon));
    if (auto e = first_difference(expected, actual))
        throw CertificationError(what, *e, to_decimal(expected.coeff(*e)),
                                 to_decimal(actual.coeff(*e)));
}

LaurentSeries divide_exact(const LaurentSeries& a, const BigInt& k) {
    if (k == 0) throw UsageError("division by zero");
    std::vector<BigInt> c(a.coeffs().begin(), a.coeffs().end());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!mpz_divisible_p(c[i].get_mpz_t(), k.get_mpz_t()))
            throw IntegralityError("coefficient of q^" +
                                   std::to_string(a.valuation() + static_cast<std::int64_t>(i)) +
                                   " is not divisible by " + to_decimal(k));
        mpz_divexact(c[i].get_mpz_t(), c[i].get_mpz_t(), k.get_mpz_t());
    }
    return LaurentSeries::from_coeffs(a.valuation(), std::move(c), a.precision());
}

nlohmann::json to_json(const LaurentSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : s.coeffs()) coeffs.push_back(to_decimal(c));
    return {{"valuation", s.valuation()}, {"precision", s.precision()}, {"coeffs", std::move(coeffs)}};
}

LaurentSeries series_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("valuation") || !j.contains("precision") ||
        !j.contains("coeffs"))
        throw UsageError("series JSON must have valuation, precision and coeffs");
    if (!j["valuation"].is_number_integer() || !j["precision"].is_number_integer() ||
        !j["coeffs"].is_array())
        throw UsageError("series JSON has fields of the wrong type");
    std::vector<BigInt> c;
    c.reserve(j["coeffs"].size());
    for (const auto& x : j["coeffs"]) {
        if (!x.is_string()) throw UsageError("series coefficients must be decimal strings");
        c.push_back(from_decimal(x.get<std::string>()));
    }
    const auto val = j["valuation"].get<std::int64_t>();
    const auto prec = j["precision"].get<std::int64_t>();
    if (static_cast<std::int64_t>(c.size()) > std::max<std::int64_t>(prec - val, 0))
        throw UsageError("series JSON lists coefficients beyond its precision");
    return LaurentSeries::from_coeffs(val, std::move(c), prec);
}

}  // namespace q3

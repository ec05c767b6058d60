#include <algorithm>

#include "q3/errors.hpp"
#include "q3/series.hpp"

namespace q3 {

CycloSeries::CycloSeries(LaurentSeries real, LaurentSeries omega) {
    const std::int64_t p = std::min(real.precision(), omega.precision());
    re_ = real.truncated(p);
    om_ = omega.truncated(p);
}

CycloSeries CycloSeries::embed(const LaurentSeries& a) {
    return CycloSeries(a, LaurentSeries::zero(a.precision()));
}

CycloSeries operator+(const CycloSeries& a, const CycloSeries& b) {
    return CycloSeries(a.real() + b.real(), a.omega() + b.omega());
}

CycloSeries operator-(const CycloSeries& a, const CycloSeries& b) {
    return CycloSeries(a.real() - b.real(), a.omega() - b.omega());
}

// (a + b w)(c + d w) = (ac - bd) + (ad + bc - bd) w, since w^2 = -1 - w.
CycloSeries operator*(const CycloSeries& x, const CycloSeries& y) {
    const LaurentSeries ac = x.real() * y.real();
    const LaurentSeries bd = x.omega() * y.omega();
    const LaurentSeries cross = (x.real() + x.omega()) * (y.real() + y.omega());
    return CycloSeries(ac - bd, cross - ac - bd - bd);
}

CycloSeries divide_exact(const CycloSeries& a, const BigInt& k) {
    return CycloSeries(divide_exact(a.real(), k), divide_exact(a.omega(), k));
}

CycloSeries twist(const LaurentSeries& a, int k) {
    if (k < 0 || k > 2) throw UsageError("twist: k must be 0, 1 or 2");
    const std::int64_t prec = a.precision();
    if (a.is_zero()) return CycloSeries::embed(a);
    const std::int64_t v = a.valuation();
    const auto src = a.coeffs();
    std::vector<BigInt> re(src.size()), om(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const std::int64_t n = v + static_cast<std::int64_t>(i);
        const std::int64_t r = ((k * n) % 3 + 3) % 3;
        if (r == 0) {
            re[i] = src[i];
        } else if (r == 1) {
            om[i] = src[i];
        } else {
            re[i] = -src[i];
            om[i] = -src[i];
        }
    }
    return CycloSeries(LaurentSeries::from_coeffs(v, std::move(re), prec),
                       LaurentSeries::from_coeffs(v, std::move(om), prec));
}

}  // namespace q3

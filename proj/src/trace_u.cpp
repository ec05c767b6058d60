#include "q3/trace_u.hpp"

#include <bit>
#include <map>

#include "q3/errors.hpp"

namespace q3 {
namespace {

constexpr std::size_t kBaseCase = 32;

class PowerCache {
public:
    explicit PowerCache(IntPoly base) { cache_.emplace(1, std::move(base)); }

    const IntPoly& get(std::int64_t k) {
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        if (k == 0) return cache_.emplace(0, IntPoly::constant(1)).first->second;
        const std::int64_t hi = std::int64_t{1} << (std::bit_width(static_cast<std::uint64_t>(k)) - 1);
        IntPoly r = (hi == k) ? get(k / 2) * get(k / 2) : get(hi) * get(k - hi);
        return cache_.emplace(k, std::move(r)).first->second;
    }

private:
    std::map<std::int64_t, IntPoly> cache_;
};

IntPoly reflect_block(std::span<const BigInt> c, PowerCache& one_minus_t) {
    if (c.size() <= kBaseCase) {
        // Horner in u = 1 - t.
        IntPoly u({BigInt(1), BigInt(-1)});
        IntPoly acc;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + IntPoly::constant(c[i]);
        return acc;
    }
    const std::size_t h = std::bit_floor(c.size() - 1);
    IntPoly lo = reflect_block(c.subspan(0, h), one_minus_t);
    IntPoly hi = reflect_block(c.subspan(h), one_minus_t);
    return lo + one_minus_t.get(static_cast<std::int64_t>(h)) * hi;
}

IntPoly compose_block(std::span<const BigInt> c, PowerCache& pb, const IntPoly& b) {
    if (c.size() <= kBaseCase) {
        IntPoly acc;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * b + IntPoly::constant(c[i]);
        return acc;
    }
    const std::size_t h = std::bit_floor(c.size() - 1);
    IntPoly lo = compose_block(c.subspan(0, h), pb, b);
    IntPoly hi = compose_block(c.subspan(h), pb, b);
    return lo + pb.get(static_cast<std::int64_t>(h)) * hi;
}

}  // namespace

IntPoly compose(const IntPoly& p, const IntPoly& b) {
    if (p.is_zero()) return p;
    PowerCache pb(b);
    return compose_block(p.coeffs(), pb, b);
}

IntPoly reflect_one_minus(const IntPoly& p) {
    if (p.is_zero()) return p;
    PowerCache one_minus_t(IntPoly({BigInt(1), BigInt(-1)}));
    return reflect_block(p.coeffs(), one_minus_t);
}

IntPoly trinomial_power(std::int64_t n) {
    if (n < 0) throw UsageError("trinomial_power: negative exponent");
    std::vector<BigInt> t(static_cast<std::size_t>(2 * n + 1));
    t[0] = 1;
    if (n > 0) t[1] = n;
    for (std::int64_t k = 2; k <= 2 * n; ++k) {
        BigInt v = BigInt(n - k + 1) * t[static_cast<std::size_t>(k - 1)] +
                   BigInt(2 * n - k + 2) * t[static_cast<std::size_t>(k - 2)];
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(k));
        t[static_cast<std::size_t>(k)] = std::move(v);
    }
    return IntPoly(std::move(t));
}

TraceU::TraceU(IntPoly a_poly) : a_(std::move(a_poly)) {
    if (a_.degree() < 1) throw UsageError("TraceU needs a nonconstant first row");
}

IntPoly TraceU::apply(const IntPoly& p) const {
    if (p.is_zero()) return p;
    const std::int64_t n = p.degree();
    std::vector<BigInt> rev(p.coeffs().rbegin(), p.coeffs().rend());
    const IntPoly reflected = reflect_one_minus(IntPoly(std::move(rev)));
    const IntPoly full = reflected * trinomial_power(n);
    std::vector<BigInt> n0(static_cast<std::size_t>(n) + 1);
    for (std::int64_t j = 0; j <= n; ++j) n0[static_cast<std::size_t>(j)] = full.coeff(3 * j);
    // sum_j n0_j (A-1)^j A^(n-j) = A^n R(1/A) with R(s) = sum_j n0_j (1-s)^j.
    const IntPoly r = reflect_one_minus(IntPoly(std::move(n0)));
    std::vector<BigInt> q(static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= r.degree(); ++k)
        q[static_cast<std::size_t>(n - k)] = r.coeffs()[static_cast<std::size_t>(k)];
    return compose(IntPoly(std::move(q)), a_);
}

IntPoly TraceU::apply_gamma(const IntPoly& p) const {
    return apply(p.shift_up(1)).shift_down(1);
}

}  // namespace q3

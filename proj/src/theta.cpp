#include <string>

#include "q3/errors.hpp"
#include "q3/series.hpp"

namespace q3 {

LaurentSeries pochhammer_power(std::int64_t delta, std::int64_t r, std::int64_t prec) {
    if (delta < 1) throw UsageError("pochhammer_power: delta must be positive");
    if (prec < 1) throw UsageError("pochhammer_power: precision must be positive");
    if (r == 0) return LaurentSeries::constant(1, prec);

    // Euler: (q;q)_inf = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers.
    std::vector<BigInt> c(static_cast<std::size_t>(prec));
    c[0] = 1;
    for (std::int64_t k = 1;; ++k) {
        const std::int64_t e1 = delta * (k * (3 * k - 1) / 2);
        const std::int64_t e2 = delta * (k * (3 * k + 1) / 2);
        if (e1 >= prec) break;
        const int sign = (k % 2 == 0) ? 1 : -1;
        c[static_cast<std::size_t>(e1)] += sign;
        if (e2 < prec) c[static_cast<std::size_t>(e2)] += sign;
    }
    const LaurentSeries base = LaurentSeries::from_coeffs(0, std::move(c), prec);
    const auto mag = static_cast<unsigned>(r < 0 ? -r : r);
    LaurentSeries p = pow(base, mag);
    return r < 0 ? invert(p) : p;
}

LaurentSeries theta_f(ThetaArg a, ThetaArg b, std::int64_t prec) {
    if ((a.sign != 1 && a.sign != -1) || (b.sign != 1 && b.sign != -1))
        throw UsageError("theta_f: signs must be +1 or -1");
    if (a.power < 0 || b.power < 0) throw UsageError("theta_f: powers must be nonnegative");
    if (a.power + b.power < 1) throw UsageError("theta_f: needs |ab| < 1, i.e. s + t >= 1");
    if (prec < 1) throw UsageError("theta_f: precision must be positive");

    std::vector<BigInt> c(static_cast<std::size_t>(prec));
    auto add_term = [&](std::int64_t k) {
        const std::int64_t ta = k * (k + 1) / 2;  // exponent of a
        const std::int64_t tb = k * (k - 1) / 2;  // exponent of b
        const std::int64_t e = a.power * ta + b.power * tb;
        if (e >= prec) return false;
        int sign = 1;
        if (a.sign < 0 && (ta % 2 != 0)) sign = -sign;
        if (b.sign < 0 && (tb % 2 != 0)) sign = -sign;
        c[static_cast<std::size_t>(e)] += sign;
        return true;
    };
    // The exponent is nondecreasing in |k| on each side of 0.
    for (std::int64_t k = 0; add_term(k); ++k) {
    }
    for (std::int64_t k = -1; add_term(k); --k) {
    }
    return LaurentSeries::from_coeffs(0, std::move(c), prec);
}

LaurentSeries phi_series(int sign, std::int64_t t, std::int64_t prec) {
    return theta_f({sign, t}, {sign, t}, prec);
}

LaurentSeries psi_series(std::int64_t t, std::int64_t prec) {
    return theta_f({1, t}, {1, 3 * t}, prec);
}

NamedSeries parse_named_series(std::string_view name) {
    if (name == "phi_neg") return NamedSeries::phi_neg;
    if (name == "psi") return NamedSeries::psi;
    if (name == "F") return NamedSeries::F;
    if (name == "G") return NamedSeries::G;
    if (name == "xi") return NamedSeries::xi;
    if (name == "zeta") return NamedSeries::zeta;
    if (name == "gamma") return NamedSeries::gamma;
    if (name == "delta") return NamedSeries::delta;
    throw UsageError("unknown series name: " + std::string(name));
}

std::string_view to_string(NamedSeries s) {
    switch (s) {
        case NamedSeries::phi_neg: return "phi_neg";
        case NamedSeries::psi: return "psi";
        case NamedSeries::F: return "F";
        case NamedSeries::G: return "G";
        case NamedSeries::xi: return "xi";
        case NamedSeries::zeta: return "zeta";
        case NamedSeries::gamma: return "gamma";
        case NamedSeries::delta: return "delta";
    }
    return "?";
}

namespace {

// phi(-q^{3t}) / phi(-q^t)
LaurentSeries f_ratio(std::int64_t t, std::int64_t prec) {
    return phi_series(-1, 3 * t, prec) * invert(phi_series(-1, t, prec));
}

// psi(q^{3t}) / psi(q^t)
LaurentSeries g_ratio(std::int64_t t, std::int64_t prec) {
    return psi_series(3 * t, prec) * invert(psi_series(t, prec));
}

}  // namespace

LaurentSeries named_series(NamedSeries name, std::int64_t prec) {
    if (prec < 1) throw UsageError("named_series: precision must be positive");
    switch (name) {
        case NamedSeries::phi_neg: return phi_series(-1, 1, prec);
        case NamedSeries::psi: return psi_series(1, prec);
        case NamedSeries::F: return f_ratio(1, prec);
        case NamedSeries::G: return g_ratio(1, prec);
        case NamedSeries::xi: return phi_series(-1, 9, prec) * invert(phi_series(-1, 1, prec));
        case NamedSeries::zeta: {
            if (prec == 1) return LaurentSeries::zero(1);
            const auto r = psi_series(9, prec - 1) * invert(psi_series(1, prec - 1));
            return r.shifted(1);
        }
        case NamedSeries::gamma: return f_ratio(1, prec) * invert(f_ratio(9, prec));
        case NamedSeries::delta: {
            const auto r = g_ratio(1, prec + 2) * invert(g_ratio(9, prec + 2));
            return r.shifted(-2);
        }
    }
    throw UsageError("unknown series");
}

}  // namespace q3

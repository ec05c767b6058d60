#include "q3/errors.hpp"
#include "q3/modeq.hpp"

namespace q3 {
namespace {

Witness omega_witness(const std::string& what, const LaurentSeries& om) {
    return Witness{"exponent", om.valuation(), "0", to_decimal(om.coeffs()[0]),
                   {{"check", what}}};
}

}  // namespace

// With x_k = x(w^k q):
//   e1 = e2 = 3 A(x(q^3)),  e3 = A(x(q^3)),  x_0^j + x_1^j + x_2^j = 3 X_j(x(q^3)),
// and x(q) is a root of y^3 - e1 y^2 + e2 y - e3.
Certificate newton_check(Side side, std::int64_t prec) {
    if (prec < 180) throw UsageError("newton_check: precision must be at least 180");
    nlohmann::json params = {{"side", to_string(side)}, {"prec", prec}};
    const std::string id = "vieta-symmetric-functions";
    const std::string note = "identities checked through q^" + std::to_string(prec - 3) +
                             " (q^3-horizon " + std::to_string((prec - 2) / 3) +
                             "); finite-order consistency check";

    const auto rows = published_base_rows();
    const IntPoly& a_row = rows[0];
    const LaurentSeries x = base_series(side, prec);
    const LaurentSeries x_cubed_arg = dilate(base_series(side, (prec + 2) / 3), 3);
    const LaurentSeries a3 = a_row.eval_series(x_cubed_arg);
    const LaurentSeries sigma1 = BigInt(3) * a3;
    const LaurentSeries sigma2 = sigma1;
    const LaurentSeries sigma3 = a3;

    const CycloSeries x0 = twist(x, 0), x1 = twist(x, 1), x2 = twist(x, 2);
    const CycloSeries e1 = x0 + x1 + x2;
    const CycloSeries e2 = x0 * x1 + x1 * x2 + x2 * x0;
    const CycloSeries e3 = x0 * x1 * x2;

    auto fail = [&](Witness w, std::string detail) {
        Certificate c = Certificate::failed(id, params, std::move(w));
        c.horizon_note = note;
        c.detail = std::move(detail);
        return c;
    };

    // (a) Galois invariance: no omega components.
    const std::pair<const char*, const CycloSeries*> sym[] = {{"e1", &e1}, {"e2", &e2}, {"e3", &e3}};
    for (const auto& [name, e] : sym)
        if (!e->is_real())
            return fail(omega_witness(std::string("omega part of ") + name, e->omega()),
                        std::string(name) + " has a nonzero omega component");

    try {
        // (b) the elementary symmetric functions against the sigma polynomials.
        require_series_equal(sigma1, e1.real(), "e1 = 3 A(x(q^3))", prec - 2);
        require_series_equal(sigma2, e2.real(), "e2 = 3 A(x(q^3))", prec - 2);
        require_series_equal(sigma3, e3.real(), "e3 = A(x(q^3))", prec - 2);

        // Power sums in the standard filtering normalization.
        CycloSeries p0 = x0, p1 = x1, p2 = x2;
        for (std::int64_t j = 1; j <= 3; ++j) {
            if (j > 1) {
                p0 = p0 * x0;
                p1 = p1 * x1;
                p2 = p2 * x2;
            }
            const CycloSeries s = p0 + p1 + p2;
            if (!s.is_real())
                return fail(omega_witness("omega part of power sum " + std::to_string(j), s.omega()),
                            "power sum has a nonzero omega component");
            const LaurentSeries want =
                BigInt(3) * rows[static_cast<std::size_t>(j - 1)].eval_series(x_cubed_arg);
            require_series_equal(want, s.real(), "power sum " + std::to_string(j), prec - 2);
        }

        // (c) x(q) is a root of the characteristic cubic.
        const LaurentSeries x2s = x * x;
        const LaurentSeries cubic = x2s * x - sigma1 * x2s + sigma2 * x - sigma3;
        require_series_equal(LaurentSeries::zero(cubic.precision()), cubic,
                             "x^3 - s1 x^2 + s2 x - s3 = 0", prec - 2);
    } catch (const CertificationError& e) {
        return fail(Witness{"exponent", e.exponent(), e.expected(), e.actual(), {{"check", e.what()}}},
                    e.what());
    }

    Certificate c = Certificate::passed(id, params);
    c.horizon_note = note;
    c.detail =
        "e1 = e2 = 3A, e3 = A at x(q^3); power sums equal 3 X_j(x(q^3)) (the factor 3 sits on "
        "the sum, not on X_j)";
    c.data = {{"normalization", "sum_k x(w^k q)^j = 3 X_j(x(q^3))"}};
    return c;
}

}  // namespace q3

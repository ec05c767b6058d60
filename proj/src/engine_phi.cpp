#include <algorithm>

#include "q3/engine.hpp"
#include "q3/errors.hpp"

namespace q3 {

std::string_view to_string(Family f) { return f == Family::ph3 ? "ph3" : "ps3"; }

Family parse_family(std::string_view text) {
    if (text == "ph3") return Family::ph3;
    if (text == "ps3") return Family::ps3;
    throw UsageError("unknown family: " + std::string(text) + " (expected ph3 or ps3)");
}

Side side_of(Family f) { return f == Family::ph3 ? Side::xi : Side::zeta; }

LaurentSeries generating_function(Family f, std::int64_t prec) {
    return named_series(f == Family::ph3 ? NamedSeries::F : NamedSeries::G, prec);
}

std::string_view to_string(URoute r) {
    switch (r) {
        case URoute::automatic: return "automatic";
        case URoute::table: return "table";
        case URoute::trace: return "trace";
    }
    return "automatic";
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && ((a > 0) == (b > 0))) ++q;
    return q;
}

// Lowest k >= 1 with p_k != 0, or nothing for constants.
std::optional<std::int64_t> min_positive_degree(const IntPoly& p) {
    for (std::int64_t k = 1; k <= p.degree(); ++k)
        if (p.coeffs()[static_cast<std::size_t>(k)] != 0) return k;
    return std::nullopt;
}

const IntPoly& phi_one() {
    static const IntPoly p({BigInt(1), BigInt(-3), BigInt(3)});
    return p;
}

std::pair<std::int64_t, std::int64_t> first_coefficient_difference(const IntPoly& a,
                                                                   const IntPoly& b) {
    std::int64_t j = 0;
    const std::int64_t top = std::max(a.degree(), b.degree());
    while (j <= top && a.coeff(j) == b.coeff(j)) ++j;
    return {j, top};
}

}  // namespace

IntPoly u_poly(const IntPoly& p, const ModEqTable& table) {
    if (p.is_zero()) return p;
    if (p.degree() > table.max_i())
        throw PreconditionError("u_poly: degree " + std::to_string(p.degree()) +
                                " exceeds table rows " + std::to_string(table.max_i()));
    std::vector<BigInt> acc(static_cast<std::size_t>(3 * p.degree()) + 1);
    for (std::int64_t l = 0; l <= p.degree(); ++l) {
        const BigInt& c = p.coeffs()[static_cast<std::size_t>(l)];
        if (c == 0) continue;
        const auto row = table.row(l).coeffs();
        for (std::size_t k = 0; k < row.size(); ++k)
            mpz_addmul(acc[k].get_mpz_t(), c.get_mpz_t(), row[k].get_mpz_t());
    }
    return IntPoly(std::move(acc));
}

IntPoly u_gamma_poly(const IntPoly& p, const ModEqTable& table) {
    if (p.is_zero()) return p;
    if (p.degree() + 1 > table.max_i())
        throw PreconditionError("u_gamma_poly: needs table row " + std::to_string(p.degree() + 1) +
                                ", table has " + std::to_string(table.max_i()));
    std::vector<BigInt> acc(static_cast<std::size_t>(3 * p.degree() + 2) + 1);
    for (std::int64_t l = 0; l <= p.degree(); ++l) {
        const BigInt& c = p.coeffs()[static_cast<std::size_t>(l)];
        if (c == 0) continue;
        const auto row = table.row(l + 1).coeffs();
        if (!row.empty() && row[0] != 0)
            throw StructuralError("u_gamma_poly: row " + std::to_string(l + 1) +
                                  " has a constant term; shifting would give degree -1");
        for (std::size_t k = 1; k < row.size(); ++k)
            mpz_addmul(acc[k - 1].get_mpz_t(), c.get_mpz_t(), row[k].get_mpz_t());
    }
    return IntPoly(std::move(acc));
}

UOperator::UOperator(std::shared_ptr<const ModEqTable> table, URoute route)
    : table_(std::move(table)), trace_(table_->row(1)), route_(route) {
    const IntPoly& a = table_->row(1);
    if (table_->row(2) != BigInt(3) * a * a - BigInt(2) * a)
        throw StructuralError("row 2 is not 3A^2 - 2A; the trace route would not match the table");
    if (table_->row(3) != BigInt(9) * a * a * a - BigInt(9) * a * a + a)
        throw StructuralError("row 3 is not 9A^3 - 9A^2 + A; the trace route would not match the table");
}

URoute UOperator::route_for(std::int64_t degree, bool gamma) const {
    if (route_ != URoute::automatic) return route_;
    return degree + (gamma ? 1 : 0) <= table_->max_i() ? URoute::table : URoute::trace;
}

IntPoly UOperator::u(const IntPoly& p) const {
    return route_for(p.degree(), false) == URoute::table ? u_poly(p, *table_) : trace_.apply(p);
}

IntPoly UOperator::u_gamma(const IntPoly& p) const {
    return route_for(p.degree(), true) == URoute::table ? u_gamma_poly(p, *table_)
                                                        : trace_.apply_gamma(p);
}

const IntPoly& PhiSequence::at(std::int64_t m) const {
    if (m < 1 || m > max_m())
        throw PreconditionError("Phi_" + std::to_string(m) + " not built (have 1.." +
                                std::to_string(max_m()) + ")");
    return polys[static_cast<std::size_t>(m)];
}

PhiSequence build_phi(Family family, std::int64_t m_max, const UOperator& u) {
    if (m_max < 1) throw UsageError("build_phi: M_max must be at least 1");
    if (u.side() != side_of(family))
        throw UsageError("build_phi: family " + std::string(to_string(family)) +
                         " needs the " + std::string(to_string(side_of(family))) + " table");
    PhiSequence seq;
    seq.family = family;
    seq.polys.resize(static_cast<std::size_t>(m_max) + 1);
    seq.polys[1] = phi_one();
    for (std::int64_t m = 2; m <= m_max; ++m) {
        const IntPoly& in = seq.polys[static_cast<std::size_t>(m - 1)];
        const bool even = m % 2 == 0;
        IntPoly out = even ? u.u(in) : u.u_gamma(in);
        // Minimal-degree law on the nonconstant part of the input.  The constant
        // maps to itself under U and to c Phi_1 under U(gamma .).
        if (auto low = min_positive_degree(in)) {
            const BigInt c0 = in.coeff(0);
            const IntPoly rest = even ? out - IntPoly::constant(c0) : out - c0 * phi_one();
            const std::int64_t bound = even ? ceil_div(*low, 3) : ceil_div(*low - 2, 3);
            if (!rest.is_zero() && rest.min_degree() < bound)
                throw StructuralError("Phi_" + std::to_string(m) + ": image of the nonconstant part " +
                                      "starts at degree " + std::to_string(rest.min_degree()) +
                                      ", below " + std::to_string(bound));
        }
        seq.polys[static_cast<std::size_t>(m)] = std::move(out);
    }
    return seq;
}

std::int64_t progression_offset(Family family, std::int64_t m) {
    if (m < 1) throw UsageError("progression_offset: M must be positive");
    if (family == Family::ph3) return 0;
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(m % 2 == 1 ? m + 1 : m));
    p -= 1;
    p /= 4;
    if (!p.fits_slong_p()) throw UsageError("progression_offset: offset overflows");
    return p.get_si();
}

std::int64_t progression_offset_iterated(Family family, std::int64_t m) {
    if (m < 1) throw UsageError("progression_offset_iterated: M must be positive");
    if (family == Family::ph3) return 0;
    // S_1 = U(q^-2 G); an even step keeps the offset, an odd step k adds 2 * 3^(k-1).
    std::int64_t off = 2, step = 3;
    for (std::int64_t k = 2; k <= m; ++k) {
        if (k % 2 == 1) off += 2 * step;
        step *= 3;
    }
    return off;
}

LaurentSeries iterated_series(Family family, std::int64_t m, std::int64_t prec) {
    if (m < 1) throw UsageError("iterated_series: M must be positive");
    if (prec < 1) throw UsageError("iterated_series: precision must be positive");
    std::int64_t scale = 1;
    for (std::int64_t k = 0; k < m; ++k) scale *= 3;
    LaurentSeries s = generating_function(family, (prec + 1) * scale);
    for (std::int64_t k = 1; k <= m; ++k) {
        const bool shift = family == Family::ps3 && k % 2 == 1;
        s = u3(shift ? s.shifted(-2) : s);
    }
    if (s.precision() < prec)
        throw PrecisionError("iterated_series: horizon " + std::to_string(s.precision()) +
                             " below " + std::to_string(prec));
    return s.truncated(prec);
}

Certificate verify_phi_series(const PhiSequence& seq, std::int64_t m, std::int64_t prec) {
    if (prec < 1) throw UsageError("verify_phi_series: precision must be positive");
    const IntPoly& phi = seq.at(m);
    nlohmann::json params = {{"family", to_string(seq.family)}, {"M", m}, {"prec", prec}};
    const std::string id = "phi-polynomial-matches-series";
    const std::string note = "series agreement checked through q^" + std::to_string(prec - 1) +
                             "; a finite-order consistency check, not a proof";

    const LaurentSeries x = base_series(side_of(seq.family), prec);
    const LaurentSeries gf =
        m % 2 == 1 ? dilate(generating_function(seq.family, ceil_div(prec, 3) + 1), 3)
                   : generating_function(seq.family, prec);
    try {
        require_series_equal(iterated_series(seq.family, m, prec), phi.eval_series(x) * gf,
                             "Phi_" + std::to_string(m), prec);
    } catch (const CertificationError& e) {
        Certificate c = Certificate::failed(
            id, params, Witness{"exponent", e.exponent(), e.expected(), e.actual(), {}});
        c.horizon_note = note;
        c.detail = e.what();
        return c;
    }
    Certificate c = Certificate::passed(id, params);
    c.horizon_note = note;
    c.detail = "Phi_" + std::to_string(m) + "(x) " + (m % 2 == 1 ? "F(q^3)" : "F(q)") +
               " equals sum_n c(3^" + std::to_string(m) + " n + " +
               std::to_string(progression_offset(seq.family, m)) + ") q^n";
    if (seq.family == Family::ps3) c.detail += " (G in place of F)";
    return c;
}

Certificate phi_mirror_check(const PhiSequence& ph, const PhiSequence& ps) {
    const std::int64_t top = std::min(ph.max_m(), ps.max_m());
    nlohmann::json params = {{"M_max", top}};
    for (std::int64_t m = 1; m <= top; ++m) {
        const IntPoly& a = ph.at(m);
        const IntPoly& b = ps.at(m);
        if (a == b) continue;
        const auto [j, unused] = first_coefficient_difference(a, b);
        (void)unused;
        return Certificate::failed("ph-ps-phi-sequences-identical", params,
                                   Witness{"coefficient", {{"M", m}, {"k", j}},
                                           to_decimal(a.coeff(j)), to_decimal(b.coeff(j))});
    }
    Certificate c = Certificate::passed("ph-ps-phi-sequences-identical", params);
    c.detail = "Phi_M and Psi_M coincide for M <= " + std::to_string(top);
    return c;
}

HatSequence build_hats(const PhiSequence& seq, std::int64_t m_max, const UOperator& u,
                       bool cross_check) {
    if (m_max < 1) throw UsageError("build_hats: m_max must be at least 1");
    if (seq.max_m() < 2 * m_max + 1)
        throw PreconditionError("build_hats: needs Phi through M = " + std::to_string(2 * m_max + 1));
    HatSequence h;
    h.family = seq.family;
    h.hats.resize(static_cast<std::size_t>(m_max) + 1);
    h.utilde.resize(static_cast<std::size_t>(m_max) + 1);
    for (std::int64_t m = 1; m <= m_max; ++m) {
        h.hats[static_cast<std::size_t>(m)] = seq.at(2 * m + 1) - seq.at(2 * m - 1);
        h.utilde[static_cast<std::size_t>(m)] = u.u(h.hats[static_cast<std::size_t>(m)]);
    }
    if (cross_check) {
        for (std::int64_t m = 1; m < m_max; ++m) {
            if (u.u_gamma(h.utilde[static_cast<std::size_t>(m)]) !=
                h.hats[static_cast<std::size_t>(m + 1)])
                throw StructuralError("hat_" + std::to_string(m + 1) +
                                      " differs from U(gamma U(hat_" + std::to_string(m) + "))");
        }
    }
    return h;
}

Certificate two_path_hat_check(const PhiSequence& seq, const HatSequence& hats,
                               std::int64_t m_max, const UOperator& u) {
    nlohmann::json params = {{"family", to_string(seq.family)}, {"m_max", m_max}};
    const std::string id = "hat-recursion-two-paths";
    if (hats.max_m() < m_max || seq.max_m() < 2 * m_max + 3)
        throw PreconditionError("two_path_hat_check: needs hats through m = " +
                                std::to_string(m_max) + " and Phi through M = " +
                                std::to_string(2 * m_max + 3));
    nlohmann::json routes = nlohmann::json::array();
    for (std::int64_t m = 1; m <= m_max; ++m) {
        const IntPoly& ut = hats.utilde[static_cast<std::size_t>(m)];
        const IntPoly direct = seq.at(2 * m + 3) - seq.at(2 * m + 1);
        const IntPoly via = u.u_gamma(ut);
        routes.push_back({{"m", m},
                          {"U", to_string(u.route_for(hats.hats[static_cast<std::size_t>(m)].degree(), false))},
                          {"U_gamma", to_string(u.route_for(ut.degree(), true))}});
        if (direct != via) {
            const auto [k, unused] = first_coefficient_difference(direct, via);
            (void)unused;
            Certificate c = Certificate::failed(
                id, params,
                Witness{"coefficient", {{"m", m}, {"k", k}}, to_decimal(direct.coeff(k)),
                        to_decimal(via.coeff(k))});
            c.data = {{"routes", routes}};
            return c;
        }
    }
    Certificate c = Certificate::passed(id, params);
    c.detail = "Phi_(2m+3) - Phi_(2m+1) equals U(gamma U(hat_m)) for m <= " + std::to_string(m_max);
    c.data = {{"routes", routes}};
    return c;
}

ValuationReport hat_bound_check(const HatSequence& hats, std::int64_t m_max) {
    if (m_max > hats.max_m())
        throw PreconditionError("hat_bound_check: hats built only through m = " +
                                std::to_string(hats.max_m()));
    ValuationReport rep;
    rep.first = 1;
    rep.last = m_max;
    auto lower = [&](const char* check, std::int64_t m, std::int64_t idx, const BigInt& v,
                     std::int64_t bound) {
        ++rep.checked;
        if (!divisible_by_pow3(v, static_cast<unsigned>(bound)))
            rep.failures.push_back({check, m, idx, nu3(v), bound, false, elide_decimal(v)});
    };
    for (std::int64_t m = 1; m <= m_max; ++m) {
        const IntPoly& hat = hats.hats[static_cast<std::size_t>(m)];
        const IntPoly& ut = hats.utilde[static_cast<std::size_t>(m)];
        for (std::int64_t k = 0; k <= hat.degree(); ++k)
            lower("hat-coefficient", m, k, hat.coeffs()[static_cast<std::size_t>(k)], m + 2 + k / 2);
        for (std::int64_t l = 0; l <= ut.degree(); ++l)
            lower("u-hat-coefficient", m, l, ut.coeffs()[static_cast<std::size_t>(l)], m + 2 + l / 2);
        const BigInt c0 = ut.coeff(0), c1 = ut.coeff(1);
        lower("u-hat-combination-1-2", m, 0, BigInt(c0 - 2 * c1), m + 3);
        lower("u-hat-combination-3-24", m, 0, BigInt(3 * c0 - 24 * c1), m + 4);
        if (hats.family == Family::ph3) {
            ++rep.checked;
            const LaurentSeries at_xi = hat.eval_series(base_series(Side::xi, 1));
            const BigInt c = at_xi.coeff(0);
            if (c != 0) rep.failures.push_back(
                    {"anchor-constant-term", m, 0, nu3(c), 0, true, to_decimal(c)});
        }
    }
    return rep;
}

}  // namespace q3

#include "q3/modeq.hpp"

#include "q3/errors.hpp"

namespace q3 {

std::string_view to_string(Side s) { return s == Side::xi ? "xi" : "zeta"; }

Side parse_side(std::string_view text) {
    if (text == "xi") return Side::xi;
    if (text == "zeta") return Side::zeta;
    throw UsageError("unknown side: " + std::string(text) + " (expected xi or zeta)");
}

std::string_view to_string(Provenance p) {
    return p == Provenance::recurrence ? "recurrence" : "series_fit";
}

const IntPoly& ModEqTable::row(std::int64_t i) const {
    if (i < 0 || i > max_i())
        throw PreconditionError("table for side " + std::string(to_string(side)) + " has rows 0.." +
                                std::to_string(max_i()) + ", row " + std::to_string(i) +
                                " requested");
    return rows[static_cast<std::size_t>(i)];
}

std::int64_t minimal_degree(std::int64_t i) { return (i + 2) / 3; }

LaurentSeries base_series(Side side, std::int64_t prec) {
    return named_series(side == Side::xi ? NamedSeries::xi : NamedSeries::zeta, prec);
}

LaurentSeries gamma_series(Side side, std::int64_t prec) {
    return named_series(side == Side::xi ? NamedSeries::gamma : NamedSeries::delta, prec);
}

std::array<IntPoly, 3> published_base_rows() {
    auto p = [](std::initializer_list<long> c) {
        std::vector<BigInt> v;
        for (long x : c) v.emplace_back(x);
        return IntPoly(std::move(v));
    };
    return {p({0, 1, -3, 3}), p({0, -2, 9, -24, 45, -54, 27}),
            p({0, 1, -12, 66, -216, 486, -810, 972, -729, 243})};
}

IntPoly series_fit(const LaurentSeries& target, const LaurentSeries& base,
                   std::int64_t max_degree) {
    if (max_degree < 0) throw UsageError("series_fit: negative degree");
    if (base.effective_valuation() < 0 || target.effective_valuation() < 0)
        throw UsageError("series_fit: base and target must have nonnegative valuation");
    const BigInt x0 = base.coeff(0);
    const LaurentSeries y = add_constant(base, -x0);
    if (y.is_zero()) throw UsageError("series_fit: base is constant to its horizon");
    const std::int64_t v = y.valuation();
    const BigInt lambda = y.coeffs()[0];
    const std::int64_t horizon = std::min(target.precision(), base.precision());
    if (v * max_degree >= horizon)
        throw PrecisionError("series_fit: horizon " + std::to_string(horizon) +
                             " too short for degree " + std::to_string(max_degree));

    LaurentSeries r = target.truncated(horizon);
    LaurentSeries yj = LaurentSeries::constant(1, horizon);
    BigInt lambda_j = 1;
    std::vector<BigInt> c(static_cast<std::size_t>(max_degree) + 1);
    for (std::int64_t j = 0; j <= max_degree; ++j) {
        const std::int64_t e = j * v;
        if (!r.is_zero() && r.valuation() < e)
            throw CertificationError("series_fit: residual below the basis valuation",
                                     r.valuation(), "0", to_decimal(r.coeff(r.valuation())));
        const BigInt t = r.coeff(e);
        if (!mpz_divisible_p(t.get_mpz_t(), lambda_j.get_mpz_t()))
            throw CertificationError("series_fit: non-integral coefficient in the shifted basis",
                                     e, "multiple of " + to_decimal(lambda_j), to_decimal(t));
        BigInt cj;
        mpz_divexact(cj.get_mpz_t(), t.get_mpz_t(), lambda_j.get_mpz_t());
        if (cj != 0) r = r - cj * yj;
        c[static_cast<std::size_t>(j)] = std::move(cj);
        yj = yj * y;
        lambda_j *= lambda;
    }
    if (!r.is_zero())
        throw CertificationError("series_fit: nonzero residual after degree " +
                                     std::to_string(max_degree),
                                 r.valuation(), "0", to_decimal(r.coeff(r.valuation())));
    // sum c_j (x - x0)^j back to the monomial basis.
    const IntPoly shift({BigInt(-x0), BigInt(1)});
    IntPoly out;
    for (std::size_t j = c.size(); j-- > 0;) out = out * shift + IntPoly::constant(c[j]);
    return out;
}

std::array<IntPoly, 3> base_rows(Side side, std::int64_t prec) {
    if (prec < 40) throw UsageError("base_rows: precision must be at least 40");
    const auto rows = published_base_rows();
    const LaurentSeries big = base_series(side, 3 * prec);
    const LaurentSeries x = big.truncated(prec);
    LaurentSeries power = LaurentSeries::constant(1, 3 * prec);
    for (std::int64_t i = 1; i <= 3; ++i) {
        power = power * big;
        const LaurentSeries target = u3(power);
        const std::string label =
            "row " + std::to_string(i) + " (" + std::string(to_string(side)) + ")";
        require_series_equal(target, rows[static_cast<std::size_t>(i - 1)].eval_series(x),
                             label + " against u3(x^" + std::to_string(i) + ")", prec);
        const IntPoly fitted = series_fit(target, x, 3 * i);
        const IntPoly& want = rows[static_cast<std::size_t>(i - 1)];
        if (fitted != want) {
            std::int64_t j = 0;
            while (fitted.coeff(j) == want.coeff(j)) ++j;
            throw CertificationError(label + ": series fit disagrees with the published row", j,
                                     to_decimal(want.coeff(j)), to_decimal(fitted.coeff(j)));
        }
    }
    return rows;
}

ModEqTable seed_table(Side side, const std::array<IntPoly, 3>& base) {
    ModEqTable t;
    t.side = side;
    t.provenance = Provenance::recurrence;
    t.rows = {IntPoly::constant(1), base[0], base[1], base[2]};
    return t;
}

namespace {

IntPoly recurrence_row(const ModEqTable& t, std::int64_t i) {
    const IntPoly inner = BigInt(3) * t.row(i - 1) - BigInt(3) * t.row(i - 2) + t.row(i - 3);
    return t.row(1) * inner;
}

void check_row_shape(const IntPoly& row, std::int64_t i, Side side) {
    const std::string where = "row " + std::to_string(i) + " (" + std::string(to_string(side)) + ")";
    if (row.is_zero()) throw StructuralError(where + " is zero");
    if (row.min_degree() != minimal_degree(i))
        throw StructuralError(where + " has minimal degree " + std::to_string(row.min_degree()) +
                              ", expected " + std::to_string(minimal_degree(i)));
    if (row.degree() != 3 * i)
        throw StructuralError(where + " has degree " + std::to_string(row.degree()) +
                              ", expected " + std::to_string(3 * i));
}

}  // namespace

ModEqTable extend_table(ModEqTable table, std::int64_t i_max) {
    if (table.max_i() < 3) throw PreconditionError("extend_table needs rows 1-3");
    if (i_max < 3) throw UsageError("extend_table: i_max must be at least 3");
    for (std::int64_t i = 1; i <= 3; ++i) check_row_shape(table.row(i), i, table.side);
    table.rows.reserve(static_cast<std::size_t>(i_max) + 1);
    for (std::int64_t i = table.max_i() + 1; i <= i_max; ++i) {
        IntPoly row = recurrence_row(table, i);
        check_row_shape(row, i, table.side);
        table.rows.push_back(std::move(row));
    }
    return table;
}

ModEqTable build_table(Side side, std::int64_t i_max) {
    return extend_table(seed_table(side, base_rows(side)), i_max);
}

void check_recurrence(const ModEqTable& table) {
    if (table.max_i() < 3) throw StructuralError("table has fewer than three rows");
    if (table.row(0) != IntPoly::constant(1)) throw StructuralError("row 0 is not 1");
    const auto base = published_base_rows();
    for (std::int64_t i = 1; i <= 3; ++i)
        if (table.row(i) != base[static_cast<std::size_t>(i - 1)])
            throw StructuralError("row " + std::to_string(i) + " differs from the published row");
    for (std::int64_t i = 4; i <= table.max_i(); ++i)
        if (table.row(i) != recurrence_row(table, i))
            throw StructuralError("row " + std::to_string(i) + " does not satisfy the recurrence");
}

std::int64_t default_row_horizon(std::int64_t i) { return std::max<std::int64_t>(9 * i + 50, 200); }

namespace {

std::string horizon_note(std::int64_t h) {
    return "series agreement checked through q^" + std::to_string(h - 1) +
           "; a finite-order consistency check, not a proof";
}

Witness series_witness(const CertificationError& e, nlohmann::json extra) {
    return Witness{"exponent", e.exponent(), e.expected(), e.actual(), std::move(extra)};
}

}  // namespace

Certificate verify_rows(const ModEqTable& table, std::int64_t i_check,
                        std::optional<std::int64_t> prec) {
    if (i_check < 0) throw UsageError("verify_rows: i_check must be nonnegative");
    if (i_check > table.max_i())
        throw PreconditionError("verify_rows: table has only " + std::to_string(table.max_i()) +
                                " rows, " + std::to_string(i_check) + " requested");
    const std::int64_t h = prec.value_or(default_row_horizon(i_check));
    if (h < 1) throw UsageError("verify_rows: horizon must be positive");
    nlohmann::json params = {{"side", to_string(table.side)}, {"i_check", i_check}, {"horizon", h}};
    Certificate cert = Certificate::passed("modular-equation-rows-match-series", params);
    cert.horizon_note = horizon_note(h);
    if (i_check == 0) {
        cert.detail = "row 0 is U(1) = 1";
        return cert;
    }
    const LaurentSeries big = base_series(table.side, 3 * h);
    const LaurentSeries x = big.truncated(h);
    LaurentSeries power = LaurentSeries::constant(1, 3 * h);
    for (std::int64_t i = 1; i <= i_check; ++i) {
        power = power * big;
        try {
            require_series_equal(u3(power), table.row(i).eval_series(x),
                                 "row " + std::to_string(i), h);
        } catch (const CertificationError& e) {
            Certificate f = Certificate::failed(cert.claim_id, params, series_witness(e, {{"row", i}}));
            f.horizon_note = cert.horizon_note;
            f.detail = "row " + std::to_string(i) + " disagrees with u3(x^" + std::to_string(i) + ")";
            return f;
        }
    }
    cert.detail = "rows 1.." + std::to_string(i_check) + " agree with u3(x^i)";
    return cert;
}

Certificate u_gamma_row(const ModEqTable& table, std::int64_t i, std::int64_t prec) {
    if (i < 0) throw UsageError("u_gamma_row: i must be nonnegative");
    if (prec < 10) throw UsageError("u_gamma_row: precision must be at least 10");
    const IntPoly& next = table.row(i + 1);
    nlohmann::json params = {{"side", to_string(table.side)}, {"i", i}, {"prec", prec}};
    Certificate cert = Certificate::passed("u-gamma-row-identity", params);
    cert.horizon_note = horizon_note(prec - 2);

    const LaurentSeries big = base_series(table.side, 3 * prec);
    const LaurentSeries g = gamma_series(table.side, 3 * prec);
    const LaurentSeries x = big.truncated(prec);
    try {
        require_series_equal(big, g * dilate(x, 3), "ratio identity gamma x(q^3) = x(q)", prec);
        LaurentSeries power = g;
        for (std::int64_t k = 0; k < i; ++k) power = power * big;
        require_series_equal(u3(power), invert(x) * next.eval_series(x),
                             "u3(gamma x^i) = x^-1 X_{i+1}", prec - 2);
    } catch (const CertificationError& e) {
        Certificate f = Certificate::failed(cert.claim_id, params, series_witness(e, {{"check", e.what()}}));
        f.horizon_note = cert.horizon_note;
        f.detail = e.what();
        return f;
    }
    cert.detail = "gamma x(q^3) = x(q) and u3(gamma x^" + std::to_string(i) + ") = x^-1 X_" +
                  std::to_string(i + 1) + "(x)";
    return cert;
}

nlohmann::json to_json(const ValuationFailure& f) {
    return {{"check", f.check},       {"row", f.row},
            {"index", f.index},       {"observed", f.observed.to_string()},
            {"required", f.required}, {"exact", f.exact}, {"value", f.value}};
}

ValuationReport valuation_check(const ModEqTable& table, std::int64_t i_max) {
    if (i_max > table.max_i())
        throw PreconditionError("valuation_check: table has only " + std::to_string(table.max_i()) +
                                " rows");
    ValuationReport rep;
    rep.first = 1;
    rep.last = i_max;
    for (std::int64_t i = 1; i <= i_max; ++i) {
        const IntPoly& row = table.row(i);
        const std::int64_t d = minimal_degree(i);
        const BigInt lead = row.coeff(d);
        ++rep.checked;
        if (!nu3(lead).is_zero())
            rep.failures.push_back({"leading-unit", i, d, nu3(lead), 0, true});
        for (std::int64_t j = 1; d + j <= row.degree(); ++j) {
            const auto bound = (j + 1) / 2;
            const BigInt& c = row.coeffs()[static_cast<std::size_t>(d + j)];
            ++rep.checked;
            if (!divisible_by_pow3(c, static_cast<unsigned>(bound)))
                rep.failures.push_back({"lower-bound", i, d + j, nu3(c), bound, false});
        }
    }
    return rep;
}

ValuationReport min_degree_check(const ModEqTable& table, std::int64_t i_max) {
    if (i_max > table.max_i())
        throw PreconditionError("min_degree_check: table has only " +
                                std::to_string(table.max_i()) + " rows");
    ValuationReport rep;
    rep.first = 1;
    rep.last = i_max;
    for (std::int64_t i = 1; i <= i_max; ++i) {
        const IntPoly& row = table.row(i);
        rep.checked += 2;
        // For these structural checks "observed" holds a degree, not a valuation.
        const std::int64_t md = row.is_zero() ? -1 : row.min_degree();
        if (md != minimal_degree(i))
            rep.failures.push_back({"minimal-degree", i, md, Nu3(md), minimal_degree(i), true});
        if (row.degree() != 3 * i)
            rep.failures.push_back({"degree", i, row.degree(), Nu3(row.degree()), 3 * i, true});
    }
    return rep;
}

Certificate cross_side_check(const ModEqTable& xi, const ModEqTable& zeta, std::int64_t i_max) {
    nlohmann::json params = {{"i_max", i_max}};
    if (i_max > xi.max_i() || i_max > zeta.max_i())
        throw PreconditionError("cross_side_check: tables do not reach row " + std::to_string(i_max));
    for (std::int64_t i = 0; i <= i_max; ++i) {
        const IntPoly& a = xi.row(i);
        const IntPoly& b = zeta.row(i);
        if (a == b) continue;
        std::int64_t j = 0;
        while (a.coeff(j) == b.coeff(j)) ++j;
        return Certificate::failed("xi-zeta-tables-identical", params,
                                   Witness{"coefficient", {{"i", i}, {"j", j}},
                                           to_decimal(a.coeff(j)), to_decimal(b.coeff(j))});
    }
    Certificate c = Certificate::passed("xi-zeta-tables-identical", params);
    c.detail = "rows 0.." + std::to_string(i_max) + " coincide coefficient for coefficient";
    return c;
}

}  // namespace q3

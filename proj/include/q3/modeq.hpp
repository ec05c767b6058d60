#ifndef Q3_MODEQ_HPP
#define Q3_MODEQ_HPP

// Modular-equation tables: row i is the polynomial X_i with U(x^i) = X_i(x), where
// x is xi (ph side) or zeta (ps side).  Rows 1-3 are published and certified by
// series; later rows come from X_i = A (3 X_{i-1} - 3 X_{i-2} + X_{i-3}).

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "q3/bigint.hpp"
#include "q3/certificate.hpp"
#include "q3/poly.hpp"
#include "q3/series.hpp"

namespace q3 {

enum class Side { xi, zeta };
enum class Provenance { recurrence, series_fit };

std::string_view to_string(Side s);
Side parse_side(std::string_view text);
std::string_view to_string(Provenance p);

struct ModEqTable {
    Side side = Side::xi;
    Provenance provenance = Provenance::recurrence;
    std::vector<IntPoly> rows;  // rows[0] = 1

    std::int64_t max_i() const noexcept { return static_cast<std::int64_t>(rows.size()) - 1; }
    const IntPoly& row(std::int64_t i) const;
};

// ceil(i / 3), the exact minimal degree of row i >= 1.
std::int64_t minimal_degree(std::int64_t i);

// xi = phi(-q^9)/phi(-q) or zeta = q psi(q^9)/psi(q).
LaurentSeries base_series(Side side, std::int64_t prec);
// gamma = xi(q)/xi(q^3) or delta = zeta(q)/zeta(q^3), built from their theta definitions.
LaurentSeries gamma_series(Side side, std::int64_t prec);

// The three rows as printed; identical on both sides.
std::array<IntPoly, 3> published_base_rows();

// Published rows, each certified against u3(x^i) by series and rediscovered by
// series_fit.  Throws CertificationError on mismatch.
std::array<IntPoly, 3> base_rows(Side side, std::int64_t prec = 60);

// Integer polynomial P of degree <= max_degree with P(base) = target, found by
// elimination in the basis (base - base(0))^j.  Throws CertificationError if the
// residual is nonzero or a coefficient is not an integer.
IntPoly series_fit(const LaurentSeries& target, const LaurentSeries& base,
                   std::int64_t max_degree);

// Table with rows 0..3 from the given base rows.
ModEqTable seed_table(Side side, const std::array<IntPoly, 3>& base);

// Fills rows through i_max by the recurrence.  StructuralError if a row's minimal
// degree differs from ceil(i/3) or its degree from 3i.
ModEqTable extend_table(ModEqTable table, std::int64_t i_max);

// base_rows + extend_table.
ModEqTable build_table(Side side, std::int64_t i_max);

// Checks the recurrence on every stored row (used for files from disk).
void check_recurrence(const ModEqTable& table);

// Default series horizon for certifying row i: max(3 deg + 50, 200).
std::int64_t default_row_horizon(std::int64_t i);

// eval(row i, x) == u3(x^i) for 1 <= i <= i_check.  prec overrides the horizon.
Certificate verify_rows(const ModEqTable& table, std::int64_t i_check,
                        std::optional<std::int64_t> prec = std::nullopt);

// gamma x(q^3) = x(q) and u3(gamma x^i) = x^{-1} X_{i+1}(x).
Certificate u_gamma_row(const ModEqTable& table, std::int64_t i, std::int64_t prec);

// Vieta scaffolding through cube-root-of-unity twists.
Certificate newton_check(Side side, std::int64_t prec = 300);

struct ValuationFailure {
    std::string check;  // "leading-unit", "lower-bound", "minimal-degree", ...
    std::int64_t row;
    std::int64_t index;
    Nu3 observed;
    std::int64_t required;
    bool exact;  // true when the requirement is equality rather than a lower bound
    std::string value = {};  // the offending quantity, when it is not a table entry
};

struct ValuationReport {
    std::int64_t first = 1;
    std::int64_t last = 0;
    std::int64_t checked = 0;
    std::vector<ValuationFailure> failures;
    bool ok() const noexcept { return failures.empty(); }
};

nlohmann::json to_json(const ValuationFailure& f);

// nu(X_i(d_i)) = 0 and nu(X_i(d_i + j)) >= floor((j + 1) / 2) for 1 <= i <= i_max.
ValuationReport valuation_check(const ModEqTable& table, std::int64_t i_max);

// min_degree(row i) == ceil(i/3) and deg(row i) == 3i for 1 <= i <= i_max.
ValuationReport min_degree_check(const ModEqTable& table, std::int64_t i_max);

// Rows of the two tables coincide for i <= i_max.
Certificate cross_side_check(const ModEqTable& xi, const ModEqTable& zeta, std::int64_t i_max);

// ---------------------------------------------------------------- persistence

nlohmann::json to_json(const ModEqTable& table);
// Schema validation only; StructuralError on a malformed document.
ModEqTable table_from_json(const nlohmann::json& j);

std::filesystem::path table_cache_path(const std::filesystem::path& dir, Side side,
                                       std::int64_t max_i);

// Loads a cached table if it is well formed and passes the base-row and
// recurrence checks; otherwise rebuilds and rewrites it.  An empty dir disables caching.
ModEqTable load_or_build_table(Side side, std::int64_t max_i, const std::filesystem::path& dir);

void write_table(const ModEqTable& table, const std::filesystem::path& path);

}  // namespace q3

#endif

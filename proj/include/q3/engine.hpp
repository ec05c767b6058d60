#ifndef Q3_ENGINE_HPP
#define Q3_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "q3/certificate.hpp"
#include "q3/modeq.hpp"
#include "q3/poly.hpp"
#include "q3/series.hpp"
#include "q3/trace_u.hpp"

namespace q3 {

enum class Family { ph3, ps3 };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);
Side side_of(Family f);

// Generating function of the family: F = phi(-q^3)/phi(-q) or G = psi(q^3)/psi(q).
LaurentSeries generating_function(Family f, std::int64_t prec);

// ---------------------------------------------------------------- U on Z[x]

// sum_l p_l X_l.  PreconditionError if the table is too short.
IntPoly u_poly(const IntPoly& p, const ModEqTable& table);
// sum_l p_l x^-1 X_{l+1}.
IntPoly u_gamma_poly(const IntPoly& p, const ModEqTable& table);

enum class URoute { automatic, table, trace };

std::string_view to_string(URoute r);

// U and U(gamma .) on polynomials, through the table when it covers the input and
// through the table-free trace formula otherwise.
class UOperator {
public:
    explicit UOperator(std::shared_ptr<const ModEqTable> table, URoute route = URoute::automatic);

    IntPoly u(const IntPoly& p) const;
    IntPoly u_gamma(const IntPoly& p) const;

    // The route u (gamma = false) or u_gamma (gamma = true) takes for a given degree.
    URoute route_for(std::int64_t degree, bool gamma) const;

    const ModEqTable& table() const noexcept { return *table_; }
    Side side() const noexcept { return table_->side; }

private:
    std::shared_ptr<const ModEqTable> table_;
    TraceU trace_;
    URoute route_;
};

// ---------------------------------------------------------------- Phi iteration

struct PhiSequence {
    Family family = Family::ph3;
    std::vector<IntPoly> polys;  // polys[M] for 1 <= M <= max_m(); polys[0] is unused

    std::int64_t max_m() const noexcept { return static_cast<std::int64_t>(polys.size()) - 1; }
    const IntPoly& at(std::int64_t m) const;
};

// Phi_1 = 1 - 3x + 3x^2, Phi_2k = U(Phi_2k-1), Phi_2k+1 = U(gamma Phi_2k).
// Checks the minimal-degree law at every step (StructuralError on violation).
PhiSequence build_phi(Family family, std::int64_t m_max, const UOperator& u);

// Offsets b_M with S_M = sum_n c(3^M n + b_M) q^n: 0 for ph3,
// (3^(M+1) - 1)/4 (M odd) and (3^M - 1)/4 (M even) for ps3.
std::int64_t progression_offset(Family family, std::int64_t m);
// The same offsets by iterating the U steps on exponents.
std::int64_t progression_offset_iterated(Family family, std::int64_t m);

// S_M by repeated u3 of the generating function (with q^-2 shifts on the ps side).
LaurentSeries iterated_series(Family family, std::int64_t m, std::int64_t prec);

// Phi_M(x) times F(q^3) (M odd) or F(q) (M even) equals S_M.
Certificate verify_phi_series(const PhiSequence& seq, std::int64_t m, std::int64_t prec);

// ph and ps sequences agree coefficientwise.
Certificate phi_mirror_check(const PhiSequence& ph, const PhiSequence& ps);

// ---------------------------------------------------------------- hats

struct HatSequence {
    Family family = Family::ph3;
    std::vector<IntPoly> hats;    // hats[m] = Phi_2m+1 - Phi_2m-1, m >= 1
    std::vector<IntPoly> utilde;  // utilde[m] = U(hats[m])

    std::int64_t max_m() const noexcept { return static_cast<std::int64_t>(hats.size()) - 1; }
};

// Requires seq through M = 2 m_max + 1.  With cross_check, also confirms
// hats[m+1] = U(gamma utilde[m]) and throws StructuralError otherwise.
HatSequence build_hats(const PhiSequence& seq, std::int64_t m_max, const UOperator& u,
                       bool cross_check = true);

// Phi_2m+3 - Phi_2m+1 against U(gamma utilde[m]) for 1 <= m <= m_max.
Certificate two_path_hat_check(const PhiSequence& seq, const HatSequence& hats,
                               std::int64_t m_max, const UOperator& u);

// For every m <= m_max:
//   (a) nu(C_m(k)) >= m + 2 + floor(k/2)
//   (b) nu(C~_m(l)) >= m + 2 + floor(l/2)
//   (c) nu(C~_m(0) - 2 C~_m(1)) >= m + 3
//   (d) nu(3 C~_m(0) - 24 C~_m(1)) >= m + 4
//   (e) hat_m(xi) has zero constant term (ph side only: xi(0) = 1, so this is sum_k C_m(k))
ValuationReport hat_bound_check(const HatSequence& hats, std::int64_t m_max);

// ---------------------------------------------------------------- congruence scans

struct ScanViolation {
    std::int64_t n;
    BigInt high;  // c(3^(2m+1) n + b_(2m+1))
    BigInt low;   // c(3^(2m-1) n + b_(2m-1))
    Nu3 nu;       // of the difference
};

struct CongruenceScan {
    Family family = Family::ph3;
    std::int64_t m = 1;
    std::int64_t n_max = 0;
    std::int64_t modulus_exponent = 0;  // m + 2 + extra
    std::int64_t high_step = 0, high_offset = 0, low_step = 0, low_offset = 0;
    std::vector<ScanViolation> violations;
    std::optional<std::int64_t> min_nu;  // over nonzero differences
    // Largest e with every difference divisible by 3^(m+2+e); empty if all differences vanish.
    std::optional<std::int64_t> max_uniform_extra_power;
    // Recheck one power higher than the claimed modulus.
    bool holds_at_next_power = false;
    std::optional<std::int64_t> next_power_first_failure;

    bool ok() const noexcept { return violations.empty(); }
};

// Largest generating-function horizon a scan will expand.
inline constexpr std::int64_t kMaxScanHorizon = 4'000'000;

// Horizon of the generating function needed for a scan; PrecisionError above kMaxScanHorizon.
std::int64_t scan_horizon(Family family, std::int64_t m, std::int64_t n_max);

// c(3^(2m+1) n + b) == c(3^(2m-1) n + b') mod 3^(m+2+extra) for 0 <= n <= n_max.
CongruenceScan scan_congruence(Family family, std::int64_t m, std::int64_t n_max,
                               std::int64_t extra = 0);
// Same on a pre-expanded generating function; PrecisionError if it is too short.
CongruenceScan scan_congruence(Family family, std::int64_t m, std::int64_t n_max,
                               std::int64_t extra, const LaurentSeries& gf);

nlohmann::json to_json(const CongruenceScan& s);

// Generic progression comparison c(a1 n + b1) == c(a0 n + b0) mod 3^e.
struct ProgressionCheck {
    std::string label;
    std::int64_t a1, b1, a0, b0, exponent, n_max;
    std::optional<std::int64_t> first_failure;
    std::int64_t failures = 0;
    bool ok() const noexcept { return failures == 0; }
};

ProgressionCheck check_progressions(const LaurentSeries& gf, std::string label, std::int64_t a1,
                                    std::int64_t b1, std::int64_t a0, std::int64_t b0,
                                    std::int64_t exponent, std::int64_t n_max);

// c(27n + 20) == c(3n + 2) mod 27 read for ph3 and for ps3.
std::vector<ProgressionCheck> attributed_mod27_readings(std::int64_t n_max);

// ps3(n) == (-1)^n pod3(n), pod3 from its product form.
Certificate pod_cross_check(std::int64_t n_max);

// pod3(n) for 0 <= n <= n_max from prod_{j odd,3∤j}(1+q^j) prod_{j even,3∤j}(1-q^j)^-1.
std::vector<BigInt> pod3_by_product(std::int64_t n_max);

// ps3((3^(2m) - 1)/4) == ps3((3^(2m+2) - 1)/4) mod 3^(m+2), 1 <= m <= m_max.
Certificate probe_open_problem(std::int64_t m_max);

// ---------------------------------------------------------------- parallelism

// Runs body(i) for 0 <= i < n on up to jobs threads (0 = hardware concurrency).
// The first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace q3

#endif

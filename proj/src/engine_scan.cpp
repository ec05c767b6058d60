#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "q3/engine.hpp"
#include "q3/errors.hpp"

namespace q3 {
namespace {

std::int64_t pow3_i64(std::int64_t e) {
    std::int64_t r = 1;
    for (std::int64_t k = 0; k < e; ++k) {
        if (r > (std::int64_t{1} << 60) / 3) throw UsageError("3^" + std::to_string(e) + " overflows");
        r *= 3;
    }
    return r;
}

const BigInt& coeff_ref(const LaurentSeries& s, std::int64_t e) {
    static const BigInt zero(0);
    if (e >= s.precision())
        throw PrecisionError("coefficient of q^" + std::to_string(e) + " beyond horizon " +
                             std::to_string(s.precision()));
    if (s.is_zero() || e < s.valuation()) return zero;
    return s.coeffs()[static_cast<std::size_t>(e - s.valuation())];
}

}  // namespace

std::int64_t scan_horizon(Family family, std::int64_t m, std::int64_t n_max) {
    const std::int64_t step = pow3_i64(2 * m + 1);
    if (n_max > (kMaxScanHorizon - step) / step)
        throw PrecisionError("scan needs more than " + std::to_string(kMaxScanHorizon) +
                             " coefficients (3^" + std::to_string(2 * m + 1) + " * " +
                             std::to_string(n_max) + ")");
    return step * n_max + progression_offset(family, 2 * m + 1) + 1;
}

CongruenceScan scan_congruence(Family family, std::int64_t m, std::int64_t n_max,
                               std::int64_t extra) {
    if (m < 1) throw UsageError("scan_congruence: m must be at least 1");
    if (n_max < 0) throw UsageError("scan_congruence: n_max must be nonnegative");
    return scan_congruence(family, m, n_max, extra,
                           generating_function(family, scan_horizon(family, m, n_max)));
}

CongruenceScan scan_congruence(Family family, std::int64_t m, std::int64_t n_max,
                               std::int64_t extra, const LaurentSeries& gf) {
    if (m < 1) throw UsageError("scan_congruence: m must be at least 1");
    if (n_max < 0) throw UsageError("scan_congruence: n_max must be nonnegative");
    if (extra < 0) throw UsageError("scan_congruence: modulus extra must be nonnegative");
    const std::int64_t need = scan_horizon(family, m, n_max);
    if (gf.precision() < need)
        throw PrecisionError("scan_congruence: generating function known to q^" +
                             std::to_string(gf.precision() - 1) + ", scan needs q^" +
                             std::to_string(need - 1));

    CongruenceScan s;
    s.family = family;
    s.m = m;
    s.n_max = n_max;
    s.modulus_exponent = m + 2 + extra;
    s.high_step = pow3_i64(2 * m + 1);
    s.low_step = pow3_i64(2 * m - 1);
    s.high_offset = progression_offset(family, 2 * m + 1);
    s.low_offset = progression_offset(family, 2 * m - 1);
    if (s.high_offset != progression_offset_iterated(family, 2 * m + 1) ||
        s.low_offset != progression_offset_iterated(family, 2 * m - 1))
        throw StructuralError("closed-form and iterated progression offsets disagree");

    // Second derivation: repeated u3 (with q^-2 shifts on the ps side) must land on
    // the same coefficients that direct indexing reads.
    LaurentSeries it = gf.truncated(need);
    for (std::int64_t k = 1; k <= 2 * m + 1; ++k) {
        const bool shift = family == Family::ps3 && k % 2 == 1;
        it = u3(shift ? it.shifted(-2) : it);
        if (k == 2 * m - 1 || k == 2 * m + 1) {
            const std::int64_t step = k == 2 * m + 1 ? s.high_step : s.low_step;
            const std::int64_t off = k == 2 * m + 1 ? s.high_offset : s.low_offset;
            for (std::int64_t n = 0; n <= n_max; ++n)
                if (coeff_ref(it, n) != coeff_ref(gf, step * n + off))
                    throw StructuralError("iterated U route and direct indexing disagree at n = " +
                                          std::to_string(n));
        }
    }

    const auto e = static_cast<unsigned>(s.modulus_exponent);
    s.holds_at_next_power = true;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const BigInt& hi = coeff_ref(gf, s.high_step * n + s.high_offset);
        const BigInt& lo = coeff_ref(gf, s.low_step * n + s.low_offset);
        const BigInt d = hi - lo;
        if (d == 0) continue;
        const Nu3 v = nu3(d);
        if (!s.min_nu || v.value() < *s.min_nu) s.min_nu = v.value();
        if (!v.at_least(e)) s.violations.push_back({n, hi, lo, v});
        if (!v.at_least(e + 1) && s.holds_at_next_power) {
            s.holds_at_next_power = false;
            s.next_power_first_failure = n;
        }
    }
    if (s.min_nu) s.max_uniform_extra_power = *s.min_nu - (m + 2);
    return s;
}

nlohmann::json to_json(const CongruenceScan& s) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : s.violations)
        v.push_back({{"n", x.n},
                     {"high", to_decimal(x.high)},
                     {"low", to_decimal(x.low)},
                     {"nu", x.nu.to_string()}});
    return {{"family", to_string(s.family)},
            {"m", s.m},
            {"n_max", s.n_max},
            {"modulus", "3^" + std::to_string(s.modulus_exponent)},
            {"high_progression", std::to_string(s.high_step) + "n+" + std::to_string(s.high_offset)},
            {"low_progression", std::to_string(s.low_step) + "n+" + std::to_string(s.low_offset)},
            {"violations", v},
            {"min_nu", s.min_nu ? nlohmann::json(*s.min_nu) : nlohmann::json("inf")},
            {"max_uniform_extra_power", s.max_uniform_extra_power
                                            ? nlohmann::json(*s.max_uniform_extra_power)
                                            : nlohmann::json("inf")},
            {"holds_at_next_power", s.holds_at_next_power},
            {"next_power_first_failure", s.next_power_first_failure
                                             ? nlohmann::json(*s.next_power_first_failure)
                                             : nlohmann::json(nullptr)}};
}

ProgressionCheck check_progressions(const LaurentSeries& gf, std::string label, std::int64_t a1,
                                    std::int64_t b1, std::int64_t a0, std::int64_t b0,
                                    std::int64_t exponent, std::int64_t n_max) {
    ProgressionCheck c{std::move(label), a1, b1, a0, b0, exponent, n_max, std::nullopt, 0};
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const BigInt d = coeff_ref(gf, a1 * n + b1) - coeff_ref(gf, a0 * n + b0);
        if (!divisible_by_pow3(d, static_cast<unsigned>(exponent))) {
            ++c.failures;
            if (!c.first_failure) c.first_failure = n;
        }
    }
    return c;
}

std::vector<ProgressionCheck> attributed_mod27_readings(std::int64_t n_max) {
    const std::int64_t h = 27 * n_max + 21;
    return {check_progressions(generating_function(Family::ph3, h), "ph3(27n+20) = ph3(3n+2) mod 27",
                               27, 20, 3, 2, 3, n_max),
            check_progressions(generating_function(Family::ps3, h), "ps3(27n+20) = ps3(3n+2) mod 27",
                               27, 20, 3, 2, 3, n_max)};
}

std::vector<BigInt> pod3_by_product(std::int64_t n_max) {
    if (n_max < 0) throw UsageError("pod3_by_product: n_max must be nonnegative");
    const auto n = static_cast<std::size_t>(n_max);
    std::vector<BigInt> a(n + 1);
    a[0] = 1;
    for (std::size_t j = 1; j <= n; ++j) {
        if (j % 3 == 0) continue;
        if (j % 2 == 1) {
            for (std::size_t k = n; k >= j; --k) a[k] += a[k - j];  // (1 + q^j)
        } else {
            for (std::size_t k = j; k <= n; ++k) a[k] += a[k - j];  // 1 / (1 - q^j)
        }
    }
    return a;
}

Certificate pod_cross_check(std::int64_t n_max) {
    if (n_max < 1) throw UsageError("pod_cross_check: n_max must be at least 1");
    nlohmann::json params = {{"n_max", n_max}};
    const std::string id = "ps3-equals-signed-pod3";
    const LaurentSeries g = generating_function(Family::ps3, n_max + 1);
    const auto pod = pod3_by_product(n_max);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        BigInt want = pod[static_cast<std::size_t>(n)];
        if (n % 2 == 1) want = -want;
        const BigInt& got = coeff_ref(g, n);
        if (got != want)
            return Certificate::failed(id, params,
                                       Witness{"n", n, to_decimal(want), to_decimal(got)});
    }
    Certificate c = Certificate::passed(id, params);
    c.detail = "ps3(n) = (-1)^n pod3(n) for 0 <= n <= " + std::to_string(n_max) +
               ", pod3 from its product form";
    return c;
}

Certificate probe_open_problem(std::int64_t m_max) {
    if (m_max < 1) throw UsageError("probe_open_problem: m_max must be at least 1");
    nlohmann::json params = {{"m_max", m_max}};
    const std::string id = "ps3-offset-values-probe";
    const std::int64_t top = (pow3_i64(2 * m_max + 2) - 1) / 4;
    const LaurentSeries g = generating_function(Family::ps3, top + 1);
    nlohmann::json rows = nlohmann::json::array();
    std::optional<Witness> first_bad;
    for (std::int64_t m = 1; m <= m_max; ++m) {
        const std::int64_t lo_n = (pow3_i64(2 * m) - 1) / 4;
        const std::int64_t hi_n = (pow3_i64(2 * m + 2) - 1) / 4;
        const BigInt& lo = coeff_ref(g, lo_n);
        const BigInt& hi = coeff_ref(g, hi_n);
        const Nu3 v = nu3(hi - lo);
        const bool ok = v.at_least(m + 2);
        rows.push_back({{"m", m},
                        {"n_low", lo_n},
                        {"n_high", hi_n},
                        {"ps3_low", to_decimal(lo)},
                        {"ps3_high", to_decimal(hi)},
                        {"nu", v.to_string()},
                        {"required", m + 2},
                        {"pass", ok}});
        if (!ok && !first_bad)
            first_bad = Witness{"m", m, "difference divisible by 3^" + std::to_string(m + 2),
                                "nu = " + v.to_string(), {}};
    }
    Certificate c = first_bad ? Certificate::failed(id, params, *first_bad)
                              : Certificate::passed(id, params);
    c.detail = "empirical probe of single values, not a proof";
    c.data = {{"values", rows}};
    return c;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) first = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace q3

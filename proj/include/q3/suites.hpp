#ifndef Q3_SUITES_HPP
#define Q3_SUITES_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "q3/certificate.hpp"
#include "q3/engine.hpp"
#include "q3/modeq.hpp"

namespace q3 {

enum class Profile { quick, full };

struct RunConfig {
    Profile profile = Profile::quick;
    std::optional<std::int64_t> prec;
    std::optional<std::int64_t> max_i;
    std::optional<std::int64_t> max_m;
    std::optional<std::int64_t> n_max;
    std::optional<std::int64_t> m;
    std::optional<std::int64_t> i_check;
    std::optional<Family> family;
    std::optional<Side> side;
    std::int64_t modulus_extra = 0;
    std::filesystem::path cache_dir;  // empty disables the table cache
    std::optional<std::filesystem::path> table_file;
    unsigned jobs = 0;
};

// Parameters a profile resolves to after overrides.
struct ResolvedParams {
    std::int64_t max_i;
    std::int64_t i_check;
    std::int64_t hats_m_max;
    std::int64_t phi_m_max;
    std::int64_t phi_series_m_max;
    std::vector<std::int64_t> scan_ms;
    std::int64_t n_max;
    std::int64_t pod_n_max;
    std::int64_t problem_m_max;
    std::int64_t newton_prec;
};

ResolvedParams resolve(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

// Certificates of one suite ("all" runs every suite) in canonical order.
// UsageError / PreconditionError escape; check failures become certificates.
std::vector<Certificate> run_suite(const std::string& suite, const RunConfig& cfg);

// Turns a report into a certificate; the first failure becomes the witness.
Certificate report_certificate(std::string claim_id, nlohmann::json params,
                               const ValuationReport& rep);

}  // namespace q3

#endif

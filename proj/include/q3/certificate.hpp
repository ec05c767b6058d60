#ifndef Q3_CERTIFICATE_HPP
#define Q3_CERTIFICATE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace q3 {

enum class Status { pass, fail, error };

std::string_view to_string(Status s);

// A concrete counterexample: where it happened and both values.
struct Witness {
    std::string locator;       // "exponent", "n", "row", "coefficient", ...
    nlohmann::json location;   // an integer or an object such as {"i":5,"j":3}
    std::string expected;
    std::string actual;
    nlohmann::json extra = nlohmann::json::object();
};

// Verdict for one finite-order claim.
struct Certificate {
    std::string claim_id;
    nlohmann::json params = nlohmann::json::object();
    Status status = Status::pass;
    std::optional<Witness> witness;
    std::string horizon_note;
    std::string detail;
    nlohmann::json data = nlohmann::json::object();
    std::string tool_version;
    std::optional<std::string> timestamp;
    std::optional<std::int64_t> elapsed_ms;

    static Certificate passed(std::string claim_id, nlohmann::json params);
    static Certificate failed(std::string claim_id, nlohmann::json params, Witness w);
    static Certificate errored(std::string claim_id, nlohmann::json params, std::string detail);

    bool ok() const noexcept { return status == Status::pass; }
};

std::string tool_version();

// The canonical form omits timestamp and elapsed_ms so identical runs compare equal.
nlohmann::json to_json(const Certificate& c, bool canonical = false);

}  // namespace q3

#endif

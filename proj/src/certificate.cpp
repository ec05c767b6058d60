#include "q3/certificate.hpp"

#include "q3/errors.hpp"

#ifndef Q3_VERSION
#define Q3_VERSION "0.0.0"
#endif

namespace q3 {

std::string_view to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::error: return "error";
    }
    return "error";
}

std::string tool_version() { return "q3cong " Q3_VERSION; }

Certificate Certificate::passed(std::string claim_id, nlohmann::json params) {
    Certificate c;
    c.claim_id = std::move(claim_id);
    c.params = std::move(params);
    c.status = Status::pass;
    c.tool_version = q3::tool_version();
    return c;
}

Certificate Certificate::failed(std::string claim_id, nlohmann::json params, Witness w) {
    Certificate c = passed(std::move(claim_id), std::move(params));
    c.status = Status::fail;
    c.witness = std::move(w);
    return c;
}

Certificate Certificate::errored(std::string claim_id, nlohmann::json params, std::string detail) {
    Certificate c = passed(std::move(claim_id), std::move(params));
    c.status = Status::error;
    c.detail = std::move(detail);
    return c;
}

nlohmann::json to_json(const Certificate& c, bool canonical) {
    if (c.status == Status::fail && !c.witness)
        throw StructuralError("certificate " + c.claim_id + " fails without a witness");
    nlohmann::json j;
    j["claim_id"] = c.claim_id;
    j["params"] = c.params;
    j["status"] = std::string(to_string(c.status));
    if (c.witness) {
        j["witness"] = {{"locator", c.witness->locator},
                        {"location", c.witness->location},
                        {"expected", c.witness->expected},
                        {"actual", c.witness->actual}};
        if (!c.witness->extra.empty()) j["witness"]["extra"] = c.witness->extra;
    } else {
        j["witness"] = nullptr;
    }
    j["horizon_note"] = c.horizon_note;
    j["detail"] = c.detail;
    j["data"] = c.data;
    j["tool_version"] = c.tool_version;
    if (!canonical) {
        if (c.timestamp) j["timestamp"] = *c.timestamp;
        if (c.elapsed_ms) j["elapsed_ms"] = *c.elapsed_ms;
    }
    return j;
}

}  // namespace q3

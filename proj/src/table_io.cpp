#include <fstream>
#include <system_error>

#include "q3/errors.hpp"
#include "q3/modeq.hpp"

namespace q3 {

nlohmann::json to_json(const ModEqTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t i = 1; i <= table.max_i(); ++i) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& c : table.row(i).coeffs()) coeffs.push_back(to_decimal(c));
        rows.push_back({{"i", i}, {"coeffs", std::move(coeffs)}});
    }
    return {{"side", to_string(table.side)}, {"max_i", table.max_i()}, {"rows", std::move(rows)}};
}

ModEqTable table_from_json(const nlohmann::json& j) {
    auto bad = [](const std::string& why) { return StructuralError("malformed table: " + why); };
    if (!j.is_object()) throw bad("not an object");
    if (!j.contains("side") || !j["side"].is_string()) throw bad("missing side");
    if (!j.contains("max_i") || !j["max_i"].is_number_integer()) throw bad("missing max_i");
    if (!j.contains("rows") || !j["rows"].is_array()) throw bad("missing rows");
    ModEqTable t;
    try {
        t.side = parse_side(j["side"].get<std::string>());
    } catch (const UsageError& e) {
        throw bad(e.what());
    }
    const auto max_i = j["max_i"].get<std::int64_t>();
    if (max_i < 3) throw bad("max_i below 3");
    if (static_cast<std::int64_t>(j["rows"].size()) != max_i) throw bad("row count differs from max_i");
    t.rows.push_back(IntPoly::constant(1));
    std::int64_t expect = 1;
    for (const auto& r : j["rows"]) {
        if (!r.is_object() || !r.contains("i") || !r["i"].is_number_integer() ||
            r["i"].get<std::int64_t>() != expect)
            throw bad("row " + std::to_string(expect) + " missing or out of order");
        if (!r.contains("coeffs") || !r["coeffs"].is_array()) throw bad("row without coeffs");
        std::vector<BigInt> c;
        c.reserve(r["coeffs"].size());
        for (const auto& e : r["coeffs"]) {
            if (!e.is_string()) throw bad("coefficient is not a decimal string");
            try {
                c.push_back(from_decimal(e.get<std::string>()));
            } catch (const UsageError& err) {
                throw bad(err.what());
            }
        }
        t.rows.emplace_back(std::move(c));
        ++expect;
    }
    return t;
}

std::filesystem::path table_cache_path(const std::filesystem::path& dir, Side side,
                                       std::int64_t max_i) {
    return dir / ("modeq-" + std::string(to_string(side)) + "-" + std::to_string(max_i) + ".json");
}

void write_table(const ModEqTable& table, const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write table file " + path.string());
        out << to_json(table).dump() << '\n';
        if (!out) throw UsageError("cannot write table file " + path.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw UsageError("cannot write table file " + path.string());
    }
}

ModEqTable load_or_build_table(Side side, std::int64_t max_i, const std::filesystem::path& dir) {
    if (max_i < 3) throw UsageError("table needs max_i >= 3");
    if (dir.empty()) return build_table(side, max_i);
    const auto path = table_cache_path(dir, side, max_i);
    if (std::filesystem::exists(path)) {
        try {
            std::ifstream in(path, std::ios::binary);
            const auto j = nlohmann::json::parse(in);
            ModEqTable t = table_from_json(j);
            if (t.side == side && t.max_i() == max_i) {
                check_recurrence(t);
                // Cached rows must still be backed by the series certification of rows 1-3.
                base_rows(side);
                return t;
            }
        } catch (const nlohmann::json::exception&) {
        } catch (const StructuralError&) {
        }
    }
    ModEqTable t = build_table(side, max_i);
    try {
        write_table(t, path);
    } catch (const UsageError&) {
        // An unwritable cache directory only costs a rebuild next time.
    }
    return t;
}

}  // namespace q3

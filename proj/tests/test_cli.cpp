#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "q3/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "q3cong");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = q3::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path d = [] {
        auto p = fs::temp_directory_path() / "q3cong-cli-test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string cache() { return (scratch() / "cache").string(); }

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

nlohmann::json canonical(nlohmann::json doc) {
    for (auto& c : doc["certificates"]) {
        c.erase("timestamp");
        c.erase("elapsed_ms");
    }
    return doc;
}

}  // namespace

TEST_CASE("expand") {
    auto r = run({"expand", "--func", "ph3", "--terms", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "0\t1\n1\t2\n2\t4\n");
    r = run({"expand", "--func", "psi", "--terms", "4"});
    CHECK(r.out == "0\t1\n1\t1\n2\t0\n3\t1\n");
    r = run({"expand", "--func", "delta", "--terms", "2", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["series"]["valuation"] == -2);
    CHECK(run({"expand", "--func", "nosuch"}).code == 2);
    CHECK(run({"expand", "--func", "ph3", "--terms", "0"}).code == 2);
    CHECK(run({"expand"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("table") {
    const auto xi = scratch() / "xi.json", zeta = scratch() / "zeta.json";
    CHECK(run({"table", "xi", "--max-i", "60", "--out", xi.string()}).code == 0);
    CHECK(run({"table", "--side", "zeta", "--max-i", "60", "--out", zeta.string()}).code == 0);
    const auto a = read_json(xi), b = read_json(zeta);
    CHECK(a["rows"].size() == 60);
    CHECK(a["rows"][0]["coeffs"] == nlohmann::json({"0", "1", "-3", "3"}));
    CHECK(a["rows"].dump() == b["rows"].dump());
    CHECK(run({"table", "xi", "--max-i", "2", "--out", xi.string()}).code == 2);
    // The parent of the target is a regular file, so the path cannot be created.
    CHECK(run({"table", "xi", "--out", (xi / "t.json").string()}).code == 2);
    CHECK(run({"table", "nosuch", "--max-i", "5", "--out", xi.string()}).code == 2);
    const auto r = run({"table", "xi", "--max-i", "10", "--cache-dir", cache()});
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(cache()) / "modeq-xi-10.json"));
}

TEST_CASE("verify congruence") {
    auto r = run({"verify", "congruence", "--family", "ph3", "--m", "1", "--n-max", "200",
                  "--cache-dir", cache()});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);

    const auto out = scratch() / "strong.json";
    r = run({"verify", "congruence", "--family", "ph3", "--m", "1", "--n-max", "200",
             "--modulus-extra", "5", "--out", out.string(), "--cache-dir", cache()});
    CHECK(r.code == 1);
    CHECK(r.out.find("witness") != std::string::npos);
    const auto doc = read_json(out);
    const auto& c = doc["certificates"][0];
    CHECK(c["status"] == "fail");
    CHECK(c["witness"]["locator"] == "n");
    CHECK(c["witness"]["expected"].is_string());

    CHECK(run({"verify", "congruence", "--family", "ph3", "--m", "0"}).code == 2);
    CHECK(run({"verify", "nosuch"}).code == 2);
    CHECK(run({"verify", "congruence", "--family", "xx"}).code == 2);
    CHECK(run({"verify", "congruence", "--profile", "medium"}).code == 2);
}

TEST_CASE("certify") {
    CHECK(run({"certify", "pod"}).code == 2);
    const auto one = scratch() / "one.json", two = scratch() / "two.json";
    const std::vector<std::string> common = {"--cache-dir", cache(), "--jobs", "1"};
    auto args = [&](const fs::path& p) {
        std::vector<std::string> a = {"certify", "modeq", "--out", p.string()};
        a.insert(a.end(), common.begin(), common.end());
        return a;
    };
    CHECK(run(args(one)).code == 0);
    CHECK(run(args(two)).code == 0);
    const auto a = read_json(one), b = read_json(two);
    CHECK(canonical(a).dump() == canonical(b).dump());
    CHECK(a["certificates"].size() >= 4);
    for (const auto& c : a["certificates"]) {
        CHECK(c["status"] == "pass");
        CHECK(c.contains("tool_version"));
        CHECK(c.contains("timestamp"));
    }
    CHECK(run({"certify", "pod", "--out", (scratch() / "xi.json" / "dir.json").string()}).code == 2);
}

TEST_CASE("a corrupted table file is caught") {
    const auto good = scratch() / "good.json", bad = scratch() / "bad.json";
    REQUIRE(run({"table", "xi", "--max-i", "30", "--out", good.string()}).code == 0);
    auto doc = read_json(good);
    doc["rows"][4]["coeffs"][3] = "11";
    std::ofstream(bad) << doc.dump();
    const auto out = scratch() / "bad-cert.json";
    const auto r = run({"verify", "modeq", "--side", "xi", "--table", bad.string(), "--out",
                        out.string(), "--cache-dir", cache()});
    CHECK(r.code == 1);
    bool witnessed = false;
    const auto certs = read_json(out)["certificates"];
    for (const auto& c : certs)
        if (c["status"] == "fail") witnessed = witnessed || c.contains("witness");
    CHECK(witnessed);

    std::ofstream(bad) << "[1, 2";
    CHECK(run({"verify", "modeq", "--table", bad.string()}).code == 2);
}

TEST_CASE("a scan beyond the horizon cap is a precision failure") {
    const auto r = run({"verify", "congruence", "--family", "ph3", "--m", "6", "--n-max", "1000"});
    CHECK(r.code == 3);
    CHECK(r.err.find("precision") != std::string::npos);
}

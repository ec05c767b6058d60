#include "q3/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "q3/errors.hpp"
#include "q3/modeq.hpp"
#include "q3/suites.hpp"

namespace q3::cli {
namespace {

constexpr std::size_t kHumanDigits = 60;

struct Options {
    // expand
    std::string func;
    std::int64_t terms = 10;
    // table
    std::string side_pos;
    // verify / certify
    std::string suite;
    std::string profile = "quick";
    std::optional<std::int64_t> prec, max_i, max_m, n_max, m, i_check;
    std::string family, side, out, cache_dir, table;
    std::string format = "human";
    std::int64_t modulus_extra = 0;
    unsigned jobs = 0;
};

std::filesystem::path default_cache_dir(const Options& o, bool given) {
    if (given) return o.cache_dir;
    if (const char* env = std::getenv("Q3CONG_CACHE_DIR")) return env;
    return ".q3cong-cache";
}

LaurentSeries expand_series(const std::string& name, std::int64_t terms) {
    if (name == "ph3") return named_series(NamedSeries::F, terms);
    if (name == "ps3") return named_series(NamedSeries::G, terms);
    if (name == "phi") return phi_series(1, 1, terms);
    return named_series(parse_named_series(name), terms);
}

int cmd_expand(const Options& o, std::ostream& out) {
    if (o.terms < 1) throw UsageError("--terms must be at least 1");
    const LaurentSeries s = expand_series(o.func, o.terms);
    if (o.format == "json") {
        out << nlohmann::json{{"func", o.func}, {"terms", o.terms}, {"series", to_json(s)}}.dump(2)
            << '\n';
        return kExitPass;
    }
    const std::int64_t lo = std::min<std::int64_t>(0, s.effective_valuation());
    for (std::int64_t e = lo; e < s.precision(); ++e)
        out << e << '\t' << elide_decimal(s.coeff(e), kHumanDigits) << '\n';
    return kExitPass;
}

int cmd_table(const Options& o, bool cache_given, std::ostream& out) {
    std::string side_text = !o.side.empty() ? o.side : o.side_pos;
    if (side_text.empty()) side_text = "xi";
    if (!o.side.empty() && !o.side_pos.empty() && o.side != o.side_pos)
        throw UsageError("conflicting sides " + o.side_pos + " and " + o.side);
    const Side side = parse_side(side_text);
    const std::int64_t max_i = o.max_i.value_or(60);
    if (max_i < 3) throw UsageError("--max-i must be at least 3 (the recurrence needs rows 1-3)");
    const std::filesystem::path path =
        !o.out.empty() ? std::filesystem::path(o.out)
                       : table_cache_path(default_cache_dir(o, cache_given), side, max_i);
    const ModEqTable t = build_table(side, max_i);
    write_table(t, path);
    std::size_t digits = 0;
    for (const auto& row : t.rows)
        for (const auto& c : row.coeffs()) digits = std::max(digits, decimal_digits(c));
    if (o.format == "json") {
        out << nlohmann::json{{"side", to_string(side)},
                              {"rows", t.max_i()},
                              {"max_digits", digits},
                              {"path", path.string()}}
                   .dump(2)
            << '\n';
    } else {
        out << "side " << to_string(side) << ": " << t.max_i() << " rows, largest coefficient "
            << digits << " digits, written to " << path.string() << '\n';
    }
    return kExitPass;
}

std::string params_text(const nlohmann::json& p) {
    std::string s;
    for (auto it = p.begin(); it != p.end(); ++it) {
        if (!s.empty()) s += ' ';
        s += it.key() + '=' + (it->is_string() ? it->get<std::string>() : it->dump());
    }
    return s;
}

std::string elide_text(const std::string& v) {
    if (v.size() <= kHumanDigits) return v;
    try {
        return elide_decimal(from_decimal(v), kHumanDigits);
    } catch (const UsageError&) {
        return v.substr(0, kHumanDigits) + "...";
    }
}

void print_human(const std::vector<Certificate>& certs, std::ostream& out) {
    int pass = 0, fail = 0, error = 0;
    for (const auto& c : certs) {
        const char* tag = c.status == Status::pass ? "PASS " : c.status == Status::fail ? "FAIL " : "ERROR";
        (c.status == Status::pass ? pass : c.status == Status::fail ? fail : error)++;
        out << tag << "  " << c.claim_id << "  [" << params_text(c.params) << "]";
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
        if (c.witness) {
            out << "       witness: " << c.witness->locator << ' ' << c.witness->location.dump()
                << ": expected " << elide_text(c.witness->expected) << ", actual "
                << elide_text(c.witness->actual) << '\n';
        }
    }
    out << "summary: " << pass << " pass, " << fail << " fail, " << error << " error\n";
}

int exit_code(const std::vector<Certificate>& certs) {
    bool failed = false, precision = false, errored = false;
    for (const auto& c : certs) {
        if (c.status == Status::fail) failed = true;
        if (c.status == Status::error) {
            if (c.data.value("error_kind", "") == "precision")
                precision = true;
            else
                errored = true;
        }
    }
    if (failed) return kExitFail;
    if (precision) return kExitPrecision;
    if (errored) return kExitFail;
    return kExitPass;
}

int cmd_verify(const Options& o, bool certify, bool cache_given, std::ostream& out) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), o.suite) == names.end())
        throw UsageError("unknown suite: " + o.suite);
    if (certify && o.out.empty()) throw UsageError("certify requires --out");

    RunConfig cfg;
    if (o.profile == "quick")
        cfg.profile = Profile::quick;
    else if (o.profile == "full")
        cfg.profile = Profile::full;
    else
        throw UsageError("unknown profile: " + o.profile);
    cfg.prec = o.prec;
    cfg.max_i = o.max_i;
    cfg.max_m = o.max_m;
    cfg.n_max = o.n_max;
    cfg.m = o.m;
    cfg.i_check = o.i_check;
    if (!o.family.empty()) cfg.family = parse_family(o.family);
    if (!o.side.empty()) cfg.side = parse_side(o.side);
    if (o.modulus_extra < 0) throw UsageError("--modulus-extra must be nonnegative");
    cfg.modulus_extra = o.modulus_extra;
    cfg.cache_dir = default_cache_dir(o, cache_given);
    if (!o.table.empty()) cfg.table_file = o.table;
    cfg.jobs = o.jobs;

    const std::vector<Certificate> certs = run_suite(o.suite, cfg);

    nlohmann::json doc = {{"tool_version", tool_version()},
                          {"command", certify ? "certify" : "verify"},
                          {"suite", o.suite},
                          {"profile", o.profile}};
    doc["certificates"] = nlohmann::json::array();
    for (const auto& c : certs) doc["certificates"].push_back(to_json(c));

    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write " + o.out);
        f << doc.dump(2) << '\n';
        if (!f) throw UsageError("cannot write " + o.out);
    }
    if (o.format == "json")
        out << doc.dump(2) << '\n';
    else
        print_human(certs, out);
    return exit_code(certs);
}

void add_run_options(CLI::App* sub, Options& o) {
    sub->add_option("--profile", o.profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    sub->add_option("--prec", o.prec, "series horizon override");
    sub->add_option("--max-i", o.max_i, "modular-equation table size");
    sub->add_option("--max-m", o.max_m, "largest hat level m");
    sub->add_option("--n-max", o.n_max, "scan range 0..n_max");
    sub->add_option("--m", o.m, "scan a single level m");
    sub->add_option("--i-check", o.i_check, "rows certified by series");
    sub->add_option("--family", o.family, "ph3 or ps3");
    sub->add_option("--side", o.side, "xi or zeta");
    sub->add_option("--modulus-extra", o.modulus_extra, "scan modulo 3^(m+2+extra)");
    sub->add_option("--table", o.table, "certify a table file instead of building one");
    sub->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact q-series verification of internal congruences modulo powers of 3",
                 "q3cong"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "human or json")->check(CLI::IsMember({"human", "json"}));
        sub->add_option("--cache-dir", o.cache_dir, "table cache directory");
    };

    auto* expand = app.add_subcommand("expand", "print coefficients of a named series");
    expand->add_option("--func", o.func, "ph3, ps3, phi, phi_neg, psi, F, G, xi, zeta, gamma, delta")
        ->required();
    expand->add_option("--terms", o.terms, "number of terms (horizon)");
    common(expand);

    auto* table = app.add_subcommand("table", "build and store a modular-equation table");
    table->add_option("SIDE", o.side_pos, "xi or zeta");
    table->add_option("--side", o.side, "xi or zeta");
    table->add_option("--max-i", o.max_i, "largest row index");
    table->add_option("--out", o.out, "output path");
    common(table);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    auto* certify = app.add_subcommand("certify", "run a suite and write certificates");
    for (auto* sub : {verify, certify}) {
        sub->add_option("suite", o.suite, "modeq, newton, valuations, phi, hats, congruence, pod, problem, all")
            ->required();
        sub->add_option("--out", o.out, "certificate JSON path");
        add_run_options(sub, o);
        common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    auto given = [&](CLI::App* sub) { return sub->count("--cache-dir") > 0; };
    try {
        if (*expand) return cmd_expand(o, out);
        if (*table) return cmd_table(o, given(table), out);
        if (*verify) return cmd_verify(o, false, given(verify), out);
        if (*certify) return cmd_verify(o, true, given(certify), out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << '\n';
        return kExitPrecision;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}

}  // namespace q3::cli

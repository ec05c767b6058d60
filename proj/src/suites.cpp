#include "q3/suites.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>

#include "q3/errors.hpp"

namespace q3 {
namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<BigInt> big(std::initializer_list<long long> xs) {
    std::vector<BigInt> v;
    for (long long x : xs) v.emplace_back(std::to_string(x));
    return v;
}

// Phi_1, Phi_2, Phi_3 as printed.
const std::vector<IntPoly>& published_phis() {
    static const std::vector<IntPoly> p = {
        IntPoly(big({1, -3, 3})),
        IntPoly(big({1, -9, 36, -81, 135, -162, 81})),
        IntPoly(big({55, -2163, 34509, -330318, 2227338, -11501919, 47744397, -164234952,
                     477601434, -1189266543, 2554873083, -4751141589, 7644778785, -10594276335,
                     12526595811, -12440502369, 10115979435, -6457008150, 3013270470, -903981141,
                     129140163}))};
    return p;
}

std::optional<Witness> poly_witness(const IntPoly& want, const IntPoly& got, nlohmann::json where) {
    if (want == got) return std::nullopt;
    std::int64_t k = 0;
    while (want.coeff(k) == got.coeff(k)) ++k;
    where["k"] = k;
    return Witness{"coefficient", where, to_decimal(want.coeff(k)), to_decimal(got.coeff(k))};
}

// Shared, lazily built inputs.  Building happens under one lock.
class Context {
public:
    Context(const RunConfig& cfg, ResolvedParams p) : cfg_(cfg), p_(std::move(p)) {
        if (cfg_.table_file) {
            std::ifstream in(*cfg_.table_file, std::ios::binary);
            if (!in) throw UsageError("cannot read table file " + cfg_.table_file->string());
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw UsageError("table file is not JSON: " + std::string(e.what()));
            }
            try {
                file_table_ = std::make_shared<const ModEqTable>(table_from_json(j));
            } catch (const StructuralError& e) {
                throw UsageError(e.what());
            }
        }
    }

    const RunConfig& cfg() const { return cfg_; }
    const ResolvedParams& params() const { return p_; }
    const std::shared_ptr<const ModEqTable>& file_table() const { return file_table_; }

    std::shared_ptr<const ModEqTable> table(Side side) {
        std::lock_guard lock(mu_);
        if (file_table_ && file_table_->side == side) return file_table_;
        auto& slot = tables_[side];
        if (!slot)
            slot = std::make_shared<const ModEqTable>(
                load_or_build_table(side, p_.max_i, cfg_.cache_dir));
        return slot;
    }

    // Built once per family to the largest M any suite asks for; references stay valid.
    const PhiSequence& phi(Family f, std::int64_t m_max) {
        auto t = table(side_of(f));
        std::lock_guard lock(mu_);
        auto it = phis_.find(f);
        if (it == phis_.end()) {
            const std::int64_t target = std::max({m_max, p_.phi_m_max, p_.phi_series_m_max});
            it = phis_.emplace(f, build_phi(f, target, UOperator(t))).first;
        }
        if (it->second.max_m() < m_max)
            throw PreconditionError("Phi sequence built only through M = " +
                                    std::to_string(it->second.max_m()));
        return it->second;
    }

    std::vector<Side> sides() const {
        if (cfg_.side) return {*cfg_.side};
        if (file_table_) return {file_table_->side};
        return {Side::xi, Side::zeta};
    }

    std::vector<Family> families() const {
        if (cfg_.family) return {*cfg_.family};
        return {Family::ph3, Family::ps3};
    }

private:
    RunConfig cfg_;
    ResolvedParams p_;
    std::shared_ptr<const ModEqTable> file_table_;
    std::mutex mu_;
    std::map<Side, std::shared_ptr<const ModEqTable>> tables_;
    std::map<Family, PhiSequence> phis_;
};

struct Task {
    std::string claim_id;
    nlohmann::json params;
    std::function<Certificate()> run;
};

Certificate execute(const Task& t) {
    const auto t0 = Clock::now();
    Certificate c;
    try {
        c = t.run();
    } catch (const UsageError&) {
        throw;
    } catch (const PreconditionError&) {
        throw;
    } catch (const PrecisionError& e) {
        c = Certificate::errored(t.claim_id, t.params, e.what());
        c.data["error_kind"] = "precision";
    } catch (const Error& e) {
        c = Certificate::errored(t.claim_id, t.params, e.what());
        c.data["error_kind"] = "check";
    }
    c.timestamp = utc_timestamp();
    c.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    return c;
}

Certificate with_detail(Certificate c, std::string detail, std::string note = {}) {
    c.detail = std::move(detail);
    if (!note.empty()) c.horizon_note = std::move(note);
    return c;
}

// ---------------------------------------------------------------- suites

void modeq_tasks(Context& ctx, std::vector<Task>& out) {
    const auto& p = ctx.params();
    for (Side side : ctx.sides()) {
        const std::string s(to_string(side));
        const std::int64_t base_prec = ctx.cfg().prec.value_or(60);
        nlohmann::json bp = {{"side", s}, {"prec", base_prec}};
        out.push_back({"modular-equation-base-rows", bp, [side, base_prec, bp] {
                           const std::string id = "modular-equation-base-rows";
                           const std::string note = "rows compared with u3(x^i) through q^" +
                                                    std::to_string(base_prec - 1) +
                                                    "; a finite-order consistency check";
                           try {
                               base_rows(side, base_prec);
                           } catch (const CertificationError& e) {
                               return with_detail(
                                   Certificate::failed(id, bp,
                                                       Witness{"exponent", e.exponent(),
                                                               e.expected(), e.actual(), {}}),
                                   e.what(), note);
                           }
                           return with_detail(Certificate::passed(id, bp),
                                              "rows 1-3 match u3(x^i) and are rediscovered by "
                                              "an integral series fit",
                                              note);
                       }});

        nlohmann::json rp = {{"side", s}};
        out.push_back({"modular-equation-recurrence", rp, [&ctx, side, rp] {
                           const std::string id = "modular-equation-recurrence";
                           auto t = ctx.table(side);
                           nlohmann::json params = rp;
                           params["max_i"] = t->max_i();
                           const auto base = published_base_rows();
                           for (std::int64_t i = 1; i <= t->max_i(); ++i) {
                               IntPoly want;
                               if (i <= 3) {
                                   want = base[static_cast<std::size_t>(i - 1)];
                               } else {
                                   want = t->row(1) * (BigInt(3) * t->row(i - 1) -
                                                       BigInt(3) * t->row(i - 2) + t->row(i - 3));
                               }
                               if (auto w = poly_witness(want, t->row(i), {{"i", i}}))
                                   return with_detail(Certificate::failed(id, params, *w),
                                                      "row " + std::to_string(i) +
                                                          " breaks the recurrence");
                           }
                           return with_detail(Certificate::passed(id, params),
                                              "every row follows from rows 1-3 by the recurrence");
                       }});

        const std::int64_t i_check = p.i_check;
        nlohmann::json vp = {{"side", s}, {"i_check", i_check}};
        out.push_back({"modular-equation-rows-match-series", vp, [&ctx, side, i_check] {
                           auto t = ctx.table(side);
                           return verify_rows(*t, std::min(i_check, t->max_i()), ctx.cfg().prec);
                       }});

        for (std::int64_t i = 0; i <= 2; ++i) {
            nlohmann::json gp = {{"side", s}, {"i", i}, {"prec", 200}};
            out.push_back({"u-gamma-row-identity", gp,
                           [&ctx, side, i] { return u_gamma_row(*ctx.table(side), i, 200); }});
        }
    }
    if (ctx.sides().size() == 2) {
        nlohmann::json cp = {{"i_max", p.max_i}};
        out.push_back({"xi-zeta-tables-identical", cp, [&ctx] {
                           auto a = ctx.table(Side::xi);
                           auto b = ctx.table(Side::zeta);
                           return cross_side_check(*a, *b, std::min(a->max_i(), b->max_i()));
                       }});
    }
}

void newton_tasks(Context& ctx, std::vector<Task>& out) {
    for (Side side : ctx.sides()) {
        const std::int64_t prec = ctx.params().newton_prec;
        out.push_back({"vieta-symmetric-functions",
                       {{"side", to_string(side)}, {"prec", prec}},
                       [side, prec] { return newton_check(side, prec); }});
    }
}

void valuation_tasks(Context& ctx, std::vector<Task>& out) {
    for (Side side : ctx.sides()) {
        const std::int64_t i_max = ctx.params().max_i;
        nlohmann::json params = {{"side", to_string(side)}, {"i_max", i_max}};
        out.push_back({"valuation-bounds-modular-equation-rows", params, [&ctx, side, params] {
                           auto t = ctx.table(side);
                           return report_certificate("valuation-bounds-modular-equation-rows",
                                                     params,
                                                     valuation_check(*t, params["i_max"].get<std::int64_t>()));
                       }});
        out.push_back({"exact-minimal-degree-rows", params, [&ctx, side, params] {
                           auto t = ctx.table(side);
                           return report_certificate("exact-minimal-degree-rows", params,
                                                     min_degree_check(*t, params["i_max"].get<std::int64_t>()));
                       }});
    }
}

void phi_tasks(Context& ctx, std::vector<Task>& out) {
    const auto& p = ctx.params();
    for (Family f : ctx.families()) {
        const std::string fs(to_string(f));
        nlohmann::json pp = {{"family", fs}};
        out.push_back({"phi-published-coefficients", pp, [&ctx, f, pp] {
                           const auto& seq = ctx.phi(f, 3);
                           const auto& pub = published_phis();
                           for (std::int64_t m = 1; m <= 3; ++m)
                               if (auto w = poly_witness(pub[static_cast<std::size_t>(m - 1)],
                                                         seq.at(m), {{"M", m}}))
                                   return Certificate::failed("phi-published-coefficients", pp, *w);
                           return with_detail(Certificate::passed("phi-published-coefficients", pp),
                                              "Phi_1, Phi_2 and Phi_3 match the printed coefficients");
                       }});

        const std::int64_t top = p.phi_m_max;
        nlohmann::json dp = {{"family", fs}, {"M_max", top}};
        out.push_back({"phi-degree-law", dp, [&ctx, f, top, dp] {
                           const auto& seq = ctx.phi(f, top);
                           nlohmann::json degs = nlohmann::json::array();
                           for (std::int64_t m = 1; m <= top; ++m) degs.push_back(seq.at(m).degree());
                           for (std::int64_t m = 2; m <= top; ++m) {
                               const std::int64_t prev = seq.at(m - 1).degree();
                               const std::int64_t want = m % 2 == 0 ? 3 * prev : 3 * prev + 2;
                               if (seq.at(m).degree() != want) {
                                   Certificate c = Certificate::failed(
                                       "phi-degree-law", dp,
                                       Witness{"M", m, std::to_string(want),
                                               std::to_string(seq.at(m).degree())});
                                   c.data = {{"degrees", degs}};
                                   return c;
                               }
                           }
                           Certificate c = Certificate::passed("phi-degree-law", dp);
                           c.detail = "deg Phi_2m = 3 deg Phi_2m-1 and deg Phi_2m+1 = 3 deg Phi_2m + 2";
                           c.data = {{"degrees", degs}};
                           return c;
                       }});

        for (std::int64_t m = 1; m <= p.phi_series_m_max; ++m) {
            nlohmann::json sp = {{"family", fs}, {"M", m}};
            out.push_back({"phi-polynomial-matches-series", sp, [&ctx, f, m] {
                               const auto& seq = ctx.phi(f, m);
                               const std::int64_t prec = ctx.cfg().prec.value_or(
                                   std::max<std::int64_t>(3 * seq.at(m).degree(), 200));
                               return verify_phi_series(seq, m, prec);
                           }});
        }

        nlohmann::json rp = {{"family", fs}, {"M_max", top}};
        out.push_back({"u-operator-routes-agree", rp, [&ctx, f, top, rp] {
                           auto t = ctx.table(side_of(f));
                           const auto& seq = ctx.phi(f, top);
                           const TraceU trace(t->row(1));
                           std::int64_t compared = 0;
                           for (std::int64_t m = 1; m <= top; ++m) {
                               const IntPoly& in = seq.at(m);
                               if (in.degree() + 1 > t->max_i()) break;
                               if (auto w = poly_witness(u_poly(in, *t), trace.apply(in),
                                                         {{"M", m}, {"op", "U"}}))
                                   return Certificate::failed("u-operator-routes-agree", rp, *w);
                               if (auto w = poly_witness(u_gamma_poly(in, *t), trace.apply_gamma(in),
                                                         {{"M", m}, {"op", "U_gamma"}}))
                                   return Certificate::failed("u-operator-routes-agree", rp, *w);
                               ++compared;
                           }
                           Certificate c = Certificate::passed("u-operator-routes-agree", rp);
                           c.detail = "table and trace routes agree on " + std::to_string(compared) +
                                      " Phi inputs covered by the table";
                           c.data = {{"inputs_compared", compared}};
                           return c;
                       }});
    }
    if (ctx.families().size() == 2) {
        const std::int64_t top = p.phi_m_max;
        out.push_back({"ph-ps-phi-sequences-identical", {{"M_max", top}}, [&ctx, top] {
                           const PhiSequence a = ctx.phi(Family::ph3, top);
                           return phi_mirror_check(a, ctx.phi(Family::ps3, top));
                       }});
    }
}

void hat_tasks(Context& ctx, std::vector<Task>& out) {
    const std::int64_t m_max = ctx.params().hats_m_max;
    const Family f = ctx.cfg().family.value_or(Family::ph3);
    const std::string fs(to_string(f));
    auto hats = std::make_shared<std::optional<HatSequence>>();
    auto mu = std::make_shared<std::mutex>();
    auto get = [&ctx, f, m_max, hats, mu]() -> const HatSequence& {
        std::lock_guard lock(*mu);
        if (!*hats) {
            auto t = ctx.table(side_of(f));
            *hats = build_hats(ctx.phi(f, 2 * m_max + 1), m_max, UOperator(t), false);
        }
        return **hats;
    };
    nlohmann::json bp = {{"family", fs}, {"m_max", m_max}};
    out.push_back({"hat-valuation-bounds", bp, [get, m_max, bp] {
                       const HatSequence& h = get();
                       Certificate c = report_certificate("hat-valuation-bounds", bp,
                                                          hat_bound_check(h, m_max));
                       nlohmann::json degs = nlohmann::json::array();
                       for (std::int64_t m = 1; m <= m_max; ++m)
                           degs.push_back({{"m", m},
                                           {"deg_hat", h.hats[static_cast<std::size_t>(m)].degree()},
                                           {"deg_u_hat", h.utilde[static_cast<std::size_t>(m)].degree()}});
                       c.data["degrees"] = degs;
                       if (c.ok())
                           c.detail = "coefficient bounds, both combination congruences" +
                                      std::string(h.family == Family::ph3 ? " and the zero anchor"
                                                                          : "") +
                                      " hold for m <= " + std::to_string(m_max);
                       return c;
                   }});
    if (m_max >= 2) {
        nlohmann::json tp = {{"family", fs}, {"m_max", m_max - 1}};
        out.push_back({"hat-recursion-two-paths", tp, [&ctx, get, f, m_max] {
                           const HatSequence& h = get();
                           auto t = ctx.table(side_of(f));
                           return two_path_hat_check(ctx.phi(f, 2 * m_max + 1), h, m_max - 1,
                                                     UOperator(t));
                       }});
    }
}

void congruence_tasks(Context& ctx, std::vector<Task>& out) {
    const auto& p = ctx.params();
    const std::int64_t extra = ctx.cfg().modulus_extra;
    for (Family f : ctx.families()) {
        std::int64_t top_m = 1;
        for (auto m : p.scan_ms) top_m = std::max(top_m, m);
        auto gf = std::make_shared<std::optional<LaurentSeries>>();
        auto mu = std::make_shared<std::mutex>();
        const std::int64_t horizon = scan_horizon(f, top_m, p.n_max);
        for (std::int64_t m : p.scan_ms) {
            nlohmann::json sp = {{"family", to_string(f)},
                                 {"m", m},
                                 {"n_max", p.n_max},
                                 {"modulus_extra", extra}};
            out.push_back({"internal-congruence-scan", sp, [f, m, extra, sp, gf, mu, horizon,
                                                            n_max = p.n_max] {
                               {
                                   std::lock_guard lock(*mu);
                                   if (!*gf) *gf = generating_function(f, horizon);
                               }
                               const CongruenceScan s = scan_congruence(f, m, n_max, extra, **gf);
                               Certificate c;
                               if (s.ok()) {
                                   c = Certificate::passed("internal-congruence-scan", sp);
                               } else {
                                   const auto& v = s.violations.front();
                                   c = Certificate::failed(
                                       "internal-congruence-scan", sp,
                                       Witness{"n", v.n, to_decimal(v.low), to_decimal(v.high),
                                               {{"nu_difference", v.nu.to_string()},
                                                {"required", s.modulus_exponent}}});
                               }
                               c.detail = "c(" + std::to_string(s.high_step) + "n+" +
                                          std::to_string(s.high_offset) + ") vs c(" +
                                          std::to_string(s.low_step) + "n+" +
                                          std::to_string(s.low_offset) + ") mod 3^" +
                                          std::to_string(s.modulus_exponent) + ", 0 <= n <= " +
                                          std::to_string(n_max);
                               c.horizon_note = "checked for 0 <= n <= " + std::to_string(n_max) +
                                                " only";
                               c.data = to_json(s);
                               return c;
                           }});
        }
    }
    if (!ctx.cfg().family && extra == 0) {
        const std::int64_t n_max = p.n_max;
        nlohmann::json ap = {{"n_max", n_max}};
        out.push_back({"attributed-mod27-readings", ap, [n_max, ap] {
                           const auto checks = attributed_mod27_readings(n_max);
                           nlohmann::json readings = nlohmann::json::array();
                           for (const auto& c : checks)
                               readings.push_back(
                                   {{"reading", c.label},
                                    {"holds", c.ok()},
                                    {"failures", c.failures},
                                    {"first_failure", c.first_failure ? nlohmann::json(*c.first_failure)
                                                                      : nlohmann::json(nullptr)}});
                           const auto& ps = checks[1];
                           Certificate cert =
                               ps.ok() ? Certificate::passed("attributed-mod27-readings", ap)
                                       : Certificate::failed("attributed-mod27-readings", ap,
                                                             Witness{"n", *ps.first_failure,
                                                                     "0 mod 27", "nonzero", {}});
                           cert.detail = std::string("ps3 reading ") +
                                         (ps.ok() ? "holds" : "fails") + "; ph3 reading " +
                                         (checks[0].ok() ? "holds" : "fails");
                           cert.data = {{"readings", readings}};
                           return cert;
                       }});
    }
}

void pod_tasks(Context& ctx, std::vector<Task>& out) {
    const std::int64_t n = ctx.params().pod_n_max;
    out.push_back({"ps3-equals-signed-pod3", {{"n_max", n}}, [n] { return pod_cross_check(n); }});
}

void problem_tasks(Context& ctx, std::vector<Task>& out) {
    const std::int64_t m = ctx.params().problem_m_max;
    out.push_back({"ps3-offset-values-probe", {{"m_max", m}}, [m] { return probe_open_problem(m); }});
}

using SuiteFn = void (*)(Context&, std::vector<Task>&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> s = {
        {"modeq", modeq_tasks},   {"newton", newton_tasks},         {"valuations", valuation_tasks},
        {"phi", phi_tasks},       {"hats", hat_tasks},              {"congruence", congruence_tasks},
        {"pod", pod_tasks},       {"problem", problem_tasks}};
    return s;
}

}  // namespace

ResolvedParams resolve(const RunConfig& cfg) {
    const bool full = cfg.profile == Profile::full;
    ResolvedParams p;
    p.max_i = cfg.max_i.value_or(full ? 60 : 30);
    p.i_check = cfg.i_check.value_or(full ? 12 : 8);
    p.hats_m_max = cfg.max_m.value_or(full ? 4 : 3);
    p.phi_m_max = std::max<std::int64_t>(2 * p.hats_m_max + 1, 3);
    p.phi_series_m_max = full ? 5 : 3;
    if (cfg.m)
        p.scan_ms = {*cfg.m};
    else if (full)
        p.scan_ms = {1, 2};
    else
        p.scan_ms = {1};
    p.n_max = cfg.n_max.value_or(full ? 200 : 100);
    p.pod_n_max = cfg.n_max.value_or(500);
    p.problem_m_max = full ? 3 : 2;
    p.newton_prec = cfg.prec.value_or(300);

    if (p.max_i < 3) throw UsageError("--max-i must be at least 3");
    if (p.i_check < 0) throw UsageError("--i-check must be nonnegative");
    if (p.hats_m_max < 1) throw UsageError("--max-m must be at least 1");
    if (p.n_max < 0) throw UsageError("--n-max must be nonnegative");
    for (auto m : p.scan_ms)
        if (m < 1) throw UsageError("--m must be at least 1 (the congruences start at m = 1)");
    if (cfg.prec && *cfg.prec < 1) throw UsageError("--prec must be positive");
    return p;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : suites()) n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

Certificate report_certificate(std::string claim_id, nlohmann::json params,
                               const ValuationReport& rep) {
    nlohmann::json failures = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.failures.size() && k < 20; ++k)
        failures.push_back(to_json(rep.failures[k]));
    nlohmann::json data = {{"range", {rep.first, rep.last}},
                           {"checked", rep.checked},
                           {"failure_count", rep.failures.size()},
                           {"failures", failures}};
    if (rep.ok()) {
        Certificate c = Certificate::passed(std::move(claim_id), std::move(params));
        c.data = std::move(data);
        return c;
    }
    const auto& f = rep.failures.front();
    Witness w{"coefficient",
              {{"row", f.row}, {"index", f.index}, {"check", f.check}},
              (f.exact ? "= " : ">= ") + std::to_string(f.required),
              f.value.empty() ? f.observed.to_string() : f.observed.to_string() + " (value " + f.value + ")",
              {}};
    Certificate c = Certificate::failed(std::move(claim_id), std::move(params), std::move(w));
    c.detail = std::to_string(rep.failures.size()) + " of " + std::to_string(rep.checked) +
               " checks failed";
    c.data = std::move(data);
    return c;
}

std::vector<Certificate> run_suite(const std::string& suite, const RunConfig& cfg) {
    Context ctx(cfg, resolve(cfg));
    std::vector<Task> tasks;
    bool found = false;
    for (const auto& [name, fn] : suites()) {
        if (suite == "all" || suite == name) {
            fn(ctx, tasks);
            found = true;
        }
    }
    if (!found) throw UsageError("unknown suite: " + suite);
    std::vector<Certificate> certs(tasks.size());
    parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) { certs[i] = execute(tasks[i]); });
    return certs;
}

}  // namespace q3

#include "spectra/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "spectra/verify.hpp"

namespace spectra::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
    uint64_t p = 0;
    uint32_t n = 1;
    std::optional<uint64_t> d;
    std::string c = "-1";
    uint64_t qmax = 0;
    std::string format = "json";
    unsigned threads = 0;  // 0 = SPECTRA_THREADS, then hardware concurrency
    uint64_t chi_table_threshold = uint64_t{1} << 21;
    std::string method = "both";
    bool include_c_zero = false;
};

FieldOptions field_options(const RunConfig& cfg) {
    FieldOptions opts;
    opts.chi_table_threshold = cfg.chi_table_threshold;
    return opts;
}

uint64_t default_exponent(const Field& field) {
    if (field.q() < 5) fail(Errc::BadConfig, "default exponent (q-3)/2 vanishes for q = 3");
    return (field.q() - 3) / 2;
}

unsigned resolve_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("SPECTRA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

ordered_json omega_json(const std::map<uint32_t, uint64_t>& omega) {
    ordered_json out = ordered_json::object();
    for (auto [i, w] : omega) out[std::to_string(i)] = w;
    return out;
}

std::string omega_csv(const std::map<uint32_t, uint64_t>& omega) {
    std::string out;
    for (auto [i, w] : omega) {
        if (!out.empty()) out += ';';
        out += std::to_string(i) + ":" + std::to_string(w);
    }
    return out;
}

std::string classification_of(uint32_t uniformity) {
    if (uniformity == 1) return "PN";
    if (uniformity == 2) return "APN";
    return std::to_string(uniformity) + "-uniform";
}

void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

// ---- verify emission (shared by verify and sweep)

ordered_json verify_json(const VerifyReport& rep, const char* command = nullptr) {
    ordered_json j;
    if (command) j["command"] = command;
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["q"] = rep.q;
    j["d"] = rep.d;
    j["chi5"] = rep.chi5;
    j["lambda1"] = rep.lambda1;
    j["lambda2"] = rep.lambda2;
    j["lambda"] = rep.lambda;
    j["spectrum"] = omega_json(rep.spectrum.omega);
    j["c_spectrum"] = omega_json(rep.c_spectrum.omega);
    j["uniformity"] = ordered_json{{"differential", rep.uniformity.differential},
                                   {"minus1", rep.uniformity.minus1},
                                   {"max_c", rep.uniformity.max_c},
                                   {"max_c_witness", rep.uniformity.max_c_witness}};
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(
            ordered_json{{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    }
    j["checks"] = std::move(checks);
    j["status"] = rep.all_pass() ? "pass" : "fail";
    return j;
}

const char* kVerifyCsvHeader =
    "p,n,q,d,chi5,lambda1,lambda2,lambda,diff_uniformity,minus1_uniformity,max_c_uniformity,"
    "checks_passed,checks_total,status\n";

std::string verify_csv_row(const VerifyReport& rep) {
    size_t passed = 0;
    for (const auto& c : rep.checks) passed += c.pass ? 1 : 0;
    std::ostringstream row;
    row << rep.p << ',' << rep.n << ',' << rep.q << ',' << rep.d << ',' << rep.chi5 << ','
        << rep.lambda1 << ',' << rep.lambda2 << ',' << rep.lambda << ','
        << rep.uniformity.differential << ',' << rep.uniformity.minus1 << ','
        << rep.uniformity.max_c << ',' << passed << ',' << rep.checks.size() << ','
        << (rep.all_pass() ? "pass" : "fail") << '\n';
    return row.str();
}

void verify_text(std::ostream& out, const VerifyReport& rep) {
    out << "field F_" << rep.q << " (p=" << rep.p << ", n=" << rep.n << "), d=" << rep.d
        << ", chi(5)=" << rep.chi5 << ", lambda=" << rep.lambda << " (" << rep.lambda1 << " + "
        << rep.lambda2 << ")\n";
    out << "spectrum " << format_omega(rep.spectrum.omega) << "  (-1)-spectrum "
        << format_omega(rep.c_spectrum.omega) << "\n";
    for (const auto& c : rep.checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.lhs << " vs " << c.rhs
            << "  (" << c.ms << " ms)\n";
    }
    out << "overall: " << (rep.all_pass() ? "pass" : "fail") << "\n";
}

// ---- commands

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const Field field(cfg.p, cfg.n, field_options(cfg));
    const uint64_t d = cfg.d ? *cfg.d : default_exponent(field);
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const Spectrum brute = spectrum_bruteforce(field, d);
    const auto lam = lambda_report(field, SumMethod::Direct);
    const int chi5 = field.chi(field.embed(5));

    const bool theorem_range = !cfg.d.has_value() && field.q() % 4 == 3 && field.q() > 7 &&
                               field.q() != 27;
    std::optional<Spectrum> closed;
    std::optional<bool> agreement;
    if (theorem_range) {
        closed = spectrum_closed_form(field);
        agreement = spectra_equal(*closed, brute);
    }

    if (cfg.format == "json") {
        ordered_json j;
        j["command"] = "spectrum";
        j["p"] = field.p();
        j["n"] = field.n();
        j["q"] = field.q();
        j["d"] = d;
        j["chi5"] = chi5;
        j["lambda1"] = lam.lambda1;
        j["lambda2"] = lam.lambda2;
        j["lambda"] = lam.lambda;
        j["omega"] = omega_json(brute.omega);
        j["omega_closed"] = closed ? omega_json(closed->omega) : ordered_json(nullptr);
        j["uniformity"] = brute.uniformity;
        j["classification"] = classification_of(brute.uniformity);
        j["provenance"] = provenance_name(brute.provenance);
        j["agreement"] = agreement ? ordered_json(*agreement) : ordered_json(nullptr);
        emit_json(out, j);
    } else if (cfg.format == "csv") {
        out << "p,n,q,d,chi5,lambda,uniformity,classification,provenance,agreement,omega\n";
        out << field.p() << ',' << field.n() << ',' << field.q() << ',' << d << ',' << chi5 << ','
            << lam.lambda << ',' << brute.uniformity << ',' << classification_of(brute.uniformity)
            << ',' << provenance_name(brute.provenance) << ','
            << (agreement ? (*agreement ? "true" : "false") : "n/a") << ','
            << omega_csv(brute.omega) << '\n';
    } else {
        out << "F_" << field.q() << " (p=" << field.p() << ", n=" << field.n() << "), x^" << d
            << "\n";
        out << "chi(5) = " << chi5 << ", lambda = " << lam.lambda << " (" << lam.lambda1 << " + "
            << lam.lambda2 << ")\n";
        for (auto [i, w] : brute.omega) out << "  omega[" << i << "] = " << w << "\n";
        out << "uniformity " << brute.uniformity << " (" << classification_of(brute.uniformity)
            << ")\n";
        if (agreement)
            out << "closed form " << (*agreement ? "agrees" : "DISAGREES") << ": "
                << format_omega(closed->omega) << "\n";
    }
    return agreement.value_or(true) ? 0 : 1;
}

int cmd_cspectrum(const RunConfig& cfg, std::ostream& out) {
    const Field field(cfg.p, cfg.n, field_options(cfg));
    const uint64_t d = cfg.d ? *cfg.d : default_exponent(field);
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const FieldElem c = field.parse(cfg.c);
    const uint64_t c_ix = field.index(c);
    const CDiffRow row = cddt_row(field, d, c);

    std::map<uint32_t, uint64_t> omega;
    {
        const uint32_t max = *std::max_element(row.row.begin(), row.row.end());
        std::vector<uint64_t> hist(max + 1, 0);
        for (uint32_t v : row.row) ++hist[v];
        for (uint32_t i = 0; i <= max; ++i)
            if (hist[i]) omega.emplace(i, hist[i]);
    }

    const bool is_minus1 = c_ix == field.neg_one_ix();
    std::optional<CSpectrum> closed;
    std::optional<bool> agreement;
    if (is_minus1 && !cfg.d.has_value() && field.q() % 4 == 3 && field.q() > 3) {
        closed = minus1_spectrum_closed_form(field);
        agreement = closed->omega == omega && closed->uniformity == row.uniformity;
    }

    std::optional<uint32_t> bound;
    std::optional<bool> bound_ok;
    if (c_ix != 0 && c_ix != 1 && !is_minus1) {
        bound = field.q() % 4 == 3 ? 5 : 9;
        bound_ok = row.uniformity <= *bound;
    }

    if (cfg.format == "json") {
        ordered_json j;
        j["command"] = "cspectrum";
        j["p"] = field.p();
        j["n"] = field.n();
        j["q"] = field.q();
        j["d"] = d;
        j["c"] = field.format(c);
        j["gcd_floor"] = row.gcd_floor;
        j["omega"] = omega_json(omega);
        j["omega_closed"] = closed ? omega_json(closed->omega) : ordered_json(nullptr);
        j["uniformity"] = row.uniformity;
        j["agreement"] = agreement ? ordered_json(*agreement) : ordered_json(nullptr);
        j["bound"] = bound ? ordered_json(*bound) : ordered_json(nullptr);
        j["bound_ok"] = bound_ok ? ordered_json(*bound_ok) : ordered_json(nullptr);
        emit_json(out, j);
    } else if (cfg.format == "csv") {
        out << "p,n,q,d,c,gcd_floor,uniformity,agreement,bound_ok,omega\n";
        out << field.p() << ',' << field.n() << ',' << field.q() << ',' << d << ','
            << field.format(c) << ',' << row.gcd_floor << ',' << row.uniformity << ','
            << (agreement ? (*agreement ? "true" : "false") : "n/a") << ','
            << (bound_ok ? (*bound_ok ? "true" : "false") : "n/a") << ',' << omega_csv(omega)
            << '\n';
    } else {
        out << "F_" << field.q() << ", x^" << d << ", c = " << field.format(c) << "\n";
        for (auto [i, w] : omega) out << "  omega[" << i << "] = " << w << "\n";
        out << "uniformity " << row.uniformity << " (gcd floor " << row.gcd_floor << ")\n";
        if (agreement) out << "closed form " << (*agreement ? "agrees" : "DISAGREES") << "\n";
        if (bound_ok)
            out << "bound <= " << *bound << ": " << (*bound_ok ? "holds" : "VIOLATED") << "\n";
    }
    return agreement.value_or(true) && bound_ok.value_or(true) ? 0 : 1;
}

int cmd_charsum(const RunConfig& cfg, std::ostream& out) {
    const Field field(cfg.p, cfg.n, field_options(cfg));
    std::optional<CharSumReport> direct, recur;
    if (cfg.method == "direct" || cfg.method == "both")
        direct = lambda_report(field, SumMethod::Direct);
    if (cfg.method == "recurrence" || cfg.method == "both")
        recur = lambda_report(field, SumMethod::Recurrence);
    const CharSumReport& primary = direct ? *direct : *recur;
    std::optional<bool> agreement;
    if (direct && recur)
        agreement = direct->lambda1 == recur->lambda1 && direct->lambda2 == recur->lambda2;

    if (cfg.format == "json") {
        ordered_json j;
        j["command"] = "charsum";
        j["p"] = field.p();
        j["n"] = field.n();
        j["q"] = field.q();
        j["method"] = cfg.method;
        j["lambda1"] = primary.lambda1;
        j["lambda2"] = primary.lambda2;
        j["lambda"] = primary.lambda;
        j["hasse_margin1"] = primary.hasse_margin1;
        j["hasse_margin2"] = primary.hasse_margin2;
        j["agreement"] = agreement ? ordered_json(*agreement) : ordered_json(nullptr);
        emit_json(out, j);
    } else if (cfg.format == "csv") {
        out << "p,n,q,method,lambda1,lambda2,lambda,hasse_margin1,hasse_margin2,agreement\n";
        out << field.p() << ',' << field.n() << ',' << field.q() << ',' << cfg.method << ','
            << primary.lambda1 << ',' << primary.lambda2 << ',' << primary.lambda << ','
            << primary.hasse_margin1 << ',' << primary.hasse_margin2 << ','
            << (agreement ? (*agreement ? "true" : "false") : "n/a") << '\n';
    } else {
        out << "F_" << field.q() << ": lambda1 = " << primary.lambda1
            << ", lambda2 = " << primary.lambda2 << ", lambda = " << primary.lambda << " ("
            << sum_method_name(primary.method) << ")\n";
        out << "Hasse margins: " << primary.hasse_margin1 << ", " << primary.hasse_margin2 << "\n";
        if (agreement) out << "methods " << (*agreement ? "agree" : "DISAGREE") << "\n";
    }
    return agreement.value_or(true) ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const Field field(cfg.p, cfg.n, field_options(cfg));
    VerifyOptions vopts;
    vopts.include_c_zero = cfg.include_c_zero;
    const VerifyReport rep = verify_field(field, vopts);
    if (cfg.format == "json") {
        emit_json(out, verify_json(rep, "verify"));
    } else if (cfg.format == "csv") {
        out << kVerifyCsvHeader << verify_csv_row(rep);
    } else {
        verify_text(out, rep);
    }
    return rep.all_pass() ? 0 : 1;
}

struct SweepEntry {
    uint64_t p;
    uint32_t n;
    uint64_t q;
};

std::vector<SweepEntry> sweep_fields(uint64_t qmax) {
    std::vector<SweepEntry> out;
    for (uint64_t p = 3; p <= qmax; p += 2) {
        if (!is_prime(p)) continue;
        uint64_t q = p;
        uint32_t n = 1;
        while (q <= qmax) {
            if (q % 4 == 3 && q >= 7) out.push_back({p, n, q});
            if (q > qmax / p) break;
            q *= p;
            ++n;
        }
    }
    std::sort(out.begin(), out.end(), [](const SweepEntry& a, const SweepEntry& b) { return a.q < b.q; });
    return out;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.qmax < 7) fail(Errc::BadConfig, "sweep requires --qmax >= 7");
    const auto fields = sweep_fields(cfg.qmax);
    VerifyOptions vopts;
    vopts.include_c_zero = cfg.include_c_zero;

    std::vector<std::optional<VerifyReport>> reports(fields.size());
    std::vector<std::string> failures(fields.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= fields.size()) return;
            try {
                const Field field(fields[i].p, fields[i].n, field_options(cfg));
                reports[i] = verify_field(field, vopts);
            } catch (const Error& e) {
                failures[i] = e.what();
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const unsigned nthreads = static_cast<unsigned>(
        std::min<size_t>(resolve_threads(cfg), std::max<size_t>(fields.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    size_t passed = 0, failed = 0;
    if (cfg.format == "csv") out << kVerifyCsvHeader;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (reports[i] && reports[i]->all_pass())
            ++passed;
        else
            ++failed;
        if (cfg.format == "json") {
            if (reports[i]) {
                out << verify_json(*reports[i]).dump() << "\n";
            } else {
                ordered_json j{{"p", fields[i].p}, {"n", fields[i].n}, {"q", fields[i].q},
                               {"status", "error"}, {"error", failures[i]}};
                out << j.dump() << "\n";
            }
        } else if (cfg.format == "csv") {
            if (reports[i])
                out << verify_csv_row(*reports[i]);
            else
                out << fields[i].p << ',' << fields[i].n << ',' << fields[i].q
                    << ",,,,,,,,,0,0,error\n";
        } else {
            if (reports[i]) {
                size_t ok = 0;
                for (const auto& c : reports[i]->checks) ok += c.pass ? 1 : 0;
                out << "q=" << fields[i].q << " p=" << fields[i].p << " n=" << fields[i].n << ": "
                    << (reports[i]->all_pass() ? "pass" : "FAIL") << " (" << ok << "/"
                    << reports[i]->checks.size() << " checks)";
                if (const CheckResult* f = reports[i]->first_failure())
                    out << "  first failure: " << f->name;
                out << "\n";
            } else {
                out << "q=" << fields[i].q << ": error " << failures[i] << "\n";
            }
        }
    }
    if (cfg.format == "json") {
        ordered_json summary{{"summary", ordered_json{{"qmax", cfg.qmax},
                                                      {"fields", fields.size()},
                                                      {"passed", passed},
                                                      {"failed", failed}}}};
        out << summary.dump() << "\n";
    } else if (cfg.format == "csv") {
        err << "sweep: " << passed << "/" << fields.size() << " fields passed\n";
    } else {
        out << "sweep: " << passed << "/" << fields.size() << " fields passed\n";
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"differential and c-differential spectra of power maps over F_{p^n}"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_field) {
        if (with_field) {
            sub->add_option("--p", cfg.p, "field characteristic (odd prime)")->required();
            sub->add_option("--n", cfg.n, "extension degree (default 1)");
        }
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--chi-table-threshold", cfg.chi_table_threshold,
                        "max q for the precomputed square table");
    };

    CLI::App* sp = app.add_subcommand("spectrum", "differential spectrum of x^d (default d = (q-3)/2)");
    add_common(sp, true);
    sp->add_option("--d", cfg.d, "exponent override");

    CLI::App* csp = app.add_subcommand("cspectrum", "c-differential row histogram of x^d");
    add_common(csp, true);
    csp->add_option("--d", cfg.d, "exponent override");
    csp->add_option("--c", cfg.c, "c as coefficient list or bare integer (default -1)");

    CLI::App* ch = app.add_subcommand("charsum", "lambda character sums");
    add_common(ch, true);
    ch->add_option("--method", cfg.method, "direct | recurrence | both")
        ->check(CLI::IsMember({"direct", "recurrence", "both"}));

    CLI::App* ve = app.add_subcommand("verify", "run every identity check for one field");
    add_common(ve, true);
    ve->add_flag("--include-c-zero", cfg.include_c_zero, "include c = 0 in the bound sweep");

    CLI::App* sw = app.add_subcommand("sweep",
                                      "verify every prime power q = 3 (mod 4), 7 <= q <= qmax");
    add_common(sw, false);
    sw->add_option("--qmax", cfg.qmax, "sweep budget")->required();
    sw->add_option("--threads", cfg.threads, "worker count (default SPECTRA_THREADS or cores)");
    sw->add_flag("--include-c-zero", cfg.include_c_zero, "include c = 0 in the bound sweeps");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(cfg, out);
        if (csp->parsed()) return cmd_cspectrum(cfg, out);
        if (ch->parsed()) return cmd_charsum(cfg, out);
        if (ve->parsed()) return cmd_verify(cfg, out);
        if (sw->parsed()) return cmd_sweep(cfg, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace spectra::cli

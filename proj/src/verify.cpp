#include "spectra/verify.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <sstream>

namespace spectra {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string lhs;
    std::string rhs;
};

std::string str_of(uint64_t v) { return std::to_string(v); }
std::string str_of(int64_t v) { return std::to_string(v); }

}  // namespace

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const CheckResult* VerifyReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

std::string format_omega(const std::map<uint32_t, uint64_t>& omega) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (auto [i, w] : omega) {
        if (!first) out << ',';
        first = false;
        out << i << ':' << w;
    }
    out << '}';
    return out.str();
}

VerifyReport verify_field(const Field& field, const VerifyOptions& opts) {
    const uint64_t q = field.q();
    if (q % 4 != 3) fail(Errc::WrongCongruence, "verify requires q = 3 (mod 4)");
    if (q < 7) fail(Errc::OutOfTheoremRange, "verify requires q >= 7");

    VerifyReport rep;
    rep.p = field.p();
    rep.n = field.n();
    rep.q = q;
    rep.d = (q - 3) / 2;
    const bool in_theorem4_range = q > 7 && q != 27;

    auto run = [&](const std::string& name, const std::function<Outcome()>& fn) {
        CheckResult r;
        r.name = name;
        const auto t0 = Clock::now();
        try {
            Outcome o = fn();
            r.pass = o.pass;
            r.lhs = std::move(o.lhs);
            r.rhs = std::move(o.rhs);
        } catch (const Error& e) {
            r.pass = false;
            r.lhs = errc_name(e.code());
            r.rhs = e.what();
        }
        r.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        rep.checks.push_back(std::move(r));
    };

    // shared intermediates; absent when their producing check failed
    std::optional<CharSumReport> lam_direct, lam_recur;
    std::optional<std::vector<uint32_t>> row;
    std::optional<Spectrum> spec;
    std::optional<uint64_t> n4_brute_total;
    std::optional<ClassCounts> classes_brute;
    std::optional<uint64_t> N4b;
    std::optional<CSpectrum> m1_spec;

    run("lambda_method_agreement", [&]() -> Outcome {
        lam_direct = lambda_report(field, SumMethod::Direct);
        lam_recur = lambda_report(field, SumMethod::Recurrence);
        rep.lambda1 = lam_direct->lambda1;
        rep.lambda2 = lam_direct->lambda2;
        rep.lambda = lam_direct->lambda;
        std::ostringstream l, r;
        l << "direct (" << lam_direct->lambda1 << "," << lam_direct->lambda2 << ")";
        r << "recurrence (" << lam_recur->lambda1 << "," << lam_recur->lambda2 << ")";
        return {lam_direct->lambda1 == lam_recur->lambda1 &&
                    lam_direct->lambda2 == lam_recur->lambda2,
                l.str(), r.str()};
    });
    rep.chi5 = field.chi(field.embed(5));

    run("hasse_lambda1", [&]() -> Outcome {
        if (!lam_direct) return {false, "unavailable", "lambda report failed"};
        const __int128 sq = static_cast<__int128>(lam_direct->lambda1) * lam_direct->lambda1;
        return {sq <= static_cast<__int128>(4) * q,
                "lambda1^2 = " + str_of(static_cast<int64_t>(sq)), "4q = " + str_of(4 * q)};
    });
    run("hasse_lambda2", [&]() -> Outcome {
        if (!lam_direct) return {false, "unavailable", "lambda report failed"};
        const __int128 sq = static_cast<__int128>(lam_direct->lambda2) * lam_direct->lambda2;
        return {sq <= static_cast<__int128>(4) * q,
                "lambda2^2 = " + str_of(static_cast<int64_t>(sq)), "4q = " + str_of(4 * q)};
    });

    {
        std::optional<CharIdentities> ids;
        run("lemma4_i", [&]() -> Outcome {
            ids = check_char_identities(field);
            return {ids->i_ok, str_of(ids->sum_i), "0"};
        });
        run("lemma4_ii", [&]() -> Outcome {
            if (!ids) return {false, "unavailable", "identity sums failed"};
            return {ids->ii_ok, str_of(ids->sum_ii), "0"};
        });
        run("lemma4_iii", [&]() -> Outcome {
            if (!ids) return {false, "unavailable", "identity sums failed"};
            return {ids->iii_ok, str_of(ids->sum_iii), "lambda2 - 1 = " + str_of(ids->lambda2 - 1)};
        });
    }

    run("eq1_moments", [&]() -> Outcome {
        row = ddt_row(field, rep.d);
        spec = spectrum_from_row(field, rep.d, *row);  // throws on moment violation
        rep.spectrum = *spec;
        return {true, format_omega(spec->omega), "moments q = " + str_of(q)};
    });

    run("eq3_second_moment", [&]() -> Outcome {
        if (!spec) return {false, "unavailable", "spectrum failed"};
        N4b = N4_bruteforce(field, rep.d);
        return {moment_check(*spec, *N4b), "sum i^2 omega_i = " + str_of(second_moment(*spec)),
                "(N4 - q^2)/(q-1) with N4 = " + str_of(*N4b)};
    });

    run("theorem3_N4", [&]() -> Outcome {
        if (!N4b) return {false, "unavailable", "pair-map count failed"};
        const uint64_t closed = N4_closed(field);
        return {closed == *N4b, "closed " + str_of(closed), "brute " + str_of(*N4b)};
    });

    run("theorem2_n4_total", [&]() -> Outcome {
        classes_brute = n4_class_counts_bruteforce(field);
        n4_brute_total = classes_brute->total;
        const uint64_t closed = n4_total_closed(field);
        return {closed == *n4_brute_total, "closed " + str_of(closed),
                "brute " + str_of(*n4_brute_total)};
    });

    run("theorem2_class_counts", [&]() -> Outcome {
        if (!classes_brute) return {false, "unavailable", "brute classes failed"};
        const ClassCounts closed = n4_class_counts_closed(field);
        std::ostringstream l, r;
        for (int i = 0; i < 8; ++i) {
            l << (i ? "," : "") << classes_brute->counts[i];
            r << (i ? "," : "") << closed.counts[i];
        }
        return {classes_brute->counts == closed.counts, "brute " + l.str(), "closed " + r.str()};
    });

    run("prop1_symmetries", [&]() -> Outcome {
        if (!classes_brute) return {false, "unavailable", "brute classes failed"};
        const ClassCounts& c = *classes_brute;
        const bool ok = c.at(1, 1, -1) == c.at(-1, 1, 1) && c.at(1, -1, -1) == c.at(-1, -1, 1) &&
                        c.at(-1, -1, -1) == c.at(1, -1, 1) && c.at(-1, -1, -1) == c.at(-1, 1, 1);
        std::ostringstream l;
        for (int i = 0; i < 8; ++i) l << (i ? "," : "") << c.counts[i];
        return {ok, l.str(), "mirror classes equal"};
    });

    run("n4_N4_relation", [&]() -> Outcome {
        if (!N4b || !n4_brute_total || !row) return {false, "unavailable", "dependencies failed"};
        const uint64_t delta1 = (*row)[1];
        const uint64_t expected = 1 + 4 * delta1 * (q - 1) + *n4_brute_total * (q - 1);
        return {expected == *N4b, "1 + 4 delta(1)(q-1) + n4(q-1) = " + str_of(expected),
                "N4 = " + str_of(*N4b)};
    });

    if (in_theorem4_range) {
        run("lemma5_delta1", [&]() -> Outcome {
            if (!row) return {false, "unavailable", "row failed"};
            const uint32_t predicted = rep.chi5 == -1 ? 1 : 3;
            const uint64_t d1 = (*row)[1];
            const uint64_t dm1 = (*row)[field.neg_one_ix()];
            return {d1 == predicted && dm1 == predicted,
                    "delta(1) = " + str_of(d1) + ", delta(-1) = " + str_of(dm1),
                    "predicted " + str_of(uint64_t{predicted})};
        });

        run("theorem4_spectrum", [&]() -> Outcome {
            if (!spec) return {false, "unavailable", "spectrum failed"};
            const Spectrum closed = spectrum_closed_form(field);
            return {spectra_equal(closed, *spec), "closed " + format_omega(closed.omega),
                    "brute " + format_omega(spec->omega)};
        });

        run("corollary1_omega3", [&]() -> Outcome {
            if (!spec) return {false, "unavailable", "spectrum failed"};
            const auto it = spec->omega.find(3);
            const uint64_t omega3 = it == spec->omega.end() ? 0 : it->second;
            const uint64_t predicted = rep.chi5 == 1 ? 2 : 0;
            return {omega3 == predicted, "omega_3 = " + str_of(omega3),
                    "predicted " + str_of(predicted)};
        });
    }

    run("parity_single_odd_column", [&]() -> Outcome {
        m1_spec = minus1_spectrum_bruteforce(field);  // throws ParityViolation on failure
        rep.c_spectrum = *m1_spec;
        return {true, format_omega(m1_spec->omega), "single odd column at b*"};
    });

    run("eq13_minus1_moments", [&]() -> Outcome {
        if (!m1_spec) return {false, "unavailable", "c spectrum failed"};
        uint64_t sum = 0, weighted = 0;
        for (auto [i, w] : m1_spec->omega) {
            sum += w;
            weighted += uint64_t{i} * w;
        }
        return {sum == q && weighted == q,
                "sum = " + str_of(sum) + ", weighted = " + str_of(weighted), "q = " + str_of(q)};
    });

    {
        std::optional<MinusOneMomentReport> mrep;
        run("eq14_minus1", [&]() -> Outcome {
            mrep = minus1_moment_report(field);
            const MomentCheckRow& r = mrep->rows.front();
            return {r.ok, "sum i^2 omega_i = " + str_of(r.lhs),
                    "(cN4 - 1)/(q-1) - gcd = " + str_of(r.rhs)};
        });
        run("eq14_sampled_c", [&]() -> Outcome {
            if (!mrep) return {false, "unavailable", "moment report failed"};
            std::ostringstream l, r;
            bool ok = true;
            for (size_t i = 1; i < mrep->rows.size(); ++i) {
                const auto& mr = mrep->rows[i];
                ok = ok && mr.ok;
                l << (i > 1 ? ";" : "") << "c@" << mr.c_index << " " << mr.lhs;
                r << (i > 1 ? ";" : "") << mr.rhs;
            }
            return {ok, l.str(), r.str()};
        });
    }

    run("lemma7_special_delta", [&]() -> Outcome {
        const SpecialDelta sd = minus1_special_delta(field);
        return {true, "delta_{-1}(" + field.format(sd.b_star) + ") = " + str_of(uint64_t{sd.count}),
                "predicted by chi(5)"};
    });

    run("theorem7_cspectrum", [&]() -> Outcome {
        if (!m1_spec) return {false, "unavailable", "c spectrum failed"};
        const CSpectrum closed = minus1_spectrum_closed_form(field);
        return {cspectra_equal(closed, *m1_spec), "closed " + format_omega(closed.omega),
                "brute " + format_omega(m1_spec->omega)};
    });

    run("minus1_uniformity", [&]() -> Outcome {
        if (!m1_spec) return {false, "unavailable", "c spectrum failed"};
        const bool small = q == 7 || q == 27;
        const uint32_t expected = small ? 2 : 4;
        bool ok = m1_spec->uniformity == expected;
        if (!small) {
            const auto it = m1_spec->omega.find(4);
            ok = ok && it != m1_spec->omega.end() && it->second >= 1;
        }
        return {ok, "uniformity " + str_of(uint64_t{m1_spec->uniformity}),
                "expected " + str_of(uint64_t{expected}) + (small ? "" : " with omega_4 >= 1")};
    });

    if (opts.theorem6_sweep) {
        std::optional<CSweepResult> sweep;
        run("theorem6_bound", [&]() -> Outcome {
            // throws BoundViolation on failure
            sweep = c_uniformity_sweep(field, rep.d, opts.include_c_zero);
            rep.uniformity.max_c = sweep->max_uniformity;
            rep.uniformity.max_c_witness = sweep->witness_c;
            return {true, "max over c = " + str_of(uint64_t{sweep->max_uniformity}),
                    "bound " + str_of(uint64_t{q % 4 == 3 ? 5 : 9})};
        });
        run("theorem6_delta0", [&]() -> Outcome {
            if (!sweep) return {false, "unavailable", "sweep failed"};
            return {sweep->max_delta_at_zero <= 2,
                    "max delta_c(0) = " + str_of(uint64_t{sweep->max_delta_at_zero}), "gcd = 2"};
        });
    }

    rep.uniformity.differential = rep.spectrum.uniformity;
    rep.uniformity.minus1 = rep.c_spectrum.uniformity;
    return rep;
}

}  // namespace spectra

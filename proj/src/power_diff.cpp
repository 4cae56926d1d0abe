#include "spectra/power_diff.hpp"

#include <algorithm>
#include <sstream>

namespace spectra {

namespace {

void require_theorem_domain(const Field& field, bool exclude_small) {
    if (field.q() % 4 != 3)
        fail(Errc::OutOfTheoremRange, "requires q = 3 (mod 4)");
    if (field.q() < 7)
        fail(Errc::OutOfTheoremRange, "requires d = (q-3)/2 >= 1");
    if (exclude_small && (field.q() == 7 || field.q() == 27))
        fail(Errc::OutOfTheoremRange, "q = 7 and q = 27 are excluded");
}

uint64_t exact_div(__int128 num, uint64_t den, Errc code, const char* what) {
    if (num < 0 || num % den != 0)
        fail(code, std::string(what) + " is not a non-negative multiple of " + std::to_string(den));
    return static_cast<uint64_t>(num / den);
}

int chi5_of(const Field& field) {
    const int chi5 = field.chi(field.embed(5));
    if (chi5 == 0) fail(Errc::OutOfTheoremRange, "chi(5) = 0 (p = 5 never meets the congruence)");
    return chi5;
}

}  // namespace

bool spectra_equal(const Spectrum& a, const Spectrum& b) {
    if (a.q != b.q || a.d != b.d) return false;
    auto nonzero = [](const std::map<uint32_t, uint64_t>& m) {
        std::map<uint32_t, uint64_t> out;
        for (auto [i, w] : m)
            if (w) out.emplace(i, w);
        return out;
    };
    return nonzero(a.omega) == nonzero(b.omega) && a.uniformity == b.uniformity;
}

uint64_t second_moment(const Spectrum& s) {
    uint64_t acc = 0;
    for (auto [i, w] : s.omega) acc += uint64_t{i} * i * w;
    return acc;
}

std::vector<uint32_t> ddt_row(const Field& field, uint64_t d) {
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const uint64_t q = field.q();
    const auto xd = field.power_table(d);
    std::vector<uint32_t> row(q, 0);
    for (uint64_t x = 0; x < q; ++x)
        ++row[field.sub_ix(xd[field.add_one_ix(x)], xd[x])];
    return row;
}

Spectrum spectrum_from_row(const Field& field, uint64_t d, const std::vector<uint32_t>& row) {
    Spectrum s;
    s.q = field.q();
    s.d = d;
    s.provenance = Provenance::BruteForce;
    const uint32_t max = row.empty() ? 0 : *std::max_element(row.begin(), row.end());
    s.uniformity = max;
    std::vector<uint64_t> hist(max + 1, 0);
    for (uint32_t v : row) ++hist[v];
    uint64_t sum = 0, weighted = 0;
    for (uint32_t i = 0; i <= max; ++i) {
        s.omega[i] = hist[i];
        sum += hist[i];
        weighted += uint64_t{i} * hist[i];
    }
    if (sum != s.q || weighted != s.q)
        fail(Errc::MomentViolation, "spectrum moments disagree with q");
    return s;
}

Spectrum spectrum_bruteforce(const Field& field, uint64_t d) {
    return spectrum_from_row(field, d, ddt_row(field, d));
}

Spectrum spectrum_closed_form(const Field& field, int64_t lambda, int chi5) {
    require_theorem_domain(field, /*exclude_small=*/true);
    const uint64_t q = field.q();
    Spectrum s;
    s.q = q;
    s.d = (q - 3) / 2;
    s.provenance = Provenance::ClosedForm;
    const __int128 Q = q, L = lambda;
    if (chi5 == -1) {
        s.omega[0] = exact_div(Q + L - 7, 4, Errc::NonIntegralSpectrum, "omega_0 numerator");
        s.omega[1] = exact_div(Q - L + 7, 2, Errc::NonIntegralSpectrum, "omega_1 numerator");
        s.omega[2] = s.omega[0];
        s.uniformity = 2;
    } else {
        s.omega[0] = exact_div(Q + L + 1, 4, Errc::NonIntegralSpectrum, "omega_0 numerator");
        s.omega[1] = exact_div(Q - L + 3, 2, Errc::NonIntegralSpectrum, "omega_1 numerator");
        s.omega[2] = exact_div(Q + L - 15, 4, Errc::NonIntegralSpectrum, "omega_2 numerator");
        s.omega[3] = 2;
        s.uniformity = 3;
    }
    uint64_t sum = 0, weighted = 0;
    for (auto [i, w] : s.omega) {
        sum += w;
        weighted += uint64_t{i} * w;
    }
    if (sum != q || weighted != q)
        fail(Errc::NonIntegralSpectrum, "closed-form spectrum moments disagree with q");
    return s;
}

Spectrum spectrum_closed_form(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/true);
    const auto rep = lambda_report(field, SumMethod::Recurrence);
    return spectrum_closed_form(field, rep.lambda, chi5_of(field));
}

uint32_t delta_one(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/true);
    const uint64_t q = field.q();
    const uint64_t d = (q - 3) / 2;
    const uint32_t predicted = chi5_of(field) == -1 ? 1 : 3;
    const auto xd = field.power_table(d);
    uint64_t at_one = 0, at_minus_one = 0;
    const uint64_t neg_one = field.neg_one_ix();
    for (uint64_t x = 0; x < q; ++x) {
        const uint64_t b = field.sub_ix(xd[field.add_one_ix(x)], xd[x]);
        if (b == 1) ++at_one;
        if (b == neg_one) ++at_minus_one;
    }
    if (at_one != predicted || at_minus_one != predicted)
        fail(Errc::Internal, "delta(1)/delta(-1) disagree with the chi(5) prediction");
    return predicted;
}

ClassCounts n4_class_counts_bruteforce(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/false);
    const uint64_t q = field.q();
    const auto xd = field.power_table((q - 3) / 2);
    const auto chi = field.chi_table_all();
    ClassCounts out;
    for (uint64_t y1 = 1; y1 < q; ++y1) {
        const uint64_t x1 = xd[y1];
        const int c1 = chi[y1];
        for (uint64_t y3 = 1; y3 < q; ++y3) {
            const uint64_t y2 = field.sub_one_ix(field.add_ix(y1, y3));
            if (y2 == 0) continue;
            if (field.add_ix(x1, xd[y3]) != field.add_one_ix(xd[y2])) continue;
            ++out.counts[ClassCounts::bit_index(c1, chi[y2], chi[y3])];
        }
    }
    for (uint64_t c : out.counts) out.total += c;
    return out;
}

ClassCounts n4_class_counts_closed(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/false);
    const uint64_t q = field.q();
    const auto rep = lambda_report(field, SumMethod::Recurrence);
    ClassCounts out;
    const uint64_t c111 = q - 2;
    const uint64_t c11m =
        exact_div(static_cast<__int128>(q) + rep.lambda - 7, 8, Errc::NonIntegral, "n_(1,1,-1)");
    const uint64_t c1mm = (q - 1) / 2;
    out.counts[ClassCounts::bit_index(1, 1, 1)] = c111;
    // the four classes equal by the solution symmetries
    out.counts[ClassCounts::bit_index(1, 1, -1)] = c11m;
    out.counts[ClassCounts::bit_index(-1, 1, 1)] = c11m;
    out.counts[ClassCounts::bit_index(-1, -1, -1)] = c11m;
    out.counts[ClassCounts::bit_index(1, -1, 1)] = c11m;
    out.counts[ClassCounts::bit_index(1, -1, -1)] = c1mm;
    out.counts[ClassCounts::bit_index(-1, -1, 1)] = c1mm;
    out.counts[ClassCounts::bit_index(-1, 1, -1)] = 0;
    for (uint64_t c : out.counts) out.total += c;
    if (out.total != n4_total_closed(field))
        fail(Errc::Internal, "per-class closed counts disagree with the total closed form");
    return out;
}

ClassCounts n4_class_counts(const Field& field) {
    const ClassCounts brute = n4_class_counts_bruteforce(field);
    const ClassCounts closed = n4_class_counts_closed(field);
    if (brute.counts != closed.counts) {
        std::ostringstream msg;
        msg << "class counts disagree:";
        for (int i = 0; i < 8; ++i) {
            if (brute.counts[i] != closed.counts[i])
                msg << " class " << i << " brute " << brute.counts[i] << " closed "
                    << closed.counts[i];
        }
        fail(Errc::ClassMismatch, msg.str());
    }
    return brute;
}

uint64_t n4_total_closed(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/false);
    const auto rep = lambda_report(field, SumMethod::Recurrence);
    const __int128 num = static_cast<__int128>(5) * field.q() + rep.lambda - 13;
    return exact_div(num, 2, Errc::NonIntegral, "n4 numerator");
}

uint64_t N4_bruteforce(const Field& field, uint64_t d) {
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const uint64_t q = field.q();
    const auto xd = field.power_table(d);
    // per-diagonal histogram over the second key component; the epoch stamp
    // avoids clearing q counters for each first component
    std::vector<uint32_t> count(q, 0);
    std::vector<uint32_t> stamp(q, UINT32_MAX);
    uint64_t total = 0;
    for (uint64_t s = 0; s < q; ++s) {
        const uint32_t mark = static_cast<uint32_t>(s);
        for (uint64_t u = 0; u < q; ++u) {
            const uint64_t v = field.sub_ix(s, u);
            const uint64_t t = field.add_ix(xd[u], xd[v]);
            if (stamp[t] != mark) {
                stamp[t] = mark;
                count[t] = 0;
            }
            total += 2 * uint64_t{++count[t]} - 1;  // running sum of squares
        }
    }
    return total;
}

uint64_t N4_closed(const Field& field) {
    require_theorem_domain(field, /*exclude_small=*/false);
    const auto rep = lambda_report(field, SumMethod::Recurrence);
    const __int128 Q = field.q(), L = rep.lambda;
    const __int128 num = chi5_of(field) == -1 ? 5 * Q * Q + (L - 10) * Q - (L - 7)
                                              : 5 * Q * Q + (L + 6) * Q - (L + 9);
    return exact_div(num, 2, Errc::NonIntegral, "N4 numerator");
}

bool moment_check(const Spectrum& s, uint64_t N4) {
    uint64_t sum = 0, weighted = 0;
    for (auto [i, w] : s.omega) {
        sum += w;
        weighted += uint64_t{i} * w;
    }
    if (sum != s.q || weighted != s.q) return false;
    const __int128 num = static_cast<__int128>(N4) - static_cast<__int128>(s.q) * s.q;
    if (num < 0 || num % (s.q - 1) != 0) return false;
    return static_cast<__int128>(second_moment(s)) == num / (s.q - 1);
}

}  // namespace spectra

#include "spectra/c_diff.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace spectra {

namespace {

void require_minus1_domain(const Field& field) {
    if (field.q() % 4 != 3) fail(Errc::OutOfTheoremRange, "requires q = 3 (mod 4)");
    if (field.q() <= 3) fail(Errc::OutOfTheoremRange, "requires q > 3");
}

uint64_t exact_div(__int128 num, uint64_t den, Errc code, const char* what) {
    if (num < 0 || num % den != 0)
        fail(code, std::string(what) + " is not a non-negative multiple of " + std::to_string(den));
    return static_cast<uint64_t>(num / den);
}

std::map<uint32_t, uint64_t> nonzero_histogram(const std::vector<uint32_t>& row) {
    const uint32_t max = row.empty() ? 0 : *std::max_element(row.begin(), row.end());
    std::vector<uint64_t> hist(max + 1, 0);
    for (uint32_t v : row) ++hist[v];
    std::map<uint32_t, uint64_t> omega;
    for (uint32_t i = 0; i <= max; ++i)
        if (hist[i]) omega.emplace(i, hist[i]);
    return omega;
}

int chi5_of(const Field& field) {
    const int chi5 = field.chi(field.embed(5));
    if (chi5 == 0) fail(Errc::OutOfTheoremRange, "chi(5) = 0 (p = 5 never meets the congruence)");
    return chi5;
}

}  // namespace

bool cspectra_equal(const CSpectrum& a, const CSpectrum& b) {
    return a.omega == b.omega && a.uniformity == b.uniformity && a.gcd_floor == b.gcd_floor &&
           a.c == b.c;
}

uint64_t c_second_moment(const CSpectrum& s) {
    uint64_t acc = 0;
    for (auto [i, w] : s.omega) acc += uint64_t{i} * i * w;
    return acc;
}

CDiffRow cddt_row(const Field& field, uint64_t d, const FieldElem& c) {
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const uint64_t q = field.q();
    const uint64_t c_ix = field.index(c);
    const auto xd = field.power_table(d);
    CDiffRow out;
    out.c = c;
    out.gcd_floor = static_cast<uint32_t>(std::gcd(d, q - 1));
    out.row.assign(q, 0);
    for (uint64_t x = 0; x < q; ++x) {
        const uint64_t b = field.sub_ix(xd[field.add_one_ix(x)], field.mul_ix(c_ix, xd[x]));
        ++out.row[b];
    }
    out.uniformity = std::max(*std::max_element(out.row.begin(), out.row.end()), out.gcd_floor);
    return out;
}

uint32_t c_uniformity(const Field& field, uint64_t d, const FieldElem& c) {
    return cddt_row(field, d, c).uniformity;
}

CSweepResult c_uniformity_sweep(const Field& field, uint64_t d, bool include_zero) {
    const uint64_t q = field.q();
    if (d < 1 || d != (q - 3) / 2)
        fail(Errc::BadConfig, "the bound sweep is defined for d = (q-3)/2 >= 1");
    const uint64_t neg_one = field.neg_one_ix();
    const uint32_t bound = q % 4 == 3 ? 5 : 9;
    const uint32_t gcd_floor = static_cast<uint32_t>(std::gcd(d, q - 1));
    const auto xd = field.power_table(d);
    std::vector<uint32_t> xdp1(q);
    for (uint64_t x = 0; x < q; ++x) xdp1[x] = xd[field.add_one_ix(x)];

    CSweepResult out;
    out.per_c.reserve(q);
    std::vector<uint32_t> row(q);
    std::vector<uint64_t> scaled(q);
    for (uint64_t c = include_zero ? 0 : 2; c < q; ++c) {
        if (c == 1) continue;
        for (uint64_t x = 0; x < q; ++x) scaled[x] = field.mul_ix(c, xd[x]);
        std::fill(row.begin(), row.end(), 0);
        for (uint64_t x = 0; x < q; ++x) ++row[field.sub_ix(xdp1[x], scaled[x])];
        const uint32_t row_max = *std::max_element(row.begin(), row.end());
        const uint32_t uniformity = std::max(row_max, gcd_floor);
        out.per_c.emplace_back(c, uniformity);
        if (c != neg_one) {
            if (uniformity > bound) {
                const uint64_t b =
                    static_cast<uint64_t>(std::max_element(row.begin(), row.end()) - row.begin());
                std::ostringstream msg;
                msg << "uniformity " << uniformity << " exceeds " << bound << " at c index " << c
                    << " (b index " << b << ", count " << row[b] << ")";
                fail(Errc::BoundViolation, msg.str());
            }
            out.max_delta_at_zero = std::max(out.max_delta_at_zero, row[0]);
        }
        if (c != 0 && uniformity > out.max_uniformity) {
            out.max_uniformity = uniformity;
            out.witness_c = c;
        }
    }
    return out;
}

CSpectrum minus1_spectrum_bruteforce(const Field& field) {
    require_minus1_domain(field);
    const uint64_t q = field.q();
    const auto row = cddt_row(field, (q - 3) / 2, field.embed(-1));
    CSpectrum s;
    s.c = row.c;
    s.gcd_floor = row.gcd_floor;
    s.uniformity = row.uniformity;
    s.provenance = Provenance::BruteForce;
    s.omega = nonzero_histogram(row.row);

    uint64_t sum = 0, weighted = 0;
    for (auto [i, w] : s.omega) {
        sum += w;
        weighted += uint64_t{i} * w;
    }
    if (sum != q || weighted != q)
        fail(Errc::MomentViolation, "c-spectrum first moments disagree with q");

    // solutions pair x <-> -x-1, so every column is even except the one at
    // the image of -1/2
    const uint64_t b_star = field.index(field.embed(field.chi(field.embed(2)) == 1 ? 4 : -4));
    for (uint64_t b = 0; b < q; ++b) {
        if (row.row[b] % 2 == (b == b_star ? 0 : 1)) {
            fail(Errc::ParityViolation,
                 "odd-column structure violated at b index " + std::to_string(b));
        }
    }
    return s;
}

CSpectrum minus1_spectrum_closed_form(const Field& field, int64_t lambda, int chi5) {
    require_minus1_domain(field);
    const uint64_t q = field.q();
    CSpectrum s;
    s.c = field.embed(-1);
    s.gcd_floor = 2;
    s.provenance = Provenance::ClosedForm;
    const __int128 Q = q, L = lambda;
    std::map<uint32_t, uint64_t> omega;
    if (chi5 == -1) {
        omega[0] = exact_div(9 * Q + L - 15, 16, Errc::NonIntegralSpectrum, "omega_0 numerator");
        omega[1] = 1;
        omega[2] = exact_div(3 * Q - L + 3, 8, Errc::NonIntegralSpectrum, "omega_2 numerator");
        omega[4] = exact_div(Q + L - 7, 16, Errc::NonIntegralSpectrum, "omega_4 numerator");
    } else {
        omega[0] = exact_div(9 * Q + L + 9, 16, Errc::NonIntegralSpectrum, "omega_0 numerator");
        omega[2] = exact_div(3 * Q - L - 13, 8, Errc::NonIntegralSpectrum, "omega_2 numerator");
        omega[3] = 1;
        omega[4] = exact_div(Q + L + 1, 16, Errc::NonIntegralSpectrum, "omega_4 numerator");
    }
    uint64_t sum = 0, weighted = 0;
    uint32_t max_nonzero = 0;
    for (auto [i, w] : omega) {
        if (!w) continue;
        s.omega.emplace(i, w);
        sum += w;
        weighted += uint64_t{i} * w;
        max_nonzero = std::max(max_nonzero, i);
    }
    if (sum != q || weighted != q)
        fail(Errc::NonIntegralSpectrum, "closed-form c-spectrum moments disagree with q");
    s.uniformity = std::max(max_nonzero, s.gcd_floor);
    return s;
}

CSpectrum minus1_spectrum_closed_form(const Field& field) {
    require_minus1_domain(field);
    const auto rep = lambda_report(field, SumMethod::Recurrence);
    return minus1_spectrum_closed_form(field, rep.lambda, chi5_of(field));
}

uint64_t cN4_bruteforce(const Field& field, uint64_t d, const FieldElem& c) {
    if (d < 1) fail(Errc::BadConfig, "exponent must be at least 1");
    const uint64_t q = field.q();
    const uint64_t c_ix = field.index(c);
    const auto xd = field.power_table(d);
    std::vector<uint32_t> cxd(q);
    for (uint64_t x = 0; x < q; ++x) cxd[x] = static_cast<uint32_t>(field.mul_ix(c_ix, xd[x]));
    std::vector<uint32_t> count(q, 0);
    std::vector<uint32_t> stamp(q, UINT32_MAX);
    uint64_t total = 0;
    for (uint64_t s = 0; s < q; ++s) {
        const uint32_t mark = static_cast<uint32_t>(s);
        for (uint64_t u = 0; u < q; ++u) {
            const uint64_t v = field.sub_ix(s, u);
            const uint64_t t = field.add_ix(xd[u], cxd[v]);
            if (stamp[t] != mark) {
                stamp[t] = mark;
                count[t] = 0;
            }
            total += 2 * uint64_t{++count[t]} - 1;
        }
    }
    return total;
}

SpecialDelta minus1_special_delta(const Field& field) {
    require_minus1_domain(field);
    const uint64_t q = field.q();
    const uint64_t d = (q - 3) / 2;
    SpecialDelta out;
    out.b_star = field.embed(field.chi(field.embed(2)) == 1 ? 4 : -4);
    const uint32_t predicted = chi5_of(field) == -1 ? 1 : 3;
    const uint64_t b_ix = field.index(out.b_star);
    const uint64_t neg_one = field.neg_one_ix();
    const auto xd = field.power_table(d);
    uint64_t count = 0;
    for (uint64_t x = 0; x < q; ++x) {
        const uint64_t b = field.sub_ix(xd[field.add_one_ix(x)], field.mul_ix(neg_one, xd[x]));
        if (b == b_ix) ++count;
    }
    if (count != predicted)
        fail(Errc::Internal, "delta_{-1}(b*) disagrees with the chi(5) prediction");
    out.count = predicted;
    return out;
}

std::vector<uint64_t> sampled_c_indices(const Field& field, int count) {
    const uint64_t q = field.q();
    const uint64_t neg_one = field.neg_one_ix();
    if (q < static_cast<uint64_t>(count) + 3)
        fail(Errc::BadConfig, "field too small to sample that many c values");
    std::mt19937_64 rng(q);  // deterministic per field
    std::vector<uint64_t> out;
    while (out.size() < static_cast<size_t>(count)) {
        const uint64_t c = rng() % q;
        if (c == 0 || c == 1 || c == neg_one) continue;
        if (std::find(out.begin(), out.end(), c) != out.end()) continue;
        out.push_back(c);
    }
    return out;
}

MinusOneMomentReport minus1_moment_report(const Field& field) {
    require_minus1_domain(field);
    const uint64_t q = field.q();
    const uint64_t d = (q - 3) / 2;
    const uint64_t gcd_floor = std::gcd(d, q - 1);
    MinusOneMomentReport rep;

    auto check_c = [&](uint64_t c_ix) {
        const FieldElem c = field.elem(c_ix);
        const auto row = cddt_row(field, d, c);
        const auto omega = nonzero_histogram(row.row);
        MomentCheckRow r;
        r.c_index = c_ix;
        for (auto [i, w] : omega) r.lhs += uint64_t{i} * i * w;
        const uint64_t cn4 = cN4_bruteforce(field, d, c);
        const __int128 num = static_cast<__int128>(cn4) - 1;
        if (num % (q - 1) != 0) {
            r.ok = false;
        } else {
            const __int128 rhs = num / (q - 1) - gcd_floor;
            r.ok = rhs >= 0 && static_cast<__int128>(r.lhs) == rhs;
            if (rhs >= 0) r.rhs = static_cast<uint64_t>(rhs);
        }
        return r;
    };

    rep.rows.push_back(check_c(field.neg_one_ix()));
    for (uint64_t c : sampled_c_indices(field, 3)) rep.rows.push_back(check_c(c));

    const auto m1 = minus1_spectrum_bruteforce(field);
    uint64_t sum = 0, weighted = 0;
    for (auto [i, w] : m1.omega) {
        sum += w;
        weighted += uint64_t{i} * w;
    }
    rep.eq13_ok = sum == q && weighted == q;
    rep.all_ok = rep.eq13_ok &&
                 std::all_of(rep.rows.begin(), rep.rows.end(),
                             [](const MomentCheckRow& r) { return r.ok; });
    return rep;
}

bool minus1_moment_check(const Field& field) { return minus1_moment_report(field).all_ok; }

}  // namespace spectra

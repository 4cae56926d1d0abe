#pragma once

// Differential analysis of power maps x^d on row a = 1: DDT rows, the
// spectrum by brute force and by the lambda closed form, the four-variable
// and normalized three-variable solution counts with their closed forms,
// and the moment identities tying them together.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "spectra/char_sums.hpp"
#include "spectra/field.hpp"

namespace spectra {

enum class Provenance { BruteForce, ClosedForm };

constexpr const char* provenance_name(Provenance p) {
    return p == Provenance::BruteForce ? "brute-force" : "closed-form";
}

struct Spectrum {
    uint64_t q = 0;
    uint64_t d = 0;
    // i -> omega_i for every 0 <= i <= uniformity, zero entries kept
    std::map<uint32_t, uint64_t> omega;
    uint32_t uniformity = 0;
    Provenance provenance = Provenance::BruteForce;
};

// equality of the mathematical content: zero entries and provenance ignored
bool spectra_equal(const Spectrum& a, const Spectrum& b);

uint64_t second_moment(const Spectrum& s);  // sum i^2 omega_i

// Counts of normalized solutions split by the character sign pattern
// (chi(y1), chi(y2), chi(y3)); the array index packs the pattern as
// (chi1>0)<<2 | (chi2>0)<<1 | (chi3>0).
struct ClassCounts {
    std::array<uint64_t, 8> counts{};
    uint64_t total = 0;

    static int bit_index(int chi1, int chi2, int chi3) {
        return ((chi1 > 0) << 2) | ((chi2 > 0) << 1) | (chi3 > 0);
    }
    uint64_t at(int chi1, int chi2, int chi3) const { return counts[bit_index(chi1, chi2, chi3)]; }
};

// delta(1,b) for every b (indexed by element index); one pass of x over the
// field
std::vector<uint32_t> ddt_row(const Field& field, uint64_t d);

Spectrum spectrum_from_row(const Field& field, uint64_t d, const std::vector<uint32_t>& row);
Spectrum spectrum_bruteforce(const Field& field, uint64_t d);

// Closed-form spectrum for d = (q-3)/2, valid for q = 3 (mod 4), q > 7,
// q != 27. The lambda overload exists so a wrong lambda can be shown to
// trip the exact-division checks.
Spectrum spectrum_closed_form(const Field& field);
Spectrum spectrum_closed_form(const Field& field, int64_t lambda, int chi5);

// delta(1) = delta(-1): 1 when chi(5) = -1, 3 when chi(5) = 1; verified
// against the actual row before returning
uint32_t delta_one(const Field& field);

ClassCounts n4_class_counts_bruteforce(const Field& field);
ClassCounts n4_class_counts_closed(const Field& field);
// both routes, which must agree exactly
ClassCounts n4_class_counts(const Field& field);

uint64_t n4_total_closed(const Field& field);  // (5q + lambda - 13)/2

// Four-variable solution count via the pair-map method: pairs (u, v) are
// keyed by (u+v, u^d+v^d) and N4 is the sum of squared multiplicities.
uint64_t N4_bruteforce(const Field& field, uint64_t d);
uint64_t N4_closed(const Field& field);

// both first-moment identities plus the second-moment identity
// sum i^2 omega_i = (N4 - q^2)/(q - 1), all exact
bool moment_check(const Spectrum& s, uint64_t N4);

}  // namespace spectra

#pragma once

// c-differential analysis of x^d: cDDT rows with the gcd(d, q-1) floor in
// the uniformity, the general-c bound sweep, the full (-1)-differential
// spectrum by brute force and closed form, the c analogue of the
// four-variable count, and its moment identities.

#include <cstdint>
#include <map>
#include <vector>

#include "spectra/field.hpp"
#include "spectra/power_diff.hpp"

namespace spectra {

struct CDiffRow {
    FieldElem c;
    std::vector<uint32_t> row;  // b index -> count of x with (x+1)^d - c x^d = b
    uint32_t uniformity = 0;    // max(row) floored by gcd(d, q-1)
    uint32_t gcd_floor = 0;
};

struct CSpectrum {
    FieldElem c;
    std::map<uint32_t, uint64_t> omega;  // zero counts dropped
    uint32_t uniformity = 0;
    uint32_t gcd_floor = 0;
    Provenance provenance = Provenance::BruteForce;
};

// mathematical-content equality; provenance ignored
bool cspectra_equal(const CSpectrum& a, const CSpectrum& b);

uint64_t c_second_moment(const CSpectrum& s);

CDiffRow cddt_row(const Field& field, uint64_t d, const FieldElem& c);

uint32_t c_uniformity(const Field& field, uint64_t d, const FieldElem& c);

struct CSweepResult {
    // (c index, uniformity) for every swept c, ascending by index
    std::vector<std::pair<uint64_t, uint32_t>> per_c;
    uint32_t max_uniformity = 0;   // over c not in {0, 1}
    uint64_t witness_c = 0;        // smallest c index attaining the max
    uint32_t max_delta_at_zero = 0;  // max row value at b = 0 over c not in {1, -1}
};

// Sweeps c over F_q \ {0, 1} (optionally including 0) for d = (q-3)/2 and
// verifies the uniformity bound for every c outside {1, -1}: at most 9 in
// general, at most 5 when q = 3 (mod 4). A counterexample raises
// BoundViolation naming c and b.
CSweepResult c_uniformity_sweep(const Field& field, uint64_t d, bool include_zero = false);

// histogram of the c = -1 row for d = (q-3)/2, with the pairing-parity
// structure verified: every count even except a single column at
// b = 4 (chi(2) = 1) or b = -4 (chi(2) = -1)
CSpectrum minus1_spectrum_bruteforce(const Field& field);

// Closed form, valid for q = 3 (mod 4), q > 3 (q = 7 and q = 27 included).
CSpectrum minus1_spectrum_closed_form(const Field& field);
CSpectrum minus1_spectrum_closed_form(const Field& field, int64_t lambda, int chi5);

// Pair-map count for the c system: pairs (x1, x3) keyed by
// (x1 + x3, x1^d + c x3^d); the count is the sum of squared multiplicities.
uint64_t cN4_bruteforce(const Field& field, uint64_t d, const FieldElem& c);

struct SpecialDelta {
    FieldElem b_star;  // 4 when chi(2) = 1, -4 otherwise
    uint32_t count = 0;  // 1 when chi(5) = -1, 3 when chi(5) = 1
};

SpecialDelta minus1_special_delta(const Field& field);

struct MomentCheckRow {
    uint64_t c_index = 0;
    uint64_t lhs = 0;  // sum i^2 omega_i of the brute-force histogram
    uint64_t rhs = 0;  // (cN4 - 1)/(q - 1) - gcd(d, q - 1)
    bool ok = false;
};

struct MinusOneMomentReport {
    std::vector<MomentCheckRow> rows;  // c = -1 first, then the sampled c
    bool eq13_ok = false;              // first moments of the c = -1 histogram
    bool all_ok = false;
};

// deterministic sample of c indices outside {0, 1, -1}
std::vector<uint64_t> sampled_c_indices(const Field& field, int count);

// second-moment identity at c = -1 plus three sampled c
MinusOneMomentReport minus1_moment_report(const Field& field);
bool minus1_moment_check(const Field& field);

}  // namespace spectra

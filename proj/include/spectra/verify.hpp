#pragma once

// Per-field self-verification: every identity the other modules expose,
// each computed on both of its routes and compared exactly. One
// VerifyReport per field; the CLI and the acceptance suite both consume it.

#include <cstdint>
#include <string>
#include <vector>

#include "spectra/c_diff.hpp"
#include "spectra/power_diff.hpp"

namespace spectra {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string lhs;
    std::string rhs;
    double ms = 0.0;
};

struct UniformitySummary {
    uint32_t differential = 0;
    uint32_t minus1 = 0;
    uint32_t max_c = 0;        // 0 when the bound sweep was skipped
    uint64_t max_c_witness = 0;
};

struct VerifyReport {
    uint64_t p = 0;
    uint32_t n = 0;
    uint64_t q = 0;
    uint64_t d = 0;
    int chi5 = 0;
    int64_t lambda1 = 0;
    int64_t lambda2 = 0;
    int64_t lambda = 0;
    Spectrum spectrum;      // brute force
    CSpectrum c_spectrum;   // c = -1 brute force
    UniformitySummary uniformity;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    const CheckResult* first_failure() const;
};

struct VerifyOptions {
    bool theorem6_sweep = true;   // the O(q^2) all-c bound sweep
    bool include_c_zero = false;  // widen that sweep to c = 0
};

// Requires q = 3 (mod 4) and q >= 7 so that d = (q-3)/2 >= 1. Checks whose
// theorems exclude the field (q = 7, q = 27) are omitted rather than
// reported as failures.
VerifyReport verify_field(const Field& field, const VerifyOptions& opts = {});

std::string format_omega(const std::map<uint32_t, uint64_t>& omega);

}  // namespace spectra

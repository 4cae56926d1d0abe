#pragma once

// Quadratic-character sums: the closed form for quadratics, direct
// summation for arbitrary small-degree polynomials, the integer trace
// recurrence that lifts a cubic's prime-field sum to extensions, and the
// lambda quantities built from the two fixed cubics
//     x(x^2 + 4x - 1)   and   x(x^2 - 2x + 5).

#include <cstdint>
#include <span>
#include <string>

#include "spectra/field.hpp"

namespace spectra {

// Cubic with integer coefficients, interpreted mod p. Leading coefficient
// must stay nonzero mod p.
struct CubicSpec {
    int64_t a3 = 1, a2 = 0, a1 = 0, a0 = 0;
    std::string name;
};

CubicSpec lambda1_cubic();  // x(x^2+4x-1)
CubicSpec lambda2_cubic();  // x(x^2-2x+5)

enum class SumMethod { Direct, Recurrence };

constexpr const char* sum_method_name(SumMethod m) {
    return m == SumMethod::Direct ? "direct" : "recurrence";
}

struct CharSumReport {
    int64_t lambda1 = 0;
    int64_t lambda2 = 0;
    int64_t lambda = 0;
    SumMethod method = SumMethod::Direct;
    // 2*sqrt(q) - |lambda_i|; reporting only, the bound check itself is the
    // exact integer comparison lambda_i^2 <= 4q
    double hasse_margin1 = 0.0;
    double hasse_margin2 = 0.0;
};

// sum over x of chi(f(x)) for f with integer coefficients (little-endian),
// by one pass over the field
int64_t char_sum_poly(const Field& field, std::span<const int64_t> coeffs);

// closed form of Lemma-2 type: -chi(a2) when the discriminant is nonzero,
// (q-1)*chi(a2) when it vanishes
int64_t quad_char_sum(const Field& field, const FieldElem& a2, const FieldElem& a1,
                      const FieldElem& a0);

int64_t cubic_char_sum_direct(const Field& field, const CubicSpec& cubic);

// Gamma_{p,n} from Gamma_{p,1} via the integer recurrence
//   s_0 = 2, s_1 = -gamma_1, s_k = -gamma_1 s_{k-1} - p s_{k-2},
// returning -s_n. Exact (checked 128-bit) integers throughout; the Hasse
// precondition |gamma_1| <= 2 sqrt(p) doubles as a singularity guard.
int64_t gamma_recurrence(uint64_t p, uint32_t n, int64_t gamma1);

CharSumReport lambda_report(const Field& field, SumMethod method);

struct CharIdentities {
    int64_t sum_i = 0;    // sum chi(x(x^2-1))
    int64_t sum_ii = 0;   // sum chi(x(x^2-1)(x^2+4x-1))
    int64_t sum_iii = 0;  // sum chi((x^2-1)(x^2+4x-1))
    int64_t lambda2 = 0;
    bool i_ok = false;    // sum_i == 0
    bool ii_ok = false;   // sum_ii == 0
    bool iii_ok = false;  // sum_iii == lambda2 - 1
    bool all() const { return i_ok && ii_ok && iii_ok; }
};

// the three identities, valid for q = 3 (mod 4); evaluated by direct
// summation
CharIdentities check_char_identities(const Field& field);

}  // namespace spectra

#pragma once

// Exact arithmetic in F_{p^n} for odd p: canonical field construction,
// polynomial-basis elements, the quadratic character, and deterministic
// element enumeration.
//
// Elements are indexed by the integer sum(c_i * p^i) over their
// coefficients, so index 0 is the zero element and index 1 is one. The
// enumeration engines in the sibling modules work on these indices; the
// index operations are inline here because they sit in O(q^2) loops.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

namespace detail {

// Extension degrees beyond this are rejected at construction; keeps the
// multiply scratch buffers on the stack.
inline constexpr uint32_t kMaxExtensionDegree = 32;

struct FieldCtx {
    uint64_t p = 0;
    uint32_t n = 1;
    uint64_t q = 0;
    std::vector<uint32_t> modulus;     // monic, size n+1; empty when n == 1
    std::vector<uint32_t> reduction;   // (n-1) rows of length n: x^{n+k} mod modulus
    uint64_t chi_threshold = 0;
    bool has_coeff_cache = false;
    bool has_square_table = false;
    std::vector<uint16_t> coeff_cache; // q*n coefficient rows, index-major
    std::vector<bool> square;          // q bits: index is a nonzero square
};

bool structurally_equal(const FieldCtx& a, const FieldCtx& b);
int chi_ix_slow(const FieldCtx& f, uint64_t a);
uint64_t inv_ix_impl(const FieldCtx& f, uint64_t a);

inline void unpack_ix(const FieldCtx& f, uint64_t ix, uint32_t* out) {
    if (f.has_coeff_cache) {
        const uint16_t* row = &f.coeff_cache[ix * f.n];
        for (uint32_t i = 0; i < f.n; ++i) out[i] = row[i];
    } else {
        for (uint32_t i = 0; i < f.n; ++i) {
            out[i] = static_cast<uint32_t>(ix % f.p);
            ix /= f.p;
        }
    }
}

inline uint64_t pack_ix(const FieldCtx& f, const uint32_t* c) {
    uint64_t ix = 0;
    for (uint32_t i = f.n; i-- > 0;) ix = ix * f.p + c[i];
    return ix;
}

inline uint64_t add_ix(const FieldCtx& f, uint64_t a, uint64_t b) {
    if (f.n == 1) {
        uint64_t s = a + b;
        return s >= f.p ? s - f.p : s;
    }
    uint32_t ca[kMaxExtensionDegree], cb[kMaxExtensionDegree];
    unpack_ix(f, a, ca);
    unpack_ix(f, b, cb);
    uint64_t ix = 0;
    for (uint32_t i = f.n; i-- > 0;) {
        uint64_t s = uint64_t{ca[i]} + cb[i];
        if (s >= f.p) s -= f.p;
        ix = ix * f.p + s;
    }
    return ix;
}

inline uint64_t sub_ix(const FieldCtx& f, uint64_t a, uint64_t b) {
    if (f.n == 1) return a >= b ? a - b : a + f.p - b;
    uint32_t ca[kMaxExtensionDegree], cb[kMaxExtensionDegree];
    unpack_ix(f, a, ca);
    unpack_ix(f, b, cb);
    uint64_t ix = 0;
    for (uint32_t i = f.n; i-- > 0;) {
        uint64_t s = ca[i] >= cb[i] ? uint64_t{ca[i]} - cb[i] : uint64_t{ca[i]} + f.p - cb[i];
        ix = ix * f.p + s;
    }
    return ix;
}

inline uint64_t neg_ix(const FieldCtx& f, uint64_t a) { return sub_ix(f, 0, a); }

// Adding/subtracting one only touches the constant coefficient.
inline uint64_t add_one_ix(const FieldCtx& f, uint64_t a) {
    return a % f.p == f.p - 1 ? a - (f.p - 1) : a + 1;
}

inline uint64_t sub_one_ix(const FieldCtx& f, uint64_t a) {
    return a % f.p == 0 ? a + (f.p - 1) : a - 1;
}

// Schoolbook product of two coefficient rows, folded by the precomputed
// x^{n+k} reduction rows. Accumulator width is guarded at construction:
// (2n-1)(p-1)^2 fits in 64 bits.
inline void mul_coeffs(const FieldCtx& f, const uint32_t* a, const uint32_t* b, uint32_t* out) {
    const uint64_t p = f.p;
    const uint32_t n = f.n;
    uint64_t acc[2 * kMaxExtensionDegree - 1];
    const uint32_t m = 2 * n - 1;
    for (uint32_t i = 0; i < m; ++i) acc[i] = 0;
    for (uint32_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        const uint64_t ai = a[i];
        for (uint32_t j = 0; j < n; ++j) acc[i + j] += ai * b[j];
    }
    for (uint32_t k = m; k-- > n;) {
        const uint64_t c = acc[k] % p;
        if (c == 0) continue;
        const uint32_t* row = &f.reduction[(k - n) * n];
        for (uint32_t j = 0; j < n; ++j) acc[j] += c * row[j];
    }
    for (uint32_t j = 0; j < n; ++j) out[j] = static_cast<uint32_t>(acc[j] % p);
}

inline uint64_t mul_ix(const FieldCtx& f, uint64_t a, uint64_t b) {
    if (f.n == 1) return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % f.p);
    if (a == 0 || b == 0) return 0;
    uint32_t ca[kMaxExtensionDegree], cb[kMaxExtensionDegree], co[kMaxExtensionDegree];
    unpack_ix(f, a, ca);
    unpack_ix(f, b, cb);
    mul_coeffs(f, ca, cb, co);
    return pack_ix(f, co);
}

inline uint64_t pow_ix(const FieldCtx& f, uint64_t a, uint64_t e) {
    if (a == 0) {
        if (e == 0) fail(Errc::ZeroToZero, "0^0 is undefined");
        return 0;
    }
    e %= f.q - 1;  // Lagrange
    uint64_t result = 1, base = a;
    while (e) {
        if (e & 1) result = mul_ix(f, result, base);
        base = mul_ix(f, base, base);
        e >>= 1;
    }
    return result;
}

inline int chi_ix(const FieldCtx& f, uint64_t a) {
    if (a == 0) return 0;
    if (f.has_square_table) return f.square[a] ? 1 : -1;
    return chi_ix_slow(f, a);
}

}  // namespace detail

struct FieldOptions {
    // Square table and coefficient cache are precomputed when q is at most
    // this; above it chi falls back to exponentiation.
    uint64_t chi_table_threshold = uint64_t{1} << 21;
};

class Field;

// Polynomial-basis element: n coefficients in [0, p), coefficient of x^i
// at position i. Canonical: two elements are equal iff their coefficient
// vectors are equal and they belong to the same field.
class FieldElem {
public:
    FieldElem() = default;

    const std::vector<uint32_t>& coeffs() const { return c_; }
    bool is_zero() const;

    friend bool operator==(const FieldElem& a, const FieldElem& b);
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a);

private:
    friend class Field;
    FieldElem(std::shared_ptr<const detail::FieldCtx> ctx, std::vector<uint32_t> c)
        : ctx_(std::move(ctx)), c_(std::move(c)) {}
    std::shared_ptr<const detail::FieldCtx> ctx_;
    std::vector<uint32_t> c_;
};

class Field {
public:
    // Canonical modulus (first irreducible in the coefficient-value order)
    // is found when none is supplied.
    Field(uint64_t p, uint32_t n, FieldOptions opts = {});
    Field(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus, FieldOptions opts = {});

    uint64_t p() const { return ctx_->p; }
    uint32_t n() const { return ctx_->n; }
    uint64_t q() const { return ctx_->q; }
    const std::vector<uint32_t>& modulus() const { return ctx_->modulus; }
    bool same_field(const Field& other) const;

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem embed(int64_t k) const;
    FieldElem elem(uint64_t index) const;
    FieldElem from_coeffs(std::vector<uint32_t> coeffs) const;
    uint64_t index(const FieldElem& a) const;

    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem inv(const FieldElem& a) const;
    FieldElem pow(const FieldElem& a, uint64_t e) const;
    int chi(const FieldElem& a) const;

    // index-keyed operations (hot paths of the enumeration engines)
    uint64_t add_ix(uint64_t a, uint64_t b) const { return detail::add_ix(*ctx_, a, b); }
    uint64_t sub_ix(uint64_t a, uint64_t b) const { return detail::sub_ix(*ctx_, a, b); }
    uint64_t neg_ix(uint64_t a) const { return detail::neg_ix(*ctx_, a); }
    uint64_t mul_ix(uint64_t a, uint64_t b) const { return detail::mul_ix(*ctx_, a, b); }
    uint64_t pow_ix(uint64_t a, uint64_t e) const { return detail::pow_ix(*ctx_, a, e); }
    uint64_t inv_ix(uint64_t a) const { return detail::inv_ix_impl(*ctx_, a); }
    uint64_t add_one_ix(uint64_t a) const { return detail::add_one_ix(*ctx_, a); }
    uint64_t sub_one_ix(uint64_t a) const { return detail::sub_one_ix(*ctx_, a); }
    int chi_ix(uint64_t a) const { return detail::chi_ix(*ctx_, a); }
    uint64_t one_ix() const { return 1; }
    uint64_t neg_one_ix() const { return ctx_->p - 1; }

    // index of x^d for every x; requires q to fit a 32-bit table
    std::vector<uint32_t> power_table(uint64_t d) const;
    // chi of every index
    std::vector<int8_t> chi_table_all() const;

    // Deterministic enumeration of all q elements in index order; the zero
    // element comes first.
    class ElemRange;
    ElemRange elements() const;

    // Text encoding: "c0,c1,...,c(n-1)" with each coefficient in [0, p);
    // a bare (possibly negative) integer is prime-subfield shorthand.
    std::string format(const FieldElem& a) const;
    FieldElem parse(std::string_view text) const;

private:
    friend class FieldElem;
    void require_same(const FieldElem& a) const;
    std::shared_ptr<const detail::FieldCtx> ctx_;
};

class Field::ElemRange {
public:
    class iterator {
    public:
        using value_type = FieldElem;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(std::shared_ptr<const detail::FieldCtx> ctx, uint64_t index);

        FieldElem operator*() const;
        iterator& operator++();
        iterator operator++(int);
        friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }
        friend bool operator!=(const iterator& a, const iterator& b) { return a.index_ != b.index_; }

    private:
        std::shared_ptr<const detail::FieldCtx> ctx_;
        uint64_t index_ = 0;
        std::vector<uint32_t> coeffs_;  // odometer
    };

    explicit ElemRange(std::shared_ptr<const detail::FieldCtx> ctx) : ctx_(std::move(ctx)) {}
    iterator begin() const { return iterator(ctx_, 0); }
    iterator end() const { return iterator(nullptr, ctx_->q); }

private:
    std::shared_ptr<const detail::FieldCtx> ctx_;
};

// First monic irreducible of degree n over F_p in the canonical order
// (ascending integer value of the non-leading coefficients). Requires
// n >= 2; deterministic across runs and platforms.
std::vector<uint32_t> find_irreducible(uint64_t p, uint32_t n);

bool is_prime(uint64_t m);

}  // namespace spectra

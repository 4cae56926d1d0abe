#include "spectra/field.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace spectra {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Polynomials over F_p as little-endian coefficient vectors with no
// trailing zero (except the zero polynomial, which is empty).
using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// remainder of f mod g, g monic
Poly poly_rem(Poly f, const Poly& g, uint64_t p) {
    trim(f);
    const size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const uint64_t c = f.back();
        const size_t shift = f.size() - 1 - dg;
        if (c) {
            for (size_t j = 0; j < g.size(); ++j) {
                uint64_t t = (uint64_t{f[shift + j]} + p - mulmod_u64(c, g[j], p) % p) % p;
                f[shift + j] = static_cast<uint32_t>(t);
            }
        }
        f.pop_back();
        trim(f);
    }
    return f;
}

bool divides(const Poly& g, const Poly& f, uint64_t p) { return poly_rem(f, g, p).empty(); }

Poly candidate_poly(uint64_t value, uint64_t p, uint32_t deg) {
    Poly f(deg + 1, 0);
    for (uint32_t i = 0; i < deg; ++i) {
        f[i] = static_cast<uint32_t>(value % p);
        value /= p;
    }
    f[deg] = 1;
    return f;
}

// Monic irreducibles of every degree up to maxdeg, each list in canonical
// (coefficient-value) order. Built recursively by trial division, which is
// fine at desk scale (n <= ~12).
std::vector<std::vector<Poly>> monic_irreducibles(uint64_t p, uint32_t maxdeg) {
    std::vector<std::vector<Poly>> table(maxdeg + 1);
    if (maxdeg >= 1) {
        for (uint64_t a = 0; a < p; ++a) table[1].push_back(Poly{static_cast<uint32_t>(a), 1});
    }
    for (uint32_t deg = 2; deg <= maxdeg; ++deg) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < deg; ++i) count *= p;
        for (uint64_t v = 0; v < count; ++v) {
            Poly f = candidate_poly(v, p, deg);
            bool irreducible = true;
            for (uint32_t d2 = 1; d2 <= deg / 2 && irreducible; ++d2) {
                for (const Poly& g : table[d2]) {
                    if (divides(g, f, p)) {
                        irreducible = false;
                        break;
                    }
                }
            }
            if (irreducible) table[deg].push_back(std::move(f));
        }
    }
    return table;
}

bool is_irreducible_poly(const Poly& f, uint64_t p, const std::vector<std::vector<Poly>>& table) {
    const uint32_t deg = static_cast<uint32_t>(f.size() - 1);
    for (uint32_t d2 = 1; d2 <= deg / 2; ++d2) {
        for (const Poly& g : table[d2]) {
            if (divides(g, f, p)) return false;
        }
    }
    return true;
}

uint64_t checked_pow(uint64_t p, uint32_t n) {
    uint64_t q = 1;
    for (uint32_t i = 0; i < n; ++i) {
        if (__builtin_mul_overflow(q, p, &q)) fail(Errc::OrderOverflow, "p^n exceeds 64 bits");
    }
    return q;
}

void validate_characteristic(uint64_t p) {
    if (p == 2) fail(Errc::EvenCharacteristic, "characteristic 2 is out of scope");
    if (!is_prime(p)) fail(Errc::NonPrime, "p = " + std::to_string(p) + " is not prime");
}

std::shared_ptr<detail::FieldCtx> build_ctx(uint64_t p, uint32_t n,
                                            const std::vector<uint32_t>* modulus,
                                            const FieldOptions& opts) {
    validate_characteristic(p);
    if (n < 1) fail(Errc::BadConfig, "degree must be at least 1");
    if (n > detail::kMaxExtensionDegree) fail(Errc::BadConfig, "degree exceeds supported maximum");

    auto ctx = std::make_shared<detail::FieldCtx>();
    ctx->p = p;
    ctx->n = n;
    ctx->q = checked_pow(p, n);
    ctx->chi_threshold = opts.chi_table_threshold;
    if (p >= (uint64_t{1} << 62)) fail(Errc::OrderOverflow, "p exceeds the supported width");

    if (n >= 2) {
        // product accumulators must hold (2n-1)(p-1)^2
        const uint64_t limit = UINT64_MAX / (2 * uint64_t{n} - 1);
        if (p - 1 > UINT32_MAX || (p - 1) * (p - 1) > limit)
            fail(Errc::OrderOverflow, "coefficient arithmetic would overflow");

        if (modulus != nullptr && !modulus->empty()) {
            const auto& m = *modulus;
            if (m.size() != size_t{n} + 1 || m.back() != 1)
                fail(Errc::BadConfig, "modulus must be monic of degree n");
            for (uint32_t c : m)
                if (c >= p) fail(Errc::BadConfig, "modulus coefficient out of range");
            auto table = monic_irreducibles(p, n / 2);
            if (!is_irreducible_poly(m, p, table))
                fail(Errc::ReducibleModulus, "supplied modulus is reducible");
            ctx->modulus = m;
        } else {
            ctx->modulus = find_irreducible(p, n);
        }

        // rows of x^{n+k} mod modulus for k = 0..n-2
        ctx->reduction.assign(size_t{n - 1} * n, 0);
        std::vector<uint32_t> row(n);
        for (uint32_t j = 0; j < n; ++j) row[j] = static_cast<uint32_t>((p - ctx->modulus[j]) % p);
        for (uint32_t k = 0; k + 1 < n; ++k) {
            std::copy(row.begin(), row.end(), ctx->reduction.begin() + size_t{k} * n);
            if (k + 2 < n) {
                // multiply by x: shift up, fold the overflow coefficient
                uint64_t top = row[n - 1];
                for (uint32_t j = n - 1; j > 0; --j) row[j] = row[j - 1];
                row[0] = 0;
                if (top) {
                    const uint32_t* r0 = &ctx->reduction[0];
                    for (uint32_t j = 0; j < n; ++j)
                        row[j] = static_cast<uint32_t>((row[j] + top * r0[j]) % p);
                }
            }
        }
    } else if (modulus != nullptr && !modulus->empty()) {
        fail(Errc::BadConfig, "prime fields take no modulus");
    }

    if (ctx->q <= ctx->chi_threshold) {
        if (n >= 2) {
            ctx->coeff_cache.assign(ctx->q * n, 0);
            std::vector<uint32_t> odo(n, 0);
            for (uint64_t ix = 0; ix < ctx->q; ++ix) {
                uint16_t* dst = &ctx->coeff_cache[ix * n];
                for (uint32_t i = 0; i < n; ++i) dst[i] = static_cast<uint16_t>(odo[i]);
                for (uint32_t i = 0; i < n; ++i) {
                    if (++odo[i] < p) break;
                    odo[i] = 0;
                }
            }
            ctx->has_coeff_cache = true;
        }
        // one pass of q multiplications
        ctx->square.assign(ctx->q, false);
        for (uint64_t ix = 1; ix < ctx->q; ++ix)
            ctx->square[detail::mul_ix(*ctx, ix, ix)] = true;
        ctx->has_square_table = true;
    }
    return ctx;
}

}  // namespace

bool is_prime(uint64_t m) {
    if (m < 2) return false;
    for (uint64_t s : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (m % s == 0) return m == s;
    }
    uint64_t d = m - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // deterministic Miller-Rabin for 64-bit inputs
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, m);
            if (x == m - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<uint32_t> find_irreducible(uint64_t p, uint32_t n) {
    validate_characteristic(p);
    if (n < 2) fail(Errc::BadConfig, "find_irreducible needs degree >= 2");
    auto table = monic_irreducibles(p, n / 2);
    const uint64_t count = checked_pow(p, n);
    for (uint64_t v = 0; v < count; ++v) {
        Poly f = candidate_poly(v, p, n);
        if (is_irreducible_poly(f, p, table)) return f;
    }
    fail(Errc::Internal, "no irreducible polynomial found");  // unreachable
}

namespace detail {

bool structurally_equal(const FieldCtx& a, const FieldCtx& b) {
    return a.p == b.p && a.n == b.n && a.modulus == b.modulus;
}

int chi_ix_slow(const FieldCtx& f, uint64_t a) {
    return pow_ix(f, a, (f.q - 1) / 2) == 1 ? 1 : -1;
}

uint64_t inv_ix_impl(const FieldCtx& f, uint64_t a) {
    if (a == 0) fail(Errc::ZeroInverse, "zero has no inverse");
    if (f.n == 1) return powmod_u64(a, f.p - 2, f.p);
    // extended Euclid on polynomials against the modulus
    const uint64_t p = f.p;
    Poly r0(f.modulus.begin(), f.modulus.end());
    Poly r1(f.n);
    {
        uint32_t c[kMaxExtensionDegree];
        unpack_ix(f, a, c);
        r1.assign(c, c + f.n);
    }
    trim(r1);
    Poly t0;             // 0
    Poly t1 = {1};       // 1
    auto scale = [&](const Poly& g, uint64_t s) {
        Poly out(g.size());
        for (size_t i = 0; i < g.size(); ++i) out[i] = static_cast<uint32_t>(mulmod_u64(g[i], s, p));
        return out;
    };
    auto sub_poly = [&](Poly x, const Poly& y) {
        if (x.size() < y.size()) x.resize(y.size(), 0);
        for (size_t i = 0; i < y.size(); ++i)
            x[i] = static_cast<uint32_t>((uint64_t{x[i]} + p - y[i]) % p);
        trim(x);
        return x;
    };
    while (!r1.empty()) {
        // divide r0 by r1
        Poly quo(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
        Poly rem = r0;
        const uint64_t lead_inv = powmod_u64(r1.back(), p - 2, p);
        while (rem.size() >= r1.size() && !rem.empty()) {
            const size_t shift = rem.size() - r1.size();
            const uint64_t c = mulmod_u64(rem.back(), lead_inv, p);
            quo[shift] = static_cast<uint32_t>(c);
            for (size_t j = 0; j < r1.size(); ++j) {
                uint64_t t = (uint64_t{rem[shift + j]} + p - mulmod_u64(c, r1[j], p)) % p;
                rem[shift + j] = static_cast<uint32_t>(t);
            }
            trim(rem);
        }
        // multiply quo * t1
        Poly qt(quo.size() + t1.size(), 0);
        for (size_t i = 0; i < quo.size(); ++i) {
            if (quo[i] == 0) continue;
            for (size_t j = 0; j < t1.size(); ++j) {
                qt[i + j] = static_cast<uint32_t>((qt[i + j] + mulmod_u64(quo[i], t1[j], p)) % p);
            }
        }
        trim(qt);
        Poly t2 = sub_poly(t0, qt);
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // r0 is the gcd, a nonzero constant (modulus irreducible)
    if (r0.size() != 1) fail(Errc::Internal, "gcd with irreducible modulus is not constant");
    const uint64_t norm = powmod_u64(r0[0], p - 2, p);
    uint32_t out[kMaxExtensionDegree] = {0};
    for (size_t i = 0; i < t0.size(); ++i) out[i] = static_cast<uint32_t>(mulmod_u64(t0[i], norm, p));
    return pack_ix(f, out);
}

}  // namespace detail

Field::Field(uint64_t p, uint32_t n, FieldOptions opts) : ctx_(build_ctx(p, n, nullptr, opts)) {}

Field::Field(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus, FieldOptions opts)
    : ctx_(build_ctx(p, n, &modulus, opts)) {}

bool Field::same_field(const Field& other) const {
    return ctx_ == other.ctx_ || detail::structurally_equal(*ctx_, *other.ctx_);
}

void Field::require_same(const FieldElem& a) const {
    if (a.ctx_ == ctx_) return;
    if (a.ctx_ == nullptr || !detail::structurally_equal(*a.ctx_, *ctx_))
        fail(Errc::MixedFields, "element belongs to a different field");
}

bool FieldElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](uint32_t c) { return c == 0; });
}

bool operator==(const FieldElem& a, const FieldElem& b) {
    if (a.ctx_ != b.ctx_) {
        if (a.ctx_ == nullptr || b.ctx_ == nullptr) return false;
        if (!spectra::detail::structurally_equal(*a.ctx_, *b.ctx_)) return false;
    }
    return a.c_ == b.c_;
}

FieldElem Field::zero() const { return FieldElem(ctx_, std::vector<uint32_t>(ctx_->n, 0)); }

FieldElem Field::one() const {
    std::vector<uint32_t> c(ctx_->n, 0);
    c[0] = 1;
    return FieldElem(ctx_, std::move(c));
}

FieldElem Field::embed(int64_t k) const {
    const int64_t p = static_cast<int64_t>(ctx_->p);
    int64_t r = k % p;
    if (r < 0) r += p;
    std::vector<uint32_t> c(ctx_->n, 0);
    c[0] = static_cast<uint32_t>(r);
    return FieldElem(ctx_, std::move(c));
}

FieldElem Field::elem(uint64_t index) const {
    if (index >= ctx_->q) fail(Errc::BadElement, "element index out of range");
    std::vector<uint32_t> c(ctx_->n);
    detail::unpack_ix(*ctx_, index, c.data());
    return FieldElem(ctx_, std::move(c));
}

FieldElem Field::from_coeffs(std::vector<uint32_t> coeffs) const {
    if (coeffs.size() != ctx_->n) fail(Errc::BadElement, "coefficient count must equal the degree");
    for (uint32_t c : coeffs)
        if (c >= ctx_->p) fail(Errc::BadElement, "coefficient out of range");
    return FieldElem(ctx_, std::move(coeffs));
}

uint64_t Field::index(const FieldElem& a) const {
    require_same(a);
    return detail::pack_ix(*ctx_, a.c_.data());
}

FieldElem Field::add(const FieldElem& a, const FieldElem& b) const {
    require_same(a);
    require_same(b);
    std::vector<uint32_t> out(ctx_->n);
    for (uint32_t i = 0; i < ctx_->n; ++i) {
        uint64_t s = uint64_t{a.c_[i]} + b.c_[i];
        if (s >= ctx_->p) s -= ctx_->p;
        out[i] = static_cast<uint32_t>(s);
    }
    return FieldElem(ctx_, std::move(out));
}

FieldElem Field::sub(const FieldElem& a, const FieldElem& b) const {
    require_same(a);
    require_same(b);
    std::vector<uint32_t> out(ctx_->n);
    for (uint32_t i = 0; i < ctx_->n; ++i) {
        uint64_t s = a.c_[i] >= b.c_[i] ? uint64_t{a.c_[i]} - b.c_[i]
                                        : uint64_t{a.c_[i]} + ctx_->p - b.c_[i];
        out[i] = static_cast<uint32_t>(s);
    }
    return FieldElem(ctx_, std::move(out));
}

FieldElem Field::neg(const FieldElem& a) const { return sub(zero(), a); }

FieldElem Field::mul(const FieldElem& a, const FieldElem& b) const {
    require_same(a);
    require_same(b);
    if (ctx_->n == 1) {
        std::vector<uint32_t> out{
            static_cast<uint32_t>(mulmod_u64(a.c_[0], b.c_[0], ctx_->p))};
        return FieldElem(ctx_, std::move(out));
    }
    std::vector<uint32_t> out(ctx_->n);
    detail::mul_coeffs(*ctx_, a.c_.data(), b.c_.data(), out.data());
    return FieldElem(ctx_, std::move(out));
}

FieldElem Field::inv(const FieldElem& a) const {
    require_same(a);
    if (a.is_zero()) fail(Errc::ZeroInverse, "zero has no inverse");
    return elem(detail::inv_ix_impl(*ctx_, detail::pack_ix(*ctx_, a.c_.data())));
}

FieldElem Field::pow(const FieldElem& a, uint64_t e) const {
    require_same(a);
    if (a.is_zero()) {
        if (e == 0) fail(Errc::ZeroToZero, "0^0 is undefined");
        return zero();
    }
    e %= ctx_->q - 1;
    FieldElem result = one();
    FieldElem base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

int Field::chi(const FieldElem& a) const {
    require_same(a);
    if (a.is_zero()) return 0;
    if (ctx_->has_square_table) return ctx_->square[detail::pack_ix(*ctx_, a.c_.data())] ? 1 : -1;
    return pow(a, (ctx_->q - 1) / 2) == one() ? 1 : -1;
}

std::vector<uint32_t> Field::power_table(uint64_t d) const {
    if (d == 0) fail(Errc::BadConfig, "power table requires d >= 1");
    if (ctx_->q > UINT32_MAX) fail(Errc::BadConfig, "field too large for table enumeration");
    std::vector<uint32_t> table(ctx_->q);
    table[0] = 0;
    for (uint64_t ix = 1; ix < ctx_->q; ++ix)
        table[ix] = static_cast<uint32_t>(detail::pow_ix(*ctx_, ix, d));
    return table;
}

std::vector<int8_t> Field::chi_table_all() const {
    if (ctx_->q > UINT32_MAX) fail(Errc::BadConfig, "field too large for table enumeration");
    std::vector<int8_t> table(ctx_->q);
    for (uint64_t ix = 0; ix < ctx_->q; ++ix) table[ix] = static_cast<int8_t>(detail::chi_ix(*ctx_, ix));
    return table;
}

Field::ElemRange Field::elements() const { return ElemRange(ctx_); }

Field::ElemRange::iterator::iterator(std::shared_ptr<const detail::FieldCtx> ctx, uint64_t index)
    : ctx_(std::move(ctx)), index_(index) {
    if (ctx_) coeffs_.assign(ctx_->n, 0);
}

FieldElem Field::ElemRange::iterator::operator*() const { return FieldElem(ctx_, coeffs_); }

Field::ElemRange::iterator& Field::ElemRange::iterator::operator++() {
    ++index_;
    for (uint32_t i = 0; i < ctx_->n; ++i) {
        if (++coeffs_[i] < ctx_->p) break;
        coeffs_[i] = 0;
    }
    return *this;
}

Field::ElemRange::iterator Field::ElemRange::iterator::operator++(int) {
    iterator tmp = *this;
    ++*this;
    return tmp;
}

std::string Field::format(const FieldElem& a) const {
    require_same(a);
    std::ostringstream out;
    for (uint32_t i = 0; i < ctx_->n; ++i) {
        if (i) out << ',';
        out << a.c_[i];
    }
    return out.str();
}

FieldElem Field::parse(std::string_view text) const {
    auto parse_int = [](std::string_view s, int64_t& out) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        if (s.empty()) return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    };
    if (text.find(',') == std::string_view::npos) {
        int64_t v = 0;
        if (!parse_int(text, v)) fail(Errc::BadElement, "cannot parse element '" + std::string(text) + "'");
        return embed(v);
    }
    std::vector<uint32_t> coeffs;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        std::string_view tok = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
        int64_t v = 0;
        if (!parse_int(tok, v) || v < 0 || static_cast<uint64_t>(v) >= ctx_->p)
            fail(Errc::BadElement, "coefficient out of range in '" + std::string(text) + "'");
        coeffs.push_back(static_cast<uint32_t>(v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (coeffs.size() != ctx_->n)
        fail(Errc::BadElement, "expected " + std::to_string(ctx_->n) + " coefficients");
    return FieldElem(ctx_, std::move(coeffs));
}

namespace {

const detail::FieldCtx& common_ctx(const FieldElem& a, const FieldElem& b,
                                   const std::shared_ptr<const detail::FieldCtx>& actx,
                                   const std::shared_ptr<const detail::FieldCtx>& bctx) {
    (void)a;
    (void)b;
    if (!actx || !bctx) fail(Errc::MixedFields, "element has no field");
    if (actx != bctx && !detail::structurally_equal(*actx, *bctx))
        fail(Errc::MixedFields, "elements belong to different fields");
    return *actx;
}

}  // namespace

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    const auto& f = common_ctx(a, b, a.ctx_, b.ctx_);
    std::vector<uint32_t> out(f.n);
    for (uint32_t i = 0; i < f.n; ++i) {
        uint64_t s = uint64_t{a.c_[i]} + b.c_[i];
        if (s >= f.p) s -= f.p;
        out[i] = static_cast<uint32_t>(s);
    }
    return FieldElem(a.ctx_, std::move(out));
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    const auto& f = common_ctx(a, b, a.ctx_, b.ctx_);
    std::vector<uint32_t> out(f.n);
    for (uint32_t i = 0; i < f.n; ++i) {
        out[i] = static_cast<uint32_t>(a.c_[i] >= b.c_[i] ? uint64_t{a.c_[i]} - b.c_[i]
                                                          : uint64_t{a.c_[i]} + f.p - b.c_[i]);
    }
    return FieldElem(a.ctx_, std::move(out));
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    const auto& f = common_ctx(a, b, a.ctx_, b.ctx_);
    std::vector<uint32_t> out(f.n);
    if (f.n == 1) {
        out[0] = static_cast<uint32_t>(mulmod_u64(a.c_[0], b.c_[0], f.p));
    } else {
        detail::mul_coeffs(f, a.c_.data(), b.c_.data(), out.data());
    }
    return FieldElem(a.ctx_, std::move(out));
}

FieldElem operator-(const FieldElem& a) {
    if (!a.ctx_) fail(Errc::MixedFields, "element has no field");
    const auto& f = *a.ctx_;
    std::vector<uint32_t> out(f.n);
    for (uint32_t i = 0; i < f.n; ++i)
        out[i] = static_cast<uint32_t>((f.p - a.c_[i]) % f.p);
    return FieldElem(a.ctx_, std::move(out));
}

}  // namespace spectra

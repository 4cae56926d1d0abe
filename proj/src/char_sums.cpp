#include "spectra/char_sums.hpp"

#include <array>
#include <cmath>

namespace spectra {

namespace {

// embeds an integer coefficient as an element index (constant polynomial)
uint64_t embed_ix(const Field& f, int64_t k) {
    const int64_t p = static_cast<int64_t>(f.p());
    int64_t r = k % p;
    if (r < 0) r += p;
    return static_cast<uint64_t>(r);
}

int64_t cubic_discriminant_mod_p(const CubicSpec& c, uint64_t p) {
    // monic normalization is not needed for the zero test: disc(a3 f) and
    // disc(f) vanish together when a3 != 0
    const auto m = [&](int64_t v) {
        int64_t r = v % static_cast<int64_t>(p);
        return r < 0 ? r + static_cast<int64_t>(p) : r;
    };
    // reduce to monic x^3 + bx^2 + cx + d via division by a3
    const int64_t ip = static_cast<int64_t>(p);
    auto mul = [&](int64_t x, int64_t y) {
        return static_cast<int64_t>(static_cast<__int128>(x) * y % ip);
    };
    int64_t a3 = m(c.a3);
    if (a3 == 0) fail(Errc::BadConfig, "cubic leading coefficient vanishes mod p");
    // modular inverse of a3
    int64_t inv = 1, base = a3, e = ip - 2;
    while (e) {
        if (e & 1) inv = mul(inv, base);
        base = mul(base, base);
        e >>= 1;
    }
    const int64_t b = mul(m(c.a2), inv);
    const int64_t cc = mul(m(c.a1), inv);
    const int64_t d = mul(m(c.a0), inv);
    // disc = 18bcd - 4b^3 d + b^2 c^2 - 4c^3 - 27d^2 (mod p)
    int64_t t = 0;
    t = (t + mul(mul(18 % ip, mul(b, cc)), d)) % ip;
    t = (t - mul(mul(4 % ip, mul(b, mul(b, b))), d) % ip + ip) % ip;
    t = (t + mul(mul(b, b), mul(cc, cc))) % ip;
    t = (t - mul(4 % ip, mul(cc, mul(cc, cc))) % ip + ip) % ip;
    t = (t - mul(27 % ip, mul(d, d)) % ip + ip) % ip;
    return t;
}

}  // namespace

CubicSpec lambda1_cubic() { return CubicSpec{1, 4, -1, 0, "x(x^2+4x-1)"}; }
CubicSpec lambda2_cubic() { return CubicSpec{1, -2, 5, 0, "x(x^2-2x+5)"}; }

int64_t char_sum_poly(const Field& field, std::span<const int64_t> coeffs) {
    if (coeffs.empty()) fail(Errc::BadConfig, "empty polynomial");
    const uint64_t q = field.q();
    std::vector<uint64_t> c_ix(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c_ix[i] = embed_ix(field, coeffs[i]);
    const auto chi = field.chi_table_all();
    int64_t sum = 0;
    for (uint64_t x = 0; x < q; ++x) {
        uint64_t acc = c_ix[coeffs.size() - 1];
        for (size_t i = coeffs.size() - 1; i-- > 0;)
            acc = field.add_ix(field.mul_ix(acc, x), c_ix[i]);
        sum += chi[acc];
    }
    return sum;
}

int64_t quad_char_sum(const Field& field, const FieldElem& a2, const FieldElem& a1,
                      const FieldElem& a0) {
    if (a2.is_zero()) fail(Errc::DegenerateQuadratic, "a2 must be nonzero");
    const FieldElem disc = field.sub(field.mul(a1, a1),
                                     field.mul(field.embed(4), field.mul(a0, a2)));
    const int chi_a2 = field.chi(a2);
    if (disc.is_zero()) return static_cast<int64_t>(field.q() - 1) * chi_a2;
    return -chi_a2;
}

int64_t cubic_char_sum_direct(const Field& field, const CubicSpec& cubic) {
    if (embed_ix(field, cubic.a3) == 0)
        fail(Errc::BadConfig, "cubic leading coefficient vanishes mod p");
    const std::array<int64_t, 4> coeffs{cubic.a0, cubic.a1, cubic.a2, cubic.a3};
    return char_sum_poly(field, coeffs);
}

int64_t gamma_recurrence(uint64_t p, uint32_t n, int64_t gamma1) {
    if (n < 1) fail(Errc::BadConfig, "degree must be at least 1");
    const __int128 g = gamma1;
    if (g * g > static_cast<__int128>(4) * p)
        fail(Errc::HasseViolation,
             "|gamma_1| exceeds 2 sqrt(p); singular curve or wrong input");
    __int128 s_prev = 2;
    __int128 s_cur = -g;
    for (uint32_t k = 2; k <= n; ++k) {
        __int128 a, b, s_next;
        if (__builtin_mul_overflow(-g, s_cur, &a) ||
            __builtin_mul_overflow(static_cast<__int128>(p), s_prev, &b) ||
            __builtin_sub_overflow(a, b, &s_next))
            fail(Errc::Overflow, "trace recurrence exceeds 128 bits");
        s_prev = s_cur;
        s_cur = s_next;
    }
    const __int128 gamma_n = -s_cur;
    if (gamma_n > INT64_MAX || gamma_n < INT64_MIN)
        fail(Errc::Overflow, "Gamma_{p,n} exceeds 64 bits");
    return static_cast<int64_t>(gamma_n);
}

CharSumReport lambda_report(const Field& field, SumMethod method) {
    CharSumReport rep;
    rep.method = method;
    const CubicSpec f1 = lambda1_cubic();
    const CubicSpec f2 = lambda2_cubic();
    if (method == SumMethod::Direct) {
        rep.lambda1 = cubic_char_sum_direct(field, f1);
        rep.lambda2 = cubic_char_sum_direct(field, f2);
    } else {
        for (const CubicSpec* c : {&f1, &f2}) {
            if (cubic_discriminant_mod_p(*c, field.p()) == 0)
                fail(Errc::SingularCurve,
                     "curve y^2 = " + c->name + " is singular mod " + std::to_string(field.p()));
        }
        // Gamma_{p,1} always comes from direct summation over the prime field
        const Field prime_field(field.p(), 1);
        const int64_t g1 = cubic_char_sum_direct(prime_field, f1);
        const int64_t g2 = cubic_char_sum_direct(prime_field, f2);
        rep.lambda1 = gamma_recurrence(field.p(), field.n(), g1);
        rep.lambda2 = gamma_recurrence(field.p(), field.n(), g2);
    }
    rep.lambda = rep.lambda1 + rep.lambda2;
    const __int128 bound = static_cast<__int128>(4) * field.q();
    for (int64_t l : {rep.lambda1, rep.lambda2}) {
        if (static_cast<__int128>(l) * l > bound)
            fail(Errc::HasseViolation, "lambda component violates the Hasse bound");
    }
    const double root = 2.0 * std::sqrt(static_cast<double>(field.q()));
    rep.hasse_margin1 = root - std::abs(static_cast<double>(rep.lambda1));
    rep.hasse_margin2 = root - std::abs(static_cast<double>(rep.lambda2));
    return rep;
}

CharIdentities check_char_identities(const Field& field) {
    if (field.q() % 4 != 3)
        fail(Errc::WrongCongruence, "identities require q = 3 (mod 4)");
    CharIdentities out;
    // x(x^2-1) = x^3 - x
    const std::array<int64_t, 4> f_i{0, -1, 0, 1};
    // x(x^2-1)(x^2+4x-1) = x^5 + 4x^4 - 2x^3 - 4x^2 + x
    const std::array<int64_t, 6> f_ii{0, 1, -4, -2, 4, 1};
    // (x^2-1)(x^2+4x-1) = x^4 + 4x^3 - 2x^2 - 4x + 1
    const std::array<int64_t, 5> f_iii{1, -4, -2, 4, 1};
    out.sum_i = char_sum_poly(field, f_i);
    out.sum_ii = char_sum_poly(field, f_ii);
    out.sum_iii = char_sum_poly(field, f_iii);
    out.lambda2 = cubic_char_sum_direct(field, lambda2_cubic());
    out.i_ok = out.sum_i == 0;
    out.ii_ok = out.sum_ii == 0;
    out.iii_ok = out.sum_iii == out.lambda2 - 1;
    return out;
}

}  // namespace spectra

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "spectra/field.hpp"

using namespace spectra;

namespace {

bool throws_code(Errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("construction and canonical moduli") {
    const Field f7(7, 1);
    CHECK(f7.p() == 7);
    CHECK(f7.q() == 7);
    CHECK(f7.modulus().empty());

    // golden value from exhaustive ordered search with trial division
    const Field f243(3, 5);
    CHECK(f243.q() == 243);
    CHECK(f243.modulus() == std::vector<uint32_t>{1, 2, 0, 0, 0, 1});

    CHECK(throws_code(Errc::NonPrime, [] { Field f(4, 2); }));
    CHECK(throws_code(Errc::NonPrime, [] { Field f(9, 1); }));
    CHECK(throws_code(Errc::NonPrime, [] { Field f(1, 1); }));
    CHECK(throws_code(Errc::EvenCharacteristic, [] { Field f(2, 3); }));
    CHECK(throws_code(Errc::OrderOverflow, [] { Field f(3, 50); }));
    CHECK(throws_code(Errc::BadConfig, [] { Field f(3, 0); }));
}

TEST_CASE("find_irreducible golden values") {
    CHECK(find_irreducible(3, 2) == std::vector<uint32_t>{1, 0, 1});
    CHECK(find_irreducible(7, 2) == std::vector<uint32_t>{1, 0, 1});
    CHECK(find_irreducible(3, 3) == std::vector<uint32_t>{1, 2, 0, 1});
    CHECK(find_irreducible(7, 3) == std::vector<uint32_t>{2, 0, 0, 1});
    CHECK(find_irreducible(11, 3) == std::vector<uint32_t>{4, 1, 0, 1});
    CHECK(throws_code(Errc::BadConfig, [] { find_irreducible(3, 1); }));
}

TEST_CASE("user-supplied modulus") {
    const Field alt(3, 3, std::vector<uint32_t>{2, 2, 0, 1});
    CHECK(alt.modulus() == std::vector<uint32_t>{2, 2, 0, 1});
    // x^3 + 1 has the root -1
    CHECK(throws_code(Errc::ReducibleModulus, [] { Field f(3, 3, std::vector<uint32_t>{1, 0, 0, 1}); }));
    CHECK(throws_code(Errc::BadConfig, [] { Field f(3, 3, std::vector<uint32_t>{1, 2, 0, 2}); }));
    CHECK(throws_code(Errc::BadConfig, [] { Field f(3, 3, std::vector<uint32_t>{1, 2, 1}); }));
    CHECK(throws_code(Errc::BadConfig, [] { Field f(7, 1, std::vector<uint32_t>{1, 1}); }));
}

TEST_CASE("basic arithmetic") {
    const Field f9(3, 2);  // modulus x^2 + 1
    const FieldElem x = f9.elem(3);
    CHECK(x.coeffs() == std::vector<uint32_t>{0, 1});
    CHECK(f9.mul(x, x) == f9.embed(-1));
    CHECK(f9.mul(x, x) == f9.embed(2));
    CHECK(f9.add(x, f9.neg(x)) == f9.zero());
    for (const FieldElem& y : f9.elements()) {
        CHECK(f9.mul(f9.one(), y) == y);
        CHECK(f9.add(y, f9.neg(y)).is_zero());
    }
    // operator sugar matches the named operations
    CHECK(x + x == f9.add(x, x));
    CHECK(x - x == f9.zero());
    CHECK(x * x == f9.embed(2));
    CHECK(-x == f9.neg(x));
}

TEST_CASE("mixed fields rejected") {
    const Field f7(7, 1);
    const Field f11(11, 1);
    CHECK(throws_code(Errc::MixedFields, [&] { f7.add(f7.one(), f11.one()); }));
    const Field a(3, 3);
    const Field b(3, 3, std::vector<uint32_t>{2, 2, 0, 1});
    CHECK(throws_code(Errc::MixedFields, [&] { a.add(a.one(), b.one()); }));
    // two instances of the same field interoperate
    const Field a2(3, 3);
    CHECK(a.add(a.one(), a2.one()) == a.embed(2));
    CHECK(a.same_field(a2));
    CHECK(!a.same_field(b));
}

TEST_CASE("inverse") {
    const Field f7(7, 1);
    CHECK(f7.inv(f7.one()) == f7.one());
    CHECK(f7.inv(f7.embed(2)) == f7.embed(4));
    CHECK(throws_code(Errc::ZeroInverse, [&] { f7.inv(f7.zero()); }));
    const Field f27(3, 3);
    for (uint64_t ix = 1; ix < f27.q(); ++ix) {
        const FieldElem a = f27.elem(ix);
        CHECK(f27.mul(a, f27.inv(a)) == f27.one());
        CHECK(f27.mul_ix(ix, f27.inv_ix(ix)) == 1);
    }
}

TEST_CASE("pow") {
    const Field f11(11, 1);
    CHECK(f11.pow(f11.embed(2), 4) == f11.embed(5));
    CHECK(f11.pow(f11.zero(), 4) == f11.zero());
    CHECK(throws_code(Errc::ZeroToZero, [&] { f11.pow(f11.zero(), 0); }));
    const Field f27(3, 3);
    for (uint64_t ix = 1; ix < f27.q(); ++ix) {
        CHECK(f27.pow_ix(ix, f27.q() - 1) == 1);
        CHECK(f27.mul_ix(f27.pow_ix(ix, 5), f27.pow_ix(ix, 7)) == f27.pow_ix(ix, 12));
    }
}

TEST_CASE("chi golden values and properties") {
    const Field f343(7, 3);
    CHECK(f343.chi(f343.embed(5)) == -1);
    const Field f1331(11, 3);
    CHECK(f1331.chi(f1331.embed(5)) == 1);

    for (const Field& f : {Field(7, 1), Field(3, 3), Field(3, 2), Field(11, 1)}) {
        CHECK(f.chi(f.zero()) == 0);
        // multiplicativity, exhaustive
        for (uint64_t a = 0; a < f.q(); ++a)
            for (uint64_t b = 0; b < f.q(); ++b)
                CHECK(f.chi_ix(f.mul_ix(a, b)) == f.chi_ix(a) * f.chi_ix(b));
        // chi(-1) = -1 exactly when q = 3 (mod 4)
        CHECK(f.chi(f.embed(-1)) == (f.q() % 4 == 3 ? -1 : 1));
        // exactly (q-1)/2 nonzero squares
        uint64_t squares = 0;
        for (uint64_t a = 1; a < f.q(); ++a) squares += f.chi_ix(a) == 1 ? 1 : 0;
        CHECK(squares == (f.q() - 1) / 2);
    }
}

TEST_CASE("chi table agrees with the exponentiation fallback") {
    FieldOptions no_table;
    no_table.chi_table_threshold = 0;
    const Field cached(3, 3);
    const Field plain(3, 3, no_table);
    for (uint64_t ix = 0; ix < cached.q(); ++ix)
        CHECK(cached.chi_ix(ix) == plain.chi_ix(ix));
    // index arithmetic takes the uncached path too
    for (uint64_t a = 0; a < plain.q(); ++a) {
        CHECK(plain.add_ix(a, 5) == cached.add_ix(a, 5));
        CHECK(plain.mul_ix(a, 17) == cached.mul_ix(a, 17));
    }
}

TEST_CASE("embed") {
    const Field f7(7, 1);
    CHECK(f7.embed(0).is_zero());
    CHECK(f7.embed(7).is_zero());
    CHECK(f7.embed(-1) == f7.elem(6));
    const Field f27(3, 3);
    CHECK(f27.embed(-4) == f27.embed(2));
}

TEST_CASE("enumeration") {
    const Field f7(7, 1);
    uint64_t expect = 0;
    for (const FieldElem& e : f7.elements()) CHECK(f7.index(e) == expect++);
    CHECK(expect == 7);

    const Field f243(3, 5);
    std::set<uint64_t> seen;
    for (const FieldElem& e : f243.elements()) seen.insert(f243.index(e));
    CHECK(seen.size() == 243);
    CHECK(*seen.begin() == 0);
    CHECK(f243.elem(0).is_zero());
    for (uint64_t ix = 0; ix < f243.q(); ++ix) CHECK(f243.index(f243.elem(ix)) == ix);
}

TEST_CASE("index arithmetic matches element arithmetic") {
    for (const Field& f : {Field(11, 1), Field(3, 5), Field(7, 2)}) {
        const uint64_t step = f.q() / 23 + 1;
        for (uint64_t a = 0; a < f.q(); a += step) {
            for (uint64_t b = 0; b < f.q(); b += step) {
                const FieldElem ea = f.elem(a), eb = f.elem(b);
                CHECK(f.add_ix(a, b) == f.index(f.add(ea, eb)));
                CHECK(f.sub_ix(a, b) == f.index(f.sub(ea, eb)));
                CHECK(f.mul_ix(a, b) == f.index(f.mul(ea, eb)));
            }
            CHECK(f.add_one_ix(a) == f.index(f.add(f.elem(a), f.one())));
            CHECK(f.sub_one_ix(a) == f.index(f.sub(f.elem(a), f.one())));
            CHECK(f.neg_ix(a) == f.index(f.neg(f.elem(a))));
        }
    }
}

TEST_CASE("element text encoding") {
    const Field f27(3, 3);
    for (uint64_t ix = 0; ix < f27.q(); ++ix) {
        const FieldElem e = f27.elem(ix);
        CHECK(f27.parse(f27.format(e)) == e);
    }
    CHECK(f27.parse("5") == f27.embed(5));
    CHECK(f27.parse("-1") == f27.embed(-1));
    CHECK(f27.parse("1,2,0") == f27.from_coeffs({1, 2, 0}));
    CHECK(throws_code(Errc::BadElement, [&] { f27.parse("1,2"); }));
    CHECK(throws_code(Errc::BadElement, [&] { f27.parse("3,0,0"); }));
    CHECK(throws_code(Errc::BadElement, [&] { f27.parse("x"); }));
    CHECK(throws_code(Errc::BadElement, [&] { f27.parse(""); }));

    const Field f7(7, 1);
    CHECK(f7.format(f7.embed(5)) == "5");
    CHECK(f7.parse("-1") == f7.embed(6));
}

TEST_CASE("from_coeffs validates") {
    const Field f27(3, 3);
    CHECK(throws_code(Errc::BadElement, [&] { f27.from_coeffs({1, 2}); }));
    CHECK(throws_code(Errc::BadElement, [&] { f27.from_coeffs({3, 0, 0}); }));
}

TEST_CASE("primality helper") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(1999));
    CHECK(is_prime(2147483647ull));
    CHECK(!is_prime(1));
    CHECK(!is_prime(2401));
    CHECK(!is_prime(561));  // Carmichael
}

}  // TEST_SUITE

#include <doctest.h>

#include <random>

#include "kacroots/errors.hpp"
#include "kacroots/poly.hpp"
#include "oracles.hpp"

using namespace kacroots;

namespace {
IntPolynomial normalized_primitive(const IntPolynomial& p) {
    IntPolynomial q = primitive_part(p);
    if (q.leading_coeff() < 0)
        for (auto& c : q.coeffs) c = -c;
    q.scale_exp = 0;
    return q;
}
}  // namespace

TEST_CASE("dyadic basics") {
    Dyadic half = Dyadic::from_double(0.5);
    CHECK(half.mant == 1);
    CHECK(half.exp == -1);
    Dyadic tenth = Dyadic::from_double(0.1);
    CHECK(tenth.to_mpq() == mpq_class(mpz_class("3602879701896397"), mpz_class(1) << 55));
    CHECK(Dyadic::midpoint(Dyadic(0), Dyadic(1)).to_double() == 0.5);
    CHECK(Dyadic(3, -1) + Dyadic(1, -2) == Dyadic(7, -2));
    CHECK(Dyadic(1, 0) - Dyadic(1, -3) == Dyadic(7, -3));
    CHECK((Dyadic(5, -2) * Dyadic(3, 1)).to_double() == doctest::Approx(7.5));
    CHECK(Dyadic(1, -1) < Dyadic(3, -2));
    CHECK(Dyadic(-1, 4) < Dyadic(0));

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        double x = u(gen);
        CHECK(Dyadic::from_double(x).to_double() == x);
    }
}

TEST_CASE("eval_exact on the worked examples") {
    IntPolynomial p = IntPolynomial::from_ints({-1, 0, 1});  // x^2 - 1
    CHECK(eval_exact(p, mpq_class(2)) == 3);
    CHECK(eval_exact(p, mpq_class(1)) == 0);

    // (1+x)^2 (1-x) expands to 1 + x - x^2 - x^3
    IntPolynomial factored = oracles::multiply(
        oracles::multiply(IntPolynomial::from_ints({1, 1}), IntPolynomial::from_ints({1, 1})),
        IntPolynomial::from_ints({1, -1}));
    CHECK(factored == IntPolynomial::from_ints({1, 1, -1, -1}));
    CHECK(eval_exact(factored, mpq_class(-1)) == 0);
}

TEST_CASE("eval_exact agrees exactly with the power-expansion oracle") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 20);
    for (int i = 0; i < 500; ++i) {
        IntPolynomial p = oracles::random_poly(gen, 10, 99);
        mpq_class q(num(gen), den(gen));
        q.canonicalize();
        CHECK(eval_exact(p, q) == oracles::naive_eval(p, q));
    }
}

TEST_CASE("eval_dyadic matches eval_exact and sign_at") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 300; ++i) {
        IntPolynomial p = oracles::random_poly(gen, 9, 40);
        Dyadic x = Dyadic::from_double(u(gen));
        Dyadic v = eval_dyadic(p, x);
        CHECK(v.to_mpq() == oracles::naive_eval(p, x.to_mpq()));
        CHECK(sign_at(p, x) == sgn(oracles::naive_eval(p, x.to_mpq())));
    }
}

TEST_CASE("derivative examples and linearity") {
    CHECK(derivative(IntPolynomial::from_ints({-1, 0, 1})) == IntPolynomial::from_ints({0, 2}));
    CHECK(derivative(IntPolynomial::from_ints({5})) == IntPolynomial::from_ints({0}));
    CHECK(derivative(IntPolynomial::from_ints({1, 1, -1, -1})) ==
          IntPolynomial::from_ints({1, -2, -3}));

    std::mt19937_64 gen(13);
    for (int i = 0; i < 200; ++i) {
        IntPolynomial p = oracles::random_poly(gen, 8, 30);
        IntPolynomial q = oracles::random_poly(gen, 8, 30);
        std::size_t n = std::max(p.coeffs.size(), q.coeffs.size());
        std::vector<mpz_class> sum(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (k < p.coeffs.size()) sum[k] += p.coeffs[k];
            if (k < q.coeffs.size()) sum[k] += q.coeffs[k];
        }
        IntPolynomial ds = derivative(IntPolynomial(sum, 0));
        IntPolynomial dp = derivative(p);
        IntPolynomial dq = derivative(q);
        std::vector<mpz_class> dsum(std::max(dp.coeffs.size(), dq.coeffs.size()));
        for (std::size_t k = 0; k < dsum.size(); ++k) {
            if (k < dp.coeffs.size()) dsum[k] += dp.coeffs[k];
            if (k < dq.coeffs.size()) dsum[k] += dq.coeffs[k];
        }
        CHECK(ds == IntPolynomial(dsum, 0));
    }
}

TEST_CASE("squarefree_part worked examples") {
    // (1+x)^2 (1-x) -> primitive multiple of 1 - x^2
    IntPolynomial p = IntPolynomial::from_ints({1, 1, -1, -1});
    IntPolynomial sf = squarefree_part(p);
    CHECK(normalized_primitive(sf) == normalized_primitive(IntPolynomial::from_ints({1, 0, -1})));

    IntPolynomial q = IntPolynomial::from_ints({-1, 0, 1});
    CHECK(normalized_primitive(squarefree_part(q)) == normalized_primitive(q));

    CHECK(normalized_primitive(squarefree_part(IntPolynomial::from_ints({0, 0, 1}))) ==
          IntPolynomial::from_ints({0, 1}));

    CHECK_THROWS_AS(squarefree_part(IntPolynomial::from_ints({0})), ZeroPolynomialError);
}

TEST_CASE("squarefree_part leaves gcd with its derivative constant") {
    std::mt19937_64 gen(17);
    for (int i = 0; i < 150; ++i) {
        IntPolynomial p = oracles::random_nonzero_poly(gen, 7, 20);
        // Force repeated factors half of the time.
        if (i % 2 == 0) p = oracles::multiply(p, p);
        if (p.effective_degree() == 0) continue;
        IntPolynomial sf = squarefree_part(p);
        if (*sf.effective_degree() == 0) continue;
        IntPolynomial g = poly_gcd(sf, derivative(sf));
        CHECK(*g.effective_degree() == 0);
    }
}

TEST_CASE("divide_exact inverts multiplication") {
    std::mt19937_64 gen(19);
    for (int i = 0; i < 200; ++i) {
        IntPolynomial a = oracles::random_nonzero_poly(gen, 6, 25);
        IntPolynomial b = oracles::random_nonzero_poly(gen, 6, 25);
        IntPolynomial prod = oracles::multiply(a, b);
        prod.scale_exp = 0;
        IntPolynomial q = divide_exact(prod, b);
        auto da = a.effective_degree();
        auto dq = q.effective_degree();
        REQUIRE(da.has_value());
        REQUIRE(dq.has_value());
        CHECK(*da == *dq);
        for (std::size_t k = 0; k <= *da; ++k) CHECK(q.coeffs[k] == a.coeffs[k]);
    }
}

TEST_CASE("squarefree_certificate is sound and catches squares") {
    std::mt19937_64 gen(23);
    int certified = 0;
    for (int i = 0; i < 200; ++i) {
        IntPolynomial p = oracles::random_nonzero_poly(gen, 9, 50);
        if (!p.effective_degree() || *p.effective_degree() < 1) continue;
        bool cert = squarefree_certificate(p);
        if (cert) {
            ++certified;
            IntPolynomial g = poly_gcd(p, derivative(p));
            CHECK(*g.effective_degree() == 0);  // soundness
        }
        if (*p.effective_degree() >= 1) {
            IntPolynomial sq = oracles::multiply(p, p);
            sq.scale_exp = 0;
            CHECK_FALSE(squarefree_certificate(sq));
        }
    }
    CHECK(certified > 150);  // random integer polynomials are almost surely squarefree
}

TEST_CASE("effective degree and zero polynomial handling") {
    IntPolynomial z = IntPolynomial::from_ints({0, 0, 0});
    CHECK(z.is_zero());
    CHECK(z.formal_degree() == 2);
    CHECK_FALSE(z.effective_degree().has_value());
    CHECK_THROWS_AS(z.leading_coeff(), ZeroPolynomialError);
    CHECK_THROWS_AS(primitive_part(z), ZeroPolynomialError);

    IntPolynomial p = IntPolynomial::from_ints({1, 2, 0, 0});  // trailing zeros allowed
    CHECK(p.formal_degree() == 3);
    CHECK(*p.effective_degree() == 1);
    CHECK(p.leading_coeff() == 2);
}

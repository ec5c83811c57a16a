#include <catch_amalgamated.hpp>

#include "oracle.hpp"

using namespace simplexvol;

TEST_CASE("monomial formula over the standard simplex") {
    CHECK(integrate_monomial_standard(std::vector<unsigned>{1, 1, 0}) == Rational(1, 24));
    CHECK(integrate_monomial_standard(std::vector<unsigned>{0, 0, 0}) == Rational(1, 2));

    // sqrt(x) over [0,1] through the Gamma form
    double half = integrate_monomial_standard(GeneralizedExponent({0.5, 0.0}));
    CHECK(std::fabs(half - 2.0 / 3.0) < 1e-12);

    CHECK_THROWS_AS(GeneralizedExponent({-1.0, 0.0}), DivergentIntegralError);
    CHECK_THROWS_AS(GeneralizedExponent({-1.5, 0.0}), DivergentIntegralError);

    SECTION("agrees with iterated integration") {
        oracle::TestRng rng(41);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 3));
            Exponents e(d, 0);
            for (auto& k : e) k = unsigned(rng.pick(0, 4));
            auto mono = Polynomial<Rational>::monomial(d, e, Rational(1));
            std::vector<unsigned> alpha(e.begin(), e.end());
            alpha.push_back(0);
            CHECK(integrate_monomial_standard(alpha) ==
                  oracle::integrate_standard_iterated(mono));
        }
    }
}

TEST_CASE("polynomial integration over a general simplex") {
    auto d2 = Simplex<Rational>::standard(2);
    auto xy = parse_polynomial("x1*x2");
    for (auto method :
         {PolyMethod::pullback, PolyMethod::taylor_expansion, PolyMethod::linform_decomp})
        CHECK(integrate_polynomial(d2, xy, method) == Rational(1, 24));

    Simplex<Rational> tri({{Rational(1), Rational(1)},
                           {Rational(3), Rational(1)},
                           {Rational(1), Rational(4)}});
    CHECK(integrate_polynomial(tri, parse_polynomial("5", 2)) == Rational(15));

    CHECK(integrate_polynomial(d2, parse_polynomial("x1 + x2")) == Rational(1, 3));

    SECTION("three-way exact agreement on random data") {
        oracle::TestRng rng(42);
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 4));
            auto j = oracle::random_simplex(rng, d);
            auto p = oracle::random_polynomial(rng, d, 6, 5);
            Rational a = integrate_polynomial(j, p, PolyMethod::pullback);
            Rational b = integrate_polynomial(j, p, PolyMethod::taylor_expansion);
            Rational c = integrate_polynomial(j, p, PolyMethod::linform_decomp);
            CHECK(a == b);
            CHECK(a == c);
        }
    }

    SECTION("standard-simplex values match the iterated oracle") {
        oracle::TestRng rng(43);
        for (int trial = 0; trial < 15; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 3));
            auto j = Simplex<Rational>::standard(d);
            auto p = oracle::random_polynomial(rng, d, 5, 4);
            CHECK(integrate_polynomial(j, p) == oracle::integrate_standard_iterated(p));
        }
    }

    SECTION("the d >= 5 default routes through linear forms") {
        auto j = Simplex<Rational>::standard(5);
        auto p = parse_polynomial("x1*x2 + x5^2", 5);
        Rational via_auto = integrate_polynomial(j, p);
        CHECK(via_auto == integrate_polynomial(j, p, PolyMethod::linform_decomp));
        CHECK(via_auto == integrate_polynomial(j, p, PolyMethod::pullback));
        CHECK(via_auto == oracle::integrate_standard_iterated(p));
    }
}

TEST_CASE("monomial decomposition into powers of linear forms") {
    SECTION("x1 x2") {
        auto terms = decompose_monomial({1, 1});
        REQUIRE(terms.size() == 3);
        // 1/2 (x1+x2)^2 - 1/2 x1^2 - 1/2 x2^2
        Rational sum(0);
        for (const auto& t : terms) {
            if (t.beta == std::vector<unsigned>{1, 1}) CHECK(t.coeff == Rational(1, 2));
            if (t.beta == std::vector<unsigned>{1, 0}) CHECK(t.coeff == Rational(-1, 2));
            sum += t.coeff;
        }
        CHECK(sum == Rational(-1, 2));
    }

    SECTION("already a pure power") {
        auto terms = decompose_monomial({2, 0});
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].coeff == Rational(1));
        CHECK(terms[0].beta == std::vector<unsigned>{1, 0});
    }

    SECTION("recomposition reproduces the monomial") {
        oracle::TestRng rng(44);
        for (int trial = 0; trial < 20; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 3));
            Exponents alpha(d, 0);
            unsigned total = 0;
            for (auto& a : alpha) {
                a = unsigned(rng.pick(0, 3));
                total += a;
            }
            if (total == 0) alpha[0] = total = 1;
            std::vector<unsigned> av(alpha.begin(), alpha.end());

            Polynomial<Rational> rebuilt(d);
            for (const auto& term : decompose_monomial(av)) {
                Vector<Rational> beta(d);
                for (std::size_t i = 0; i < d; ++i) beta[i] = Rational(int(term.beta[i]));
                auto form = Polynomial<Rational>::affine(beta, Rational(0));
                rebuilt += form.pow(total) * term.coeff;
            }
            CHECK(rebuilt == Polynomial<Rational>::monomial(d, alpha, Rational(1)));
        }
    }

    CHECK_THROWS_AS(decompose_monomial({0, 0}), PreconditionError);
}

TEST_CASE("powers of affine forms") {
    SECTION("univariate power rule") {
        oracle::TestRng rng(45);
        for (int trial = 0; trial < 20; ++trial) {
            Rational lo = rng.rational(), hi = lo + rng.positive_rational();
            unsigned n = unsigned(rng.pick(0, 6));
            Simplex<Rational> j({{lo}, {hi}});
            Rational expected = (int_pow(hi, n + 1) - int_pow(lo, n + 1)) / Rational(int(n) + 1);
            CHECK(integrate_affine_power(j, {Rational(1)}, Rational(0), n) == expected);
        }
    }

    SECTION("repeated poles on the standard triangle") {
        auto d2 = Simplex<Rational>::standard(2);
        Vector<Rational> ones{Rational(1), Rational(1)};
        CHECK(integrate_affine_power(d2, ones, Rational(0), 2) == Rational(1, 4));
        CHECK(integrate_affine_power_series(d2, ones, Rational(0), 2) == Rational(1, 4));
        CHECK(integrate_one_norm_power_exact(2, 2) == Rational(1, 4));
    }

    SECTION("constant integrand is a pole of full multiplicity") {
        oracle::TestRng rng(46);
        auto j = oracle::random_simplex(rng, 3);
        Vector<Rational> zero(3, Rational(0));
        auto poles = pole_structure(detail::affine_vertex_values(j, zero, Rational(1)));
        CHECK(poles.clusters.size() == 1);
        CHECK(poles.clusters[0].multiplicity == 4);
        CHECK(integrate_affine_power(j, zero, Rational(1), 5) == simplex_volume(j));
    }

    SECTION("Brion, residue and series agree") {
        oracle::TestRng rng(47);
        int done = 0;
        while (done < 25) {
            std::size_t d = std::size_t(rng.pick(1, 4));
            auto j = oracle::random_simplex(rng, d);
            Vector<Rational> c(d);
            for (auto& x : c) x = rng.rational();
            Rational b = rng.rational();
            unsigned n = unsigned(rng.pick(0, 6));
            auto values = detail::affine_vertex_values(j, c, b);
            if (!pole_structure(values).all_simple()) continue;
            Rational brion = integrate_affine_power_brion(j, c, b, n);
            CHECK(brion == integrate_affine_power_residue(j, c, b, n));
            CHECK(brion == integrate_affine_power_series(j, c, b, n));
            ++done;
        }
    }

    SECTION("constructed repeated poles: residue equals series") {
        oracle::TestRng rng(48);
        int done = 0;
        while (done < 10) {
            auto base = oracle::random_simplex(rng, 3);
            auto verts = base.vertices();
            Vector<Rational> c{rng.rational(), rng.rational(), rng.rational()};
            if (c[0] == 0 && c[1] == 0) continue;
            // translate v_1 along a direction with c.w = 0 to force a tie
            Vector<Rational> w{c[1], -c[0], Rational(0)};
            Rational t = rng.positive_rational();
            for (int i = 0; i < 3; ++i) verts[1][i] = verts[0][i] + t * w[i];
            try {
                Simplex<Rational> j(verts);
                Rational b = rng.rational();
                unsigned n = unsigned(rng.pick(1, 5));
                auto poles = pole_structure(detail::affine_vertex_values(j, c, b));
                REQUIRE_FALSE(poles.all_simple());
                CHECK(integrate_affine_power_residue(j, c, b, n) ==
                      integrate_affine_power_series(j, c, b, n));
                ++done;
            } catch (const DegenerateSimplexError&) {
            }
        }
    }
}

TEST_CASE("Lagrange zero-sum identity") {
    oracle::TestRng rng(49);
    int done = 0;
    while (done < 40) {
        std::size_t d = std::size_t(rng.pick(1, 4));
        auto j = to_double(oracle::random_simplex(rng, d));
        Vector<double> c(d);
        for (auto& x : c) x = 2.0 * rng.uniform() - 1.0;
        Vector<double> values;
        for (const auto& v : j.vertices()) values.push_back(dot(c, v));
        if (!pole_structure(values).all_simple()) continue;
        for (unsigned n = 0; n < d; ++n) {
            double sum = 0.0, scale = 0.0;
            for (std::size_t a = 0; a <= d; ++a) {
                double denom = 1.0;
                for (std::size_t k = 0; k <= d; ++k)
                    if (k != a) denom *= values[a] - values[k];
                double term = std::pow(values[a], double(n)) / denom;
                sum += term;
                scale = std::max(scale, std::fabs(term));
            }
            CHECK(std::fabs(sum) <= 1e-10 * std::max(1.0, scale));
        }
        ++done;
    }
}

TEST_CASE("exponentials of affine forms") {
    SECTION("univariate antiderivative") {
        Simplex<Rational> j({{Rational(-1)}, {Rational(3)}});
        double got = integrate_exp_affine(j, Vector<Rational>{Rational(2)}, Rational(1, 2));
        double expected = std::exp(0.5) * (std::exp(6.0) - std::exp(-2.0)) / 2.0;
        CHECK(got == Catch::Approx(expected).epsilon(1e-13));
    }

    SECTION("equal-difference closed form on the standard simplex") {
        for (unsigned d = 1; d <= 5; ++d) {
            auto j = Simplex<Rational>::standard(d);
            for (double u : {0.5, 3.0, 7.0}) {
                Vector<double> c(d, -u);
                double got = integrate_exp_affine(to_double(j), c, 0.0);
                double partial = 0.0, pw = 1.0;
                for (unsigned k = 0; k < d; ++k) {
                    partial += pw;
                    pw *= u / double(k + 1);
                }
                double expected = std::exp(-u) / std::pow(u, double(d)) * (std::exp(u) - partial);
                CHECK(got == Catch::Approx(expected).epsilon(1e-12));
            }
        }
    }

    SECTION("zero direction gives the volume") {
        oracle::TestRng rng(50);
        auto j = oracle::random_simplex(rng, 2);
        double got = integrate_exp_affine(j, Vector<Rational>(2, Rational(0)), Rational(0));
        CHECK(got == Catch::Approx(to_double(simplex_volume(j))));
    }

    SECTION("closed form matches the series for |u| <= 20") {
        for (unsigned d = 1; d <= 5; ++d) {
            auto j = to_double(Simplex<Rational>::standard(d));
            for (double u : {-20.0, -7.5, -1.0, 0.25, 5.0, 20.0}) {
                Vector<double> c(d, -u);
                double closed = integrate_exp_affine(j, c, 0.0);
                double series = integrate_exp_affine_series(j, c, 0.0);
                CHECK(std::fabs(closed - series) <= 1e-12 * std::fabs(closed));
            }
        }
    }

    SECTION("Brion route agrees with the series route") {
        oracle::TestRng rng(51);
        for (int trial = 0; trial < 15; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 3));
            auto j = to_double(oracle::random_simplex(rng, d));
            Vector<double> c(d);
            for (auto& x : c) x = 4.0 * rng.uniform() - 2.0;
            double a = integrate_exp_affine(j, c, 0.3);
            double b = integrate_exp_affine_series(j, c, 0.3);
            CHECK(a == Catch::Approx(b).epsilon(1e-11));
        }
    }

    SECTION("overflow is reported with the exponent") {
        auto j = Simplex<Rational>::standard(1);
        CHECK_THROWS_AS(integrate_exp_affine(j, Vector<Rational>{Rational(800)}, Rational(0)),
                        OverflowError);
    }
}

TEST_CASE("polarization integrates q-homogeneous functions") {
    auto d2 = Simplex<Rational>::standard(2);

    CHECK(integrate_qhomogeneous(
              d2, [](const Vector<Rational>& x) { return x[0] * x[0]; }, 2) == Rational(1, 12));

    SECTION("degree one reduces to the secant mean") {
        oracle::TestRng rng(52);
        auto j = oracle::random_simplex(rng, 3);
        Vector<Rational> c{Rational(2), Rational(-1), Rational(1, 3)};
        Rational got = integrate_qhomogeneous(
            j, [&](const Vector<Rational>& x) { return dot(c, x); }, 1);
        Rational vertex_sum(0);
        for (const auto& v : j.vertices()) vertex_sum += dot(c, v);
        CHECK(got == simplex_volume(j) * vertex_sum / Rational(4));
    }

    CHECK(integrate_qhomogeneous(
              d2,
              [](const Vector<Rational>& x) {
                  Rational s = x[0] + x[1];
                  return s * s;
              },
              2) == Rational(1, 4));

    SECTION("matches exact polynomial integration") {
        oracle::TestRng rng(53);
        for (int trial = 0; trial < 20; ++trial) {
            std::size_t d = std::size_t(rng.pick(1, 3));
            unsigned q = unsigned(rng.pick(1, 5));
            auto j = oracle::random_simplex(rng, d);
            Polynomial<Rational> p(d);
            for (int t = 0; t < 4; ++t) {
                Exponents e(d, 0);
                unsigned left = q;
                for (std::size_t i = 0; i + 1 < d; ++i) {
                    e[i] = unsigned(rng.pick(0, long(left)));
                    left -= e[i];
                }
                e[d - 1] = left;
                p.add_term(std::move(e), rng.rational());
            }
            if (p.is_zero()) continue;
            Rational via_polarization = integrate_qhomogeneous(
                j, [&](const Vector<Rational>& x) { return p.eval(x); }, q);
            CHECK(via_polarization == integrate_polynomial(j, p));
        }
    }

    CHECK_THROWS_AS(integrate_qhomogeneous(
                        d2, [](const Vector<Rational>& x) { return x[0]; }, 0),
                    PreconditionError);
}

TEST_CASE("one-norm powers") {
    CHECK(integrate_one_norm_power(1, 0.5) == Catch::Approx(2.0 / 3.0));
    CHECK(integrate_one_norm_power_exact(2, 0) == Rational(1, 2));
    CHECK(integrate_one_norm_power_exact(3, 2) == Rational(1, 10));

    SECTION("consistent with the affine-power route") {
        for (unsigned d = 1; d <= 4; ++d)
            for (unsigned n = 0; n <= 4; ++n) {
                auto j = Simplex<Rational>::standard(d);
                Vector<Rational> ones(d, Rational(1));
                CHECK(integrate_one_norm_power_exact(d, n) ==
                      integrate_affine_power(j, ones, Rational(0), n));
            }
    }

    CHECK_THROWS_AS(integrate_one_norm_power(2, -1.0), DivergentIntegralError);
}

TEST_CASE("complete homogeneous symmetric polynomial") {
    CHECK(h_complete<Rational>(6, Vector<Rational>{Rational(1), Rational(1), Rational(-2)}) ==
          Rational(31));
    CHECK(h_complete<Rational>(2, Vector<Rational>{Rational(1), Rational(2), Rational(3)}) ==
          Rational(25));
    CHECK(h_complete<Rational>(0, Vector<Rational>{Rational(5)}) == Rational(1));

    SECTION("h2 identity") {
        oracle::TestRng rng(54);
        for (int trial = 0; trial < 10; ++trial) {
            Vector<Rational> x{rng.rational(), rng.rational(), rng.rational()};
            Rational sum = x[0] + x[1] + x[2];
            Rational squares = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            CHECK(h_complete<Rational>(2, x) == (squares + sum * sum) / Rational(2));
        }
    }

    SECTION("even-degree positive definiteness") {
        oracle::TestRng rng(55);
        for (unsigned q : {2u, 4u, 6u}) {
            CHECK(h_complete<Rational>(q, Vector<Rational>(4, Rational(0))) == Rational(0));
            for (int trial = 0; trial < 20; ++trial) {
                Vector<Rational> x(std::size_t(rng.pick(1, 5)));
                bool nonzero = false;
                for (auto& v : x) {
                    v = rng.rational();
                    if (v != 0) nonzero = true;
                }
                if (!nonzero) x[0] = Rational(1, 7);
                CHECK(h_complete<Rational>(q, x) > 0);
            }
        }
    }
}

TEST_CASE("formal series") {
    FormalSeries<Rational> a = FormalSeries<Rational>::shifted_power(4, Rational(2), 3);
    // (x+2)^3 = 8 + 12x + 6x^2 + x^3
    CHECK(a[0] == Rational(8));
    CHECK(a[1] == Rational(12));
    CHECK(a[2] == Rational(6));
    CHECK(a[3] == Rational(1));
    CHECK(a[4] == Rational(0));

    auto inv = a.inverse();
    auto prod = a * inv;
    CHECK(prod[0] == Rational(1));
    for (std::size_t k = 1; k <= 4; ++k) CHECK(prod[k] == Rational(0));

    FormalSeries<Rational> zero_const(3);
    CHECK_THROWS_AS(zero_const.inverse(), NumericError);
}

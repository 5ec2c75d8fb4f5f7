#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/series.hpp"

using namespace tmlab;
using namespace tmlab::series;

namespace {

const MultiPoly A = MultiPoly::symbol(kA);
const MultiPoly B = MultiPoly::symbol(kB);
const MultiPoly T = MultiPoly::symbol(kT);
const MultiPoly L = MultiPoly::symbol(kLambda);

MultiPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 3), coef(-9, 9), nterms(1, 5);
  MultiPoly p;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e{};
    for (auto& x : e) x = static_cast<std::uint8_t>(deg(rng));
    p += MultiPoly::monomial(mpq_class(coef(rng), 1 + std::abs(coef(rng))), e);
  }
  return p;
}

// Taylor coefficients of J0(j r) at r = 1 from the termwise-differentiated power series.
double j0_scaled_derivative(double j, int m) {
  double sum = 0.0, c = 1.0;  // c = (-1)^k (j/2)^{2k} / (k!)^2
  for (int k = 0; k < 60; ++k) {
    if (k > 0) c *= -(j * j / 4.0) / (double(k) * double(k));
    const int n = 2 * k;
    if (n < m) continue;
    double falling = 1.0;
    for (int i = 0; i < m; ++i) falling *= double(n - i);
    sum += c * falling;
  }
  return sum;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("polynomial basics") {
    CHECK((A + B).pow(2) == A * A + 2 * A * B + B * B);
    CHECK((A - A).is_zero());
    CHECK((A * B * B).total_degree() == 3);
    CHECK((A * B * B).degree(kB) == 2);
    CHECK((-A + 3).str() == "-a + 3");
    CHECK(MultiPoly(mpq_class(1, 2)).str() == "1/2");
    CHECK((A * A * L).substitute(kA, T * B) == T * T * B * B * L);
  }

  TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 60; ++trial) {
      const auto p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
      CHECK((p * q) * r == p * (q * r));
      CHECK((p + q) + r == p + (q + r));
      CHECK(p * q == q * p);
      CHECK(p * (q + r) == p * q + p * r);
      CHECK((p - p).is_zero());
    }
  }

  TEST_CASE("evaluation and substitution are homomorphisms") {
    std::mt19937 rng(7);
    const std::array<double, kSymbols> at{0.7, -1.3, 0.4, 2.1};
    for (int trial = 0; trial < 40; ++trial) {
      const auto p = random_poly(rng), q = random_poly(rng);
      const double pq = (p * q).evaluate(at), sep = p.evaluate(at) * q.evaluate(at);
      CHECK(pq == doctest::Approx(sep).epsilon(1e-12));
      const auto sub = p.substitute(kA, q);
      auto at2 = at;
      at2[kA] = q.evaluate(at);
      CHECK(sub.evaluate(at) == doctest::Approx(p.evaluate(at2)).epsilon(1e-10));
      CHECK((p + q).substitute(kB, T) == p.substitute(kB, T) + q.substitute(kB, T));
    }
  }

  TEST_CASE("division reconstructs the dividend") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const auto p = random_poly(rng) * random_poly(rng);
      const auto d = random_poly(rng);
      if (d.is_zero()) continue;
      const auto div = p.divide(d);
      CHECK(div.quotient * d + div.remainder == p);
    }
    const auto exact = (A * A - B * B).divide(A - B);
    CHECK(exact.quotient == A + B);
    CHECK(exact.remainder.is_zero());
  }

  TEST_CASE("truncated series arithmetic") {
    const auto inv = SeriesPoly::one_plus_eps_power(-2, 6);
    const auto sq = SeriesPoly::one_plus_eps_power(2, 6);
    const auto one = inv * sq;
    CHECK(one[0] == MultiPoly(1));
    for (unsigned k = 1; k <= one.order(); ++k) CHECK(one[k].is_zero());
    CHECK(inv[3] == MultiPoly(-4));  // (1+e)^-2 = 1 - 2e + 3e^2 - 4e^3 ...

    SeriesPoly eps(6);
    eps[1] = 1;
    const auto ex = eps.exp();
    mpq_class fact = 1;
    for (unsigned k = 0; k <= 6; ++k) {
      if (k > 0) fact *= k;
      CHECK(ex[k] == MultiPoly(mpq_class(1) / fact));
    }
    CHECK(ex.derivative() == ex.truncated(5));
    SeriesPoly one6(6);
    one6[0] = 1;
    CHECK(ex.derivative().integral() + one6 == ex);
    CHECK(eps.valuation() == 1);
    CHECK(SeriesPoly(3).valuation() == 4);

    // composition: exp(a eps) inside (1 + x)^2 matches the direct square
    SeriesPoly aeps(6);
    aeps[1] = A;
    const auto e1 = aeps.exp() - one6;
    CHECK(sq.compose(e1) == (aeps.exp() * aeps.exp()));
  }

  TEST_CASE("order tracking never overclaims") {
    SeriesPoly s3(3), s5(5);
    s3[1] = A;
    s5[2] = B;
    CHECK((s3 + s5).order() == 3);
    // eps * O(eps^4) is known to O(eps^5)
    CHECK((s3 * s5).order() >= 3);
  }

  TEST_CASE("boundary recurrence: low orders by hand") {
    const auto c = boundary_recurrence(4);
    REQUIRE(c.size() == 5);
    CHECK(c[0].is_zero());
    CHECK(c[1] == A);
    CHECK(c[2] == -A);
    CHECK(c[3] == 2 * A - L * A);
    CHECK_THROWS_AS(boundary_recurrence(9), ValidationError);
    CHECK_THROWS_AS(boundary_recurrence(4, NonlinearityKind::Shifted), UnsupportedIdentity);
    const auto s = boundary_series(4);
    CHECK(s[3] == c[3] * MultiPoly(mpq_class(1, 6)));
  }

  TEST_CASE("linear recurrence reproduces the Bessel derivatives") {
    const double j = fixture::kJ0Zero;
    const auto c = boundary_recurrence(8, NonlinearityKind::Linear);
    const double a = j0_scaled_derivative(j, 1);
    CHECK(a == doctest::Approx(-j * oracle::bessel_j1(j)).epsilon(1e-13));
    const std::array<double, kSymbols> at{a, 0.0, 0.0, j * j};
    for (int m = 1; m <= 8; ++m) {
      CAPTURE(m);
      CHECK(c[m].evaluate(at) == doctest::Approx(j0_scaled_derivative(j, m)).epsilon(1e-11));
    }
  }

  TEST_CASE("perturbed and standard agree until the cubic term matters") {
    const auto s = boundary_recurrence(4, NonlinearityKind::Standard);
    const auto p = boundary_recurrence(4, NonlinearityKind::Perturbed);
    const auto l = boundary_recurrence(4, NonlinearityKind::Linear);
    CHECK(s[3] == l[3]);
    CHECK(p[3] == 2 * A);  // f'(0) = 0 for the perturbed term
    CHECK_FALSE(s[4] == p[4]);
  }
}

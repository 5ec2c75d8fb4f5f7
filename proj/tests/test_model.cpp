#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/model.hpp"

using namespace tmlab;

TEST_SUITE("model") {
  TEST_CASE("conformal radius is tanh(R/2)") {
    for (double R : {0.1, 1.0, 3.0})
      CHECK(conformal_radius(R) == doctest::Approx(std::tanh(0.5 * R)).epsilon(1e-15));
    const auto p = ProblemSpec::make(HyperbolicBall{1.0}, Nonlinearity::standard());
    CHECK(p.boundary_radius() == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
  }

  TEST_CASE("weights") {
    const auto e = ProblemSpec::make(EuclideanDisc{2.0}, Nonlinearity::standard());
    CHECK(e.weight(1.3) == 1.0);
    const auto h = ProblemSpec::make(HyperbolicBall{2.0}, Nonlinearity::standard());
    CHECK(h.weight(0.0) == 4.0);
    CHECK(h.weight(0.5) == doctest::Approx(std::pow(2.0 / 0.75, 2)).epsilon(1e-15));
    CHECK_THROWS_AS(h.weight(h.boundary_radius() * 1.01), RangeError);
    CHECK_THROWS_AS(e.weight(-0.1), RangeError);
    // startup expansion coefficients
    const double r = 1e-3;
    CHECK(h.weight(r) == doctest::Approx(h.weight_at_origin() + h.weight_r2_coefficient() * r * r)
                             .epsilon(1e-11));
  }

  TEST_CASE("nonlinearities: df and mass density are consistent with f") {
    for (auto n : {Nonlinearity::standard(), Nonlinearity::perturbed(), Nonlinearity::shifted(1.0),
                   Nonlinearity::linear()}) {
      const auto p = ProblemSpec::make(EuclideanDisc{}, n);
      for (double u : {0.3, 1.0, 2.2}) {
        const double h = 1e-5;
        const double fd_f = (p.f(u + h) - p.f(u - h)) / (2 * h);
        const double fd_m = (p.mass_density(u + h) - p.mass_density(u - h)) / (2 * h);
        CHECK(p.df(u) == doctest::Approx(fd_f).epsilon(1e-8));
        CHECK(fd_m == doctest::Approx(2.0 * p.f(u)).epsilon(1e-8));
        CHECK(p.nehari_density(u) == doctest::Approx(u * p.f(u)));
      }
      CHECK(p.mass_density(0.0) == 0.0);
      CHECK(p.f(0.0) == 0.0);
    }
    const auto pert = ProblemSpec::make(EuclideanDisc{}, Nonlinearity::perturbed());
    // u (e^{u^2} - 1) ~ u^3 near zero
    CHECK(pert.f(1e-3) == doctest::Approx(1e-9).epsilon(1e-6));
  }

  TEST_CASE("validation") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ProblemSpec::make(EuclideanDisc{0.0}, Nonlinearity::standard()), ValidationError);
    CHECK_THROWS_AS(ProblemSpec::make(EuclideanDisc{-1.0}, Nonlinearity::standard()), ValidationError);
    CHECK_THROWS_AS(ProblemSpec::make(EuclideanDisc{nan}, Nonlinearity::standard()), ValidationError);
    CHECK_THROWS_AS(ProblemSpec::make(HyperbolicBall{0.0}, Nonlinearity::standard()), ValidationError);
    CHECK_THROWS_AS(ProblemSpec::make(HyperbolicBall{100.0}, Nonlinearity::standard()), RangeError);
    CHECK_THROWS_AS(ProblemSpec::make(EuclideanDisc{}, Nonlinearity::shifted(-1.0)), ValidationError);
    CHECK_THROWS_AS(ProblemSpec::make(EuclideanDisc{}, Nonlinearity{NonlinearityKind::Standard, 1.0}),
                    ValidationError);
    const auto s = ProblemSpec::make(EuclideanDisc{}, Nonlinearity::shifted(6.0));
    CHECK_THROWS_AS(check_shift_admissible(s, fixture::kMu1UnitDisc), ValidationError);
    CHECK_NOTHROW(check_shift_admissible(ProblemSpec::make(EuclideanDisc{}, Nonlinearity::shifted(1.0)),
                                         fixture::kMu1UnitDisc));
  }

  TEST_CASE("describe and scale covariance") {
    const auto e = ProblemSpec::make(EuclideanDisc{1.0}, Nonlinearity::standard());
    CHECK(e.describe() == "euclid(radius=1)/standard");
    CHECK(e.scale_covariant());
    CHECK_FALSE(e.with_nonlinearity(Nonlinearity::perturbed()).scale_covariant());
    CHECK_FALSE(ProblemSpec::make(HyperbolicBall{1.0}, Nonlinearity::standard()).scale_covariant());
    CHECK(ProblemSpec::make(HyperbolicBall{1.0}, Nonlinearity::standard()).describe() ==
          "hyper(R=1)/standard");
  }

  TEST_CASE("oracle consistency of frozen fixtures") {
    CHECK(oracle::bessel_j0_first_zero() == doctest::Approx(fixture::kJ0Zero).epsilon(1e-15));
    CHECK(fixture::kJ0Zero * fixture::kJ0Zero ==
          doctest::Approx(fixture::kMu1UnitDisc).epsilon(1e-15));
    const auto z = oracle::rk4_first_zero(1.0, 1.0, 2e-4);
    CHECK(z.rho == doctest::Approx(fixture::kRhoAlpha1).epsilon(1e-10));
    CHECK(z.du == doctest::Approx(fixture::kSlopeAtRhoAlpha1).epsilon(1e-9));
    CHECK(z.dirichlet == doctest::Approx(fixture::kDirichletAlpha1).epsilon(1e-6));
  }
}

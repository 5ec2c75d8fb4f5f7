#pragma once

// Test-only reference computations. Nothing here shares code with the
// library: the integrator is a fixed-step classical RK4 and the Bessel
// routines are plain power series.

#include <cmath>
#include <utility>

namespace oracle {

inline double bessel_j0(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (double(k) * double(k));
    sum += term;
  }
  return sum;
}

inline double bessel_j1(double x) {
  const double q = -0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= q / (double(k) * double(k + 1));
    sum += term;
  }
  return sum;
}

// First positive zero of J0 by bisection on [2, 3].
inline double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Rk4Zero {
  double rho;
  double du;
  double dirichlet;  // 2*pi*int_0^rho (u')^2 r dr (trapezoid on the RK4 nodes)
};

// First zero of -(r u')' = lambda r f(u), u(0)=alpha, u'(0)=0, with
// f(u) = u e^{u^2} (or f(u)=u when linear). Fixed step h; the zero is located
// by cubic Hermite interpolation over the last step.
inline Rk4Zero rk4_first_zero(double alpha, double lambda, double h, bool linear = false) {
  auto f = [&](double u) { return linear ? u : u * std::exp(u * u); };
  auto rhs = [&](double r, double u, double p) {
    return std::pair<double, double>{p, -p / r - lambda * f(u)};
  };
  double r = h;
  const double c = lambda * f(alpha);
  double u = alpha - c * r * r / 4.0;
  double p = -c * r / 2.0;
  double dir = 2.0 * M_PI * c * c * r * r * r * r / 16.0;
  for (long n = 0; n < 400000000L; ++n) {
    auto [k1u, k1p] = rhs(r, u, p);
    auto [k2u, k2p] = rhs(r + h / 2, u + h / 2 * k1u, p + h / 2 * k1p);
    auto [k3u, k3p] = rhs(r + h / 2, u + h / 2 * k2u, p + h / 2 * k2p);
    auto [k4u, k4p] = rhs(r + h, u + h * k3u, p + h * k3p);
    const double un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    const double pn = p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (un <= 0.0) {
      // Hermite cubic on [r, r+h] in s in [0,1]
      auto hermite = [&](double s) {
        const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
        const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
        return h00 * u + h10 * h * p + h01 * un + h11 * h * pn;
      };
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hermite(mid) > 0.0 ? lo : hi) = mid;
      }
      const double s = 0.5 * (lo + hi);
      const double rho = r + s * h;
      // one RK4 substep onto the zero for the slope there
      const double g = s * h;
      auto [m1u, m1p] = rhs(r, u, p);
      auto [m2u, m2p] = rhs(r + g / 2, u + g / 2 * m1u, p + g / 2 * m1p);
      auto [m3u, m3p] = rhs(r + g / 2, u + g / 2 * m2u, p + g / 2 * m2p);
      auto [m4u, m4p] = rhs(r + g, u + g * m3u, p + g * m3p);
      (void)m4u;
      const double du = p + g / 6 * (m1p + 2 * m2p + 2 * m3p + m4p);
      dir += 2.0 * M_PI * 0.5 * (p * p * r + du * du * rho) * g;
      return {rho, du, dir};
    }
    dir += 2.0 * M_PI * 0.5 * (p * p * r + pn * pn * (r + h)) * h;
    r += h;
    u = un;
    p = pn;
  }
  return {NAN, NAN, NAN};
}

}  // namespace oracle

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tmlab/model.hpp"

namespace tmlab::series {

/// Symbols of the boundary-expansion calculus: a = u'(1), b = v'(1), t, lambda.
enum Symbol : std::size_t { kA = 0, kB = 1, kT = 2, kLambda = 3 };
inline constexpr std::size_t kSymbols = 4;

using Exponents = std::array<std::uint8_t, kSymbols>;

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept in lexicographic exponent order (a > b > t > lambda), zero
/// coefficients are never stored.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(long c);  // NOLINT: implicit constants keep the algebra readable
  MultiPoly(const mpq_class& c);  // NOLINT

  static MultiPoly symbol(Symbol s, unsigned power = 1);
  static MultiPoly monomial(const mpq_class& c, Exponents e);

  const std::map<Exponents, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;
  unsigned degree(Symbol s) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly x, const MultiPoly& y) { return x += y; }
  friend MultiPoly operator-(MultiPoly x, const MultiPoly& y) { return x -= y; }
  friend MultiPoly operator*(MultiPoly x, const MultiPoly& y) { return x *= y; }
  MultiPoly operator-() const;
  friend bool operator==(const MultiPoly& x, const MultiPoly& y) { return x.terms_ == y.terms_; }

  MultiPoly pow(unsigned n) const;
  /// Replaces every occurrence of `s` by `value`.
  MultiPoly substitute(Symbol s, const MultiPoly& value) const;
  double evaluate(const std::array<double, kSymbols>& at) const;

  /// Multivariate division in lex order: *this = q * d + r with no term of r
  /// divisible by the leading term of d.
  struct Division;
  Division divide(const MultiPoly& d) const;

  std::string str() const;

 private:
  void add_term(const Exponents& e, const mpq_class& c);
  std::map<Exponents, mpq_class> terms_;
};

struct MultiPoly::Division {
  MultiPoly quotient;
  MultiPoly remainder;
};

/// sum_{k<=order} c_k eps^k + O(eps^{order+1}). Arithmetic truncates to the
/// smaller operand order, so a result never claims more precision than its inputs.
class SeriesPoly {
 public:
  SeriesPoly() = default;
  explicit SeriesPoly(unsigned order) : coeff_(order + 1) {}
  SeriesPoly(std::vector<MultiPoly> coeff) : coeff_(std::move(coeff)) {}  // NOLINT

  /// The series of (1 + eps)^p for integer p, truncated at `order`.
  static SeriesPoly one_plus_eps_power(int p, unsigned order);

  unsigned order() const { return static_cast<unsigned>(coeff_.size()) - 1; }
  const MultiPoly& operator[](unsigned k) const { return coeff_.at(k); }
  MultiPoly& operator[](unsigned k) { return coeff_.at(k); }

  SeriesPoly truncated(unsigned order) const;
  SeriesPoly& operator+=(const SeriesPoly& o);
  SeriesPoly& operator-=(const SeriesPoly& o);
  friend SeriesPoly operator+(SeriesPoly x, const SeriesPoly& y) { return x += y; }
  friend SeriesPoly operator-(SeriesPoly x, const SeriesPoly& y) { return x -= y; }
  friend SeriesPoly operator*(const SeriesPoly& x, const SeriesPoly& y);
  friend SeriesPoly operator*(const MultiPoly& c, const SeriesPoly& y);
  friend bool operator==(const SeriesPoly& x, const SeriesPoly& y) { return x.coeff_ == y.coeff_; }

  /// exp(s) for s with zero constant term.
  SeriesPoly exp() const;
  /// d/d eps; the order drops by one.
  SeriesPoly derivative() const;
  /// int_0^eps; the order grows by one.
  SeriesPoly integral() const;
  /// s(q(eps)) for q with zero constant term.
  SeriesPoly compose(const SeriesPoly& q) const;
  SeriesPoly substitute(Symbol s, const MultiPoly& value) const;

  /// Lowest index with a nonzero coefficient, or order()+1 if none.
  unsigned valuation() const;

 private:
  std::vector<MultiPoly> coeff_;
};

/// u^{(k)}(1) for k = 0..order of the solution of r u'' + u' + lambda r g(u) = 0
/// with u(1) = 0, u'(1) = `slope` (a symbol), as polynomials in that symbol and lambda.
/// g(u) = u e^{u^2}, u (e^{u^2} - 1) or u according to `kind`; Shifted is not supported.
std::vector<MultiPoly> boundary_recurrence(unsigned order,
                                           NonlinearityKind kind = NonlinearityKind::Standard,
                                           Symbol slope = kA);

/// The boundary Taylor series u(1 + eps) = sum u^{(k)}(1) eps^k / k!.
SeriesPoly boundary_series(unsigned order, NonlinearityKind kind = NonlinearityKind::Standard,
                           Symbol slope = kA);

}  // namespace tmlab::series

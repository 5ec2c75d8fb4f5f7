#include "tmlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tmlab/errors.hpp"

namespace tmlab::series {

namespace {

const char* const kSymbolNames[kSymbols] = {"a", "b", "t", "lambda"};

bool divides(const Exponents& d, const Exponents& e) {
  for (std::size_t i = 0; i < kSymbols; ++i)
    if (d[i] > e[i]) return false;
  return true;
}

}  // namespace

MultiPoly::MultiPoly(long c) {
  if (c != 0) terms_[Exponents{}] = c;
}

MultiPoly::MultiPoly(const mpq_class& c) {
  if (c != 0) terms_[Exponents{}] = c;
}

MultiPoly MultiPoly::symbol(Symbol s, unsigned power) {
  Exponents e{};
  e[s] = static_cast<std::uint8_t>(power);
  return monomial(1, e);
}

MultiPoly MultiPoly::monomial(const mpq_class& c, Exponents e) {
  MultiPoly p;
  p.add_term(e, c);
  return p;
}

void MultiPoly::add_term(const Exponents& e, const mpq_class& c_in) {
  // Callers may hand in mpq_class(n, d) straight from the constructor, which
  // GMP leaves unreduced; equality of polynomials relies on reduced coefficients.
  mpq_class c(c_in);
  c.canonicalize();
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

unsigned MultiPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

unsigned MultiPoly::degree(Symbol s) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max<unsigned>(d, e[s]);
  return d;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  MultiPoly out;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e;
      for (std::size_t i = 0; i < kSymbols; ++i) {
        const unsigned s = unsigned(e1[i]) + e2[i];
        if (s > 255) throw std::overflow_error("monomial exponent overflow");
        e[i] = static_cast<std::uint8_t>(s);
      }
      out.add_term(e, c1 * c2);
    }
  terms_ = std::move(out.terms_);
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly MultiPoly::pow(unsigned n) const {
  MultiPoly out(1), base = *this;
  while (n) {
    if (n & 1u) out *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return out;
}

MultiPoly MultiPoly::substitute(Symbol s, const MultiPoly& value) const {
  MultiPoly out;
  std::vector<MultiPoly> powers{MultiPoly(1)};
  for (const auto& [e, c] : terms_) {
    while (powers.size() <= e[s]) powers.push_back(powers.back() * value);
    Exponents rest = e;
    rest[s] = 0;
    out += monomial(c, rest) * powers[e[s]];
  }
  return out;
}

double MultiPoly::evaluate(const std::array<double, kSymbols>& at) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < kSymbols; ++i) term *= std::pow(at[i], e[i]);
    sum += term;
  }
  return sum;
}

MultiPoly::Division MultiPoly::divide(const MultiPoly& d) const {
  if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
  const auto& [lead_e, lead_c] = *d.terms_.rbegin();
  Division out;
  MultiPoly p = *this;
  while (!p.is_zero()) {
    const auto [e, c] = *p.terms_.rbegin();
    if (divides(lead_e, e)) {
      Exponents qe;
      for (std::size_t i = 0; i < kSymbols; ++i) qe[i] = static_cast<std::uint8_t>(e[i] - lead_e[i]);
      const MultiPoly q = monomial(c / lead_c, qe);
      out.quotient += q;
      p -= q * d;
    } else {
      out.remainder.add_term(e, c);
      p.terms_.erase(e);
    }
  }
  return out;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpq_class mag = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
    bool wrote = false;
    if (mag != 1 || constant) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < kSymbols; ++i) {
      if (!e[i]) continue;
      os << (wrote ? "*" : "") << kSymbolNames[i];
      if (e[i] > 1) os << "^" << unsigned(e[i]);
      wrote = true;
    }
  }
  return os.str();
}

SeriesPoly SeriesPoly::one_plus_eps_power(int p, unsigned order) {
  SeriesPoly out(order);
  mpq_class c = 1;
  for (unsigned k = 0; k <= order; ++k) {
    out[k] = MultiPoly(c);
    c *= mpq_class(p - static_cast<int>(k), static_cast<int>(k) + 1);
    c.canonicalize();
  }
  return out;
}

SeriesPoly SeriesPoly::truncated(unsigned order) const {
  if (order > this->order()) throw std::logic_error("cannot raise a series' truncation order");
  return SeriesPoly(std::vector<MultiPoly>(coeff_.begin(), coeff_.begin() + order + 1));
}

SeriesPoly& SeriesPoly::operator+=(const SeriesPoly& o) {
  const unsigned n = std::min(order(), o.order());
  coeff_.resize(n + 1);
  for (unsigned k = 0; k <= n; ++k) coeff_[k] += o.coeff_[k];
  return *this;
}

SeriesPoly& SeriesPoly::operator-=(const SeriesPoly& o) {
  const unsigned n = std::min(order(), o.order());
  coeff_.resize(n + 1);
  for (unsigned k = 0; k <= n; ++k) coeff_[k] -= o.coeff_[k];
  return *this;
}

SeriesPoly operator*(const SeriesPoly& x, const SeriesPoly& y) {
  // x = O(eps^vx) known to order nx: the product is known to min(nx + vy, ny + vx).
  const unsigned vx = x.valuation(), vy = y.valuation();
  const unsigned n = std::min(x.order() + vy, y.order() + vx);
  SeriesPoly out(n);
  for (unsigned i = 0; i <= std::min(n, x.order()); ++i) {
    if (x.coeff_[i].is_zero()) continue;
    for (unsigned j = 0; i + j <= n && j <= y.order(); ++j)
      if (!y.coeff_[j].is_zero()) out.coeff_[i + j] += x.coeff_[i] * y.coeff_[j];
  }
  return out;
}

SeriesPoly operator*(const MultiPoly& c, const SeriesPoly& y) {
  SeriesPoly out = y;
  for (auto& k : out.coeff_) k *= c;
  return out;
}

SeriesPoly SeriesPoly::exp() const {
  if (!coeff_[0].is_zero()) throw std::domain_error("exp of a series with a constant term");
  SeriesPoly out(order()), power(order());
  out[0] = 1;
  power[0] = 1;
  mpq_class inv_fact = 1;
  for (unsigned k = 1; k <= order(); ++k) {
    power = (power * *this).truncated(order());
    inv_fact /= k;
    out += MultiPoly(inv_fact) * power;
  }
  return out;
}

SeriesPoly SeriesPoly::derivative() const {
  if (order() == 0) throw std::logic_error("derivative of an order-0 series");
  SeriesPoly out(order() - 1);
  for (unsigned k = 1; k <= order(); ++k) out[k - 1] = MultiPoly(static_cast<long>(k)) * coeff_[k];
  return out;
}

SeriesPoly SeriesPoly::integral() const {
  SeriesPoly out(order() + 1);
  for (unsigned k = 0; k <= order(); ++k) out[k + 1] = MultiPoly(mpq_class(1, k + 1)) * coeff_[k];
  return out;
}

SeriesPoly SeriesPoly::compose(const SeriesPoly& q) const {
  if (!q[0].is_zero()) throw std::domain_error("compose with a series that has a constant term");
  const unsigned n = std::min(order(), q.order());
  SeriesPoly out(n), power(n);
  power[0] = 1;
  out[0] = coeff_[0];
  for (unsigned k = 1; k <= n; ++k) {
    power = (power * q).truncated(n);
    out += coeff_[k] * power;
  }
  return out;
}

SeriesPoly SeriesPoly::substitute(Symbol s, const MultiPoly& value) const {
  SeriesPoly out = *this;
  for (auto& c : out.coeff_) c = c.substitute(s, value);
  return out;
}

unsigned SeriesPoly::valuation() const {
  for (unsigned k = 0; k <= order(); ++k)
    if (!coeff_[k].is_zero()) return k;
  return order() + 1;
}

namespace {

SeriesPoly nonlinearity(const SeriesPoly& u, NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::Standard:
      return u * (u * u).truncated(u.order()).exp();
    case NonlinearityKind::Perturbed: {
      SeriesPoly e = (u * u).truncated(u.order()).exp();
      e[0] -= 1;
      return u * e;
    }
    case NonlinearityKind::Linear:
      return u;
    default:
      throw UnsupportedIdentity("boundary recurrence is not available for the shifted variant");
  }
}

}  // namespace

std::vector<MultiPoly> boundary_recurrence(unsigned order, NonlinearityKind kind, Symbol slope) {
  if (order > 8) throw ValidationError("boundary recurrence order must not exceed 8");
  const MultiPoly lambda = MultiPoly::symbol(kLambda);
  std::vector<MultiPoly> c(std::max(order, 1u) + 1);
  c[1] = MultiPoly::symbol(slope);
  // Coefficient of eps^n in (1+eps) u'' + u' + lambda (1+eps) g(u) = 0.
  for (unsigned n = 0; n + 2 <= order; ++n) {
    SeriesPoly u(std::vector<MultiPoly>(c.begin(), c.begin() + n + 1));
    const SeriesPoly g = nonlinearity(u, kind);
    MultiPoly gsum = g[n];
    if (n >= 1) gsum += g[n - 1];
    const long np1 = static_cast<long>(n + 1);
    c[n + 2] = MultiPoly(mpq_class(-1, (n + 2) * (n + 1))) *
               (MultiPoly(np1 * np1) * c[n + 1] + lambda * gsum);
  }
  std::vector<MultiPoly> out(order + 1);
  mpz_class fact = 1;
  for (unsigned k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    out[k] = MultiPoly(mpq_class(fact)) * c[k];
  }
  return out;
}

SeriesPoly boundary_series(unsigned order, NonlinearityKind kind, Symbol slope) {
  const std::vector<MultiPoly> d = boundary_recurrence(order, kind, slope);
  SeriesPoly out(order);
  mpz_class fact = 1;
  for (unsigned k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    out[k] = MultiPoly(mpq_class(1, 1) / mpq_class(fact)) * d[k];
  }
  return out;
}

}  // namespace tmlab::series

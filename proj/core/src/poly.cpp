#include "borelmod/poly.hpp"

#include <algorithm>
#include <sstream>

namespace borelmod {

std::string Var::name() const {
  return (family == VarFamily::Param ? "a" : "t") + std::to_string(index);
}

// ------------------------------------------------------------------ Monomial

Monomial::Monomial(Var v, std::uint32_t e) {
  if (e > 0) {
    f_.emplace_back(v, e);
    deg_ = e;
  }
}

std::uint32_t Monomial::degree(Var v) const {
  for (const auto& [w, e] : f_)
    if (w == v) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  auto a = f_.begin(), b = o.f_.begin();
  while (a != f_.end() || b != o.f_.end()) {
    if (b == o.f_.end() || (a != f_.end() && a->first < b->first)) {
      r.f_.push_back(*a++);
    } else if (a == f_.end() || b->first < a->first) {
      r.f_.push_back(*b++);
    } else {
      r.f_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.deg_ = deg_ + o.deg_;
  return r;
}

std::uint32_t Monomial::extract(Var v, Monomial& rest) const {
  rest = Monomial();
  std::uint32_t e = 0;
  for (const auto& f : f_) {
    if (f.first == v) {
      e = f.second;
    } else {
      rest.f_.push_back(f);
      rest.deg_ += f.second;
    }
  }
  return e;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
  Monomial r;
  auto a = f_.begin();
  for (const auto& [v, e] : o.f_) {
    while (a != f_.end() && a->first < v) r.f_.push_back(*a++);
    if (a == f_.end() || a->first != v || a->second < e) return std::nullopt;
    if (a->second > e) r.f_.emplace_back(v, a->second - e);
    ++a;
  }
  while (a != f_.end()) r.f_.push_back(*a++);
  r.deg_ = deg_ - o.deg_;
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  auto a = f_.begin(), b = o.f_.begin();
  while (a != f_.end() && b != o.f_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      const auto e = std::min(a->second, b->second);
      r.f_.emplace_back(a->first, e);
      r.deg_ += e;
      ++a;
      ++b;
    }
  }
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (deg_ != o.deg_) return deg_ <=> o.deg_;
  auto a = f_.begin(), b = o.f_.begin();
  while (a != f_.end() && b != o.f_.end()) {
    if (a->first != b->first)
      return a->first < b->first ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a->second != b->second) return a->second <=> b->second;
    ++a;
    ++b;
  }
  if (a != f_.end()) return std::strong_ordering::greater;
  if (b != o.f_.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string Monomial::to_string() const {
  std::string s;
  for (const auto& [v, e] : f_) {
    if (!s.empty()) s += '*';
    s += v.name();
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

// ----------------------------------------------------------------- MultiPoly

namespace {

bool term_desc(const Term& a, const Term& b) { return a.mono > b.mono; }

}  // namespace

MultiPoly::MultiPoly(long c) {
  if (c != 0) terms_.push_back({Monomial(), Rational(c)});
}

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial(), c});
}

MultiPoly::MultiPoly(Var v) { terms_.push_back({Monomial(v), Rational(1)}); }

MultiPoly::MultiPoly(Monomial m, Rational c) {
  if (c != 0) terms_.push_back({std::move(m), std::move(c)});
}

MultiPoly MultiPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_desc);
  MultiPoly r;
  r.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
      r.terms_.back().coeff += t.coeff;
    } else {
      if (!r.terms_.empty() && r.terms_.back().coeff == 0) r.terms_.pop_back();
      r.terms_.push_back(std::move(t));
    }
  }
  if (!r.terms_.empty() && r.terms_.back().coeff == 0) r.terms_.pop_back();
  return r;
}

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return 0;
}

std::uint32_t MultiPoly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::uint32_t MultiPoly::degree(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
  return d;
}

bool MultiPoly::contains_family(VarFamily f) const {
  for (const auto& t : terms_)
    for (const auto& [v, e] : t.mono.factors())
      if (v.family == f) return true;
  return false;
}

std::vector<Var> MultiPoly::vars() const {
  std::vector<Var> out;
  for (const auto& t : terms_)
    for (const auto& [v, e] : t.mono.factors()) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->mono > b->mono)) {
      r.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->mono > a->mono) {
      r.terms_.push_back(*b++);
    } else {
      Rational c = a->coeff + b->coeff;
      if (c != 0) r.terms_.push_back({a->mono, std::move(c)});
      ++a;
      ++b;
    }
  }
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.is_constant()) return scaled(o.terms_[0].coeff);
  if (is_constant()) return o.scaled(terms_[0].coeff);
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) prod.push_back({a.mono * b.mono, a.coeff * b.coeff});
  return from_terms(std::move(prod));
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MultiPoly MultiPoly::times(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  MultiPoly r(*this);
  for (auto& t : r.terms_) {
    t.mono = t.mono * m;
    t.coeff *= c;
  }
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r(1), b(*this);
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(Var v) const {
  std::vector<std::vector<Term>> buckets(degree(v) + 1);
  for (const auto& t : terms_) {
    Monomial rest;
    const auto e = t.mono.extract(v, rest);
    buckets[e].push_back({std::move(rest), t.coeff});
  }
  std::vector<MultiPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

std::optional<std::pair<MultiPoly, MultiPoly>> MultiPoly::linear_decompose(Var v) const {
  auto c = coefficients_in(v);
  if (c.size() > 2) return std::nullopt;
  if (c.size() == 1) return std::make_pair(MultiPoly(), std::move(c[0]));
  return std::make_pair(std::move(c[1]), std::move(c[0]));
}

std::pair<MultiPoly, unsigned> MultiPoly::substitute_rational(Var v, const MultiPoly& num,
                                                              const MultiPoly& den) const {
  if (den.is_zero()) throw std::invalid_argument("substitute_rational: zero denominator");
  if (num.contains(v) || den.contains(v))
    throw std::invalid_argument("substitute_rational: variable occurs in its own value");
  const auto coeffs = coefficients_in(v);
  const unsigned d = static_cast<unsigned>(coeffs.size() - 1);
  if (d == 0) return {*this, 0};
  std::vector<MultiPoly> num_pow(d + 1), den_pow(d + 1);
  num_pow[0] = den_pow[0] = MultiPoly(1);
  for (unsigned e = 1; e <= d; ++e) {
    num_pow[e] = num_pow[e - 1] * num;
    den_pow[e] = den_pow[e - 1] * den;
  }
  MultiPoly r;
  for (unsigned e = 0; e <= d; ++e)
    if (!coeffs[e].is_zero()) r += coeffs[e] * num_pow[e] * den_pow[d - e];
  return {std::move(r), d};
}

MultiPoly MultiPoly::substitute(Var v, const MultiPoly& value) const {
  if (!contains(v)) return *this;
  const auto coeffs = coefficients_in(v);
  MultiPoly r, pw(1);
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    if (e) pw *= value;
    if (!coeffs[e].is_zero()) r += coeffs[e] * pw;
  }
  return r;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q) {
  // Extended Euclid on signed 128-bit to stay exact for any 64-bit modulus.
  __int128 t = 0, nt = 1, r = static_cast<__int128>(q), nr = static_cast<__int128>(a % q);
  while (nr != 0) {
    const __int128 quo = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - quo * nt);
    std::tie(r, nr) = std::make_pair(nr, r - quo * nr);
  }
  if (r != 1) throw bad_characteristic_error("value not invertible mod " + std::to_string(q));
  if (t < 0) t += q;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t reduce_mod(const Integer& z, std::uint64_t q) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), q);
  return r.get_ui();
}

std::uint64_t MultiPoly::eval_mod_p(const std::function<std::uint64_t(Var)>& assignment,
                                    std::uint64_t q) const {
  unsigned __int128 acc = 0;
  for (const auto& t : terms_) {
    const std::uint64_t den = reduce_mod(t.coeff.get_den(), q);
    if (den == 0)
      throw bad_characteristic_error("coefficient denominator " + t.coeff.get_den().get_str() +
                                     " vanishes mod " + std::to_string(q));
    unsigned __int128 v = reduce_mod(t.coeff.get_num(), q);
    v = v * mod_inverse(den, q) % q;
    for (const auto& [var, e] : t.mono.factors()) {
      const std::uint64_t x = assignment(var) % q;
      for (std::uint32_t k = 0; k < e; ++k) v = v * x % q;
    }
    acc = (acc + v) % q;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t MultiPoly::eval_mod_p(const std::map<Var, std::uint64_t>& assignment,
                                    std::uint64_t q) const {
  return eval_mod_p(
      [&](Var v) -> std::uint64_t {
        auto it = assignment.find(v);
        if (it == assignment.end()) throw std::invalid_argument("no value for " + v.name());
        return it->second;
      },
      q);
}

Rational MultiPoly::content() const {
  if (terms_.empty()) return 0;
  Integer g = 0, l = 1;
  for (const auto& t : terms_) {
    g = gcd(g, Integer(t.coeff.get_num()));
    l = lcm(l, Integer(t.coeff.get_den()));
  }
  Rational c(abs(g), l);
  c.canonicalize();
  return c;
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return {};
  Rational c = content();
  if (terms_.front().coeff < 0) c = -c;
  return scaled(1 / c);
}

Monomial MultiPoly::monomial_gcd() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) g = g.gcd(t.mono);
  return g;
}

MultiPoly MultiPoly::divide_monomial(const Monomial& m) const {
  MultiPoly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    auto q = t.mono.divide(m);
    if (!q) throw std::invalid_argument("divide_monomial: not divisible");
    r.terms_.push_back({std::move(*q), t.coeff});
  }
  return r;  // dividing by a monomial preserves the grlex order
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("divide_exact: zero divisor");
  MultiPoly rem(*this), quo;
  const auto& lt = divisor.leading();
  while (!rem.is_zero()) {
    const auto& head = rem.leading();
    auto m = head.mono.divide(lt.mono);
    if (!m) return std::nullopt;
    MultiPoly step(std::move(*m), head.coeff / lt.coeff);
    quo += step;
    rem -= step * divisor;
  }
  return quo;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    const bool neg = t.coeff < 0;
    const Rational mag = neg ? Rational(-t.coeff) : t.coeff;
    if (first) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      s += rational_to_string(mag);
    } else if (mag == 1) {
      s += t.mono.to_string();
    } else {
      s += rational_to_string(mag) + '*' + t.mono.to_string();
    }
  }
  return s;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].mono != o.terms_[i].mono || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

bool MultiPoly::operator<(const MultiPoly& o) const {
  const std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = terms_[i].mono <=> o.terms_[i].mono; c != 0) return c < 0;
    if (terms_[i].coeff != o.terms_[i].coeff) return terms_[i].coeff < o.terms_[i].coeff;
  }
  return terms_.size() < o.terms_.size();
}

}  // namespace borelmod

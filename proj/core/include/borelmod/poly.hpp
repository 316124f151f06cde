#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace borelmod {

using Rational = mpq_class;
using Integer = mpz_class;

// Orbit parameters a<k> and group parameters t<j>. Params order before
// group vars; within a family by index.
enum class VarFamily : std::uint8_t { Param = 0, Group = 1 };

struct Var {
  VarFamily family = VarFamily::Param;
  std::uint32_t index = 0;

  static constexpr Var param(std::uint32_t k) { return {VarFamily::Param, k}; }
  static constexpr Var group(std::uint32_t j) { return {VarFamily::Group, j}; }

  bool is_param() const { return family == VarFamily::Param; }
  bool is_group() const { return family == VarFamily::Group; }
  std::string name() const;

  auto operator<=>(const Var&) const = default;
};

// Sparse exponent vector, sorted by Var, no zero exponents.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(Var v, std::uint32_t e = 1);

  const std::vector<std::pair<Var, std::uint32_t>>& factors() const { return f_; }
  std::uint32_t degree() const { return deg_; }
  std::uint32_t degree(Var v) const;
  bool is_one() const { return f_.empty(); }

  Monomial operator*(const Monomial& o) const;
  // Removes v entirely; returns its exponent.
  std::uint32_t extract(Var v, Monomial& rest) const;
  // Divides by o; nullopt when o does not divide this.
  std::optional<Monomial> divide(const Monomial& o) const;
  Monomial gcd(const Monomial& o) const;

  std::string to_string() const;

  bool operator==(const Monomial&) const = default;
  // Graded lexicographic, with a1 > a2 > ... > t1 > t2 > ... in the lex part.
  std::strong_ordering operator<=>(const Monomial& o) const;

 private:
  std::vector<std::pair<Var, std::uint32_t>> f_;
  std::uint32_t deg_ = 0;
};

struct Term {
  Monomial mono;
  Rational coeff;
};

class bad_characteristic_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sparse polynomial with rational coefficients in canonical form: terms in
// strictly decreasing graded-lex order, no zero coefficients. Structural
// equality is mathematical equality.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(long c);  // NOLINT: constants convert implicitly
  explicit MultiPoly(const Rational& c);
  explicit MultiPoly(Var v);
  MultiPoly(Monomial m, Rational c);

  static MultiPoly from_terms(std::vector<Term> terms);  // canonicalizes

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_term() const;
  const Term& leading() const { return terms_.front(); }

  std::uint32_t total_degree() const;
  std::uint32_t degree(Var v) const;
  bool contains(Var v) const { return degree(v) > 0; }
  bool contains_family(VarFamily f) const;
  std::vector<Var> vars() const;  // ascending

  MultiPoly operator-() const;
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly scaled(const Rational& c) const;
  // c * m * p; keeps term order since grlex is a monomial order.
  MultiPoly times(const Monomial& m, const Rational& c) const;
  MultiPoly pow(unsigned e) const;

  // p = kappa * v + rho with v absent from kappa and rho; nullopt if deg_v(p) >= 2.
  std::optional<std::pair<MultiPoly, MultiPoly>> linear_decompose(Var v) const;
  // All coefficients of p viewed as a polynomial in v: result[e] is the coefficient of v^e.
  std::vector<MultiPoly> coefficients_in(Var v) const;

  // den^deg_v(p) * p(v := num/den). Throws std::invalid_argument if den is
  // zero or v occurs in num or den.
  std::pair<MultiPoly, unsigned> substitute_rational(Var v, const MultiPoly& num,
                                                     const MultiPoly& den) const;
  MultiPoly substitute(Var v, const MultiPoly& value) const;

  // Evaluation in F_q. assignment must cover every variable.
  std::uint64_t eval_mod_p(const std::function<std::uint64_t(Var)>& assignment,
                           std::uint64_t q) const;
  std::uint64_t eval_mod_p(const std::map<Var, std::uint64_t>& assignment, std::uint64_t q) const;

  // Positive rational c with p/c having coprime integer coefficients and a
  // positive leading coefficient after division by sign.
  Rational content() const;
  MultiPoly primitive() const;  // p / (sign * content)
  Monomial monomial_gcd() const;
  MultiPoly divide_monomial(const Monomial& m) const;  // exact
  // Exact division; nullopt if divisor does not divide this.
  std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const;

  std::string to_string() const;
  static MultiPoly parse(std::string_view text);

  bool operator==(const MultiPoly& o) const;
  bool operator<(const MultiPoly& o) const;  // total order for sets, not algebraic

 private:
  std::vector<Term> terms_;
};

enum class ConstraintKind { Eq, Neq };

// poly == 0 (Eq) or poly != 0 (Neq), over the orbit parameters only.
struct Constraint {
  ConstraintKind kind = ConstraintKind::Neq;
  MultiPoly poly;

  std::string to_string() const {
    return poly.to_string() + (kind == ConstraintKind::Eq ? " = 0" : " != 0");
  }
};

inline MultiPoly operator*(long c, const MultiPoly& p) { return MultiPoly(c) * p; }

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q);
std::uint64_t reduce_mod(const Integer& z, std::uint64_t q);
std::string rational_to_string(const Rational& r);

}  // namespace borelmod

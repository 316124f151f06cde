#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace borelmod {

class invalid_type_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simple type X_n. Only the pairs A1+, B2+, C2+, D3+, E6-8, F4, G2 exist.
struct CartanType {
  char family = 'A';
  int rank = 1;

  static CartanType parse(std::string_view text);  // "G2", "e8", ...
  static bool is_valid(char family, int rank);

  std::string name() const;
  auto operator<=>(const CartanType&) const = default;
};

using Coeffs = std::vector<int>;

struct Root {
  Coeffs coeffs;  // over the simple roots, all >= 0
  int height() const;
};

// Positive roots of a reduced irreducible root system, stored in
// height-compatible order. Within a height level roots are sorted by
// descending lexicographic order on coefficients, so the simple roots come
// first in their natural numbering. Indices are 0-based internally and
// rendered 1-based.
class RootSystem {
 public:
  explicit RootSystem(CartanType type);

  const CartanType& type() const { return type_; }
  int rank() const { return type_.rank; }
  int size() const { return static_cast<int>(roots_.size()); }  // N

  const std::vector<Root>& positive_roots() const { return roots_; }
  const Root& root(int i) const { return roots_.at(static_cast<std::size_t>(i)); }
  int height(int i) const { return root(i).height(); }
  int highest_root() const { return size() - 1; }

  // Index k with root(i) + root(j) == root(k).
  std::optional<int> sum(int i, int j) const;
  std::optional<int> find(const Coeffs& c) const;
  // True for positive and negative roots.
  bool is_root(const Coeffs& c) const;

  // cartan(i, j) = 2 (a_i, a_j) / (a_i, a_i)
  const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
  // Symmetric bilinear form on the root lattice with short roots of norm 2
  // (norm 2 everywhere in the simply-laced case).
  int inner(const Coeffs& a, const Coeffs& b) const;
  int norm(int i) const { return norms_.at(static_cast<std::size_t>(i)); }

 private:
  CartanType type_;
  std::vector<std::vector<int>> gram_;
  std::vector<std::vector<int>> cartan_;
  std::vector<Root> roots_;
  std::vector<int> norms_;
  std::vector<int> sum_table_;  // size N*N, -1 where undefined
};

// Chevalley structure constants [e_i, e_j] = n(i, j) e_{i+j}. Signs are
// fixed by n = +(p+1) on every extraspecial pair. The full table also covers
// negative roots, which the finite-group oracle needs to act on all of g.
class StructureConstants {
 public:
  explicit StructureConstants(const RootSystem& rs);

  const RootSystem& roots() const { return rs_; }

  // Positive pair, 0-based. Zero when root(i)+root(j) is not a root.
  int operator()(int i, int j) const { return pos_[idx(i, j)]; }
  bool defined(int i, int j) const { return rs_.sum(i, j).has_value(); }

  // Signed roots: +k+1 for positive root k, -(k+1) for its negative.
  int signed_constant(int a, int b) const;

  // Largest m >= 0 with root(j) - m*root(i) a root (positive or negative).
  int string_below(int i, int j) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rs_.size()) +
           static_cast<std::size_t>(j);
  }
  int full(int a, int b) const;

  RootSystem rs_;
  std::vector<int> pos_;
  std::vector<int> full_;  // (2N)x(2N) over signed roots
};

struct GoodPrimeData {
  std::set<int> bad_primes;
  bool is_good(std::uint64_t p) const { return !bad_primes.contains(static_cast<int>(p)); }
};

// Primes dividing a coefficient of the highest root.
GoodPrimeData bad_primes(const CartanType& ct);
GoodPrimeData bad_primes(const RootSystem& rs);

// Known dim G for each simple type; used for the N = (dim G - rank)/2 check.
int group_dimension(const CartanType& ct);

std::string format_coeffs(const Coeffs& c);

}  // namespace borelmod

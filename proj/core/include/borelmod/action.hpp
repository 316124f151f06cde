#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "borelmod/poly.hpp"
#include "borelmod/roots.hpp"

namespace borelmod {

enum class Mode { Adjoint, Coadjoint };

std::string to_string(Mode m);
Mode parse_mode(std::string_view s);

struct MatrixEntry {
  int row = 0;
  int col = 0;
  std::int64_t value = 0;
};

// Dense square integer matrix with a cached list of nonzero entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  std::int64_t operator()(int r, int c) const { return data_[at(r, c)]; }
  std::int64_t& operator()(int r, int c) { return data_[at(r, c)]; }
  bool is_zero() const;
  IntMatrix transposed() const;
  IntMatrix operator*(const IntMatrix& o) const;

  void seal();  // rebuilds entries()
  const std::vector<MatrixEntry>& entries() const { return entries_; }

 private:
  std::size_t at(int r, int c) const { return static_cast<std::size_t>(r) * n_ + c; }
  int n_ = 0;
  std::vector<std::int64_t> data_;
  std::vector<MatrixEntry> entries_;
};

class integrality_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The action of the root subgroups x_j(t) = exp(t ad e_j) of U on u (or u*)
// as polynomials in t: x_j(t) v = sum_m t^m M_{j,m} v with M_{j,0} = 1.
// Coordinates are processed in order(): identity for the adjoint module and
// the reversal for the coadjoint module; in that order every M_{j,m}, m >= 1,
// is strictly lower triangular.
class ModuleWithFiltration {
 public:
  ModuleWithFiltration(const StructureConstants& sc, Mode mode);

  Mode mode() const { return mode_; }
  int dim() const { return n_; }
  const RootSystem& roots() const { return rs_; }

  // Largest m with M_{j,m} != 0.
  int max_power(int j) const { return static_cast<int>(exp_[j].size()) - 1; }
  // M_{j,m}; m = 0 is the identity.
  const IntMatrix& exp_coefficient(int j, int m) const { return exp_[j][m]; }

  // order()[s] is the coordinate processed at step s; position() inverts it.
  const std::vector<int>& order() const { return order_; }
  int position(int coord) const { return position_[coord]; }

  std::vector<MultiPoly> apply_generator(std::span<const MultiPoly> x, int j,
                                         const MultiPoly& t) const;
  std::vector<std::uint64_t> apply_fq(std::span<const std::uint64_t> x, int j, std::uint64_t s,
                                      std::uint64_t q) const;

 private:
  RootSystem rs_;
  Mode mode_;
  int n_;
  std::vector<std::vector<IntMatrix>> exp_;  // [j][m]
  std::vector<int> order_;
  std::vector<int> position_;
};

ModuleWithFiltration adjoint_module(const StructureConstants& sc);
ModuleWithFiltration coadjoint_module(const StructureConstants& sc);

// Exponential tables of ad e_j on the full Lie algebra g. Basis: positive
// root vectors 0..N-1, negative root vectors N..2N-1, then the simple
// coroots h_1..h_r.
struct FullAlgebraTables {
  int dim = 0;
  std::vector<std::vector<IntMatrix>> exp;  // [j][m], m = 0 is the identity
};

FullAlgebraTables full_algebra_tables(const StructureConstants& sc);

// ad e_j on g, as an integer matrix (basis as above).
IntMatrix full_algebra_ad(const StructureConstants& sc, int j);

}  // namespace borelmod

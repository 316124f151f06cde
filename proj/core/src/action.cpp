#include "borelmod/action.hpp"

#include <stdexcept>

namespace borelmod {

std::string to_string(Mode m) { return m == Mode::Adjoint ? "adjoint" : "coadjoint"; }

Mode parse_mode(std::string_view s) {
  if (s == "adjoint") return Mode::Adjoint;
  if (s == "coadjoint") return Mode::Coadjoint;
  throw std::invalid_argument("mode must be adjoint or coadjoint, got '" + std::string(s) + "'");
}

// ------------------------------------------------------------------ IntMatrix

bool IntMatrix::is_zero() const {
  for (auto v : data_)
    if (v != 0) return false;
  return true;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  t.seal();
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix p(n_);
  for (int r = 0; r < n_; ++r)
    for (int k = 0; k < n_; ++k) {
      const auto a = (*this)(r, k);
      if (a == 0) continue;
      for (int c = 0; c < n_; ++c) p(r, c) += a * o(k, c);
    }
  p.seal();
  return p;
}

void IntMatrix::seal() {
  entries_.clear();
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c)
      if (auto v = (*this)(r, c); v != 0) entries_.push_back({r, c, v});
}

namespace {

IntMatrix identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  m.seal();
  return m;
}

// [1, A, A^2/2!, ...] up to the first zero power, with exact division.
std::vector<IntMatrix> exp_series(const IntMatrix& ad, const std::string& what) {
  std::vector<IntMatrix> out{identity(ad.size())};
  IntMatrix power = identity(ad.size());
  for (std::int64_t m = 1;; ++m) {
    power = power * ad;
    if (power.is_zero()) break;
    IntMatrix coeff(ad.size());
    for (const auto& e : power.entries()) {
      // power holds A^m / (m-1)!; divide by m.
      if (e.value % m != 0) throw integrality_error("non-integral exponential table for " + what);
      coeff(e.row, e.col) = e.value / m;
    }
    coeff.seal();
    power = coeff;
    out.push_back(coeff);
    if (m > 16) throw std::logic_error("ad e_j not nilpotent");
  }
  return out;
}

}  // namespace

// ------------------------------------------------------- ModuleWithFiltration

ModuleWithFiltration::ModuleWithFiltration(const StructureConstants& sc, Mode mode)
    : rs_(sc.roots()), mode_(mode), n_(sc.roots().size()) {
  exp_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    IntMatrix ad(n_);
    for (int k = 0; k < n_; ++k)
      if (auto s = rs_.sum(j, k)) ad(*s, k) = sc(j, k);
    ad.seal();
    auto series = exp_series(ad, rs_.type().name());
    if (mode == Mode::Coadjoint) {
      // (g.xi)(v) = xi(g^{-1} v): transpose with t -> -t.
      for (std::size_t m = 1; m < series.size(); ++m) {
        IntMatrix t = series[m].transposed();
        if (m % 2 == 1) {
          for (const auto& e : t.entries()) t(e.row, e.col) = -e.value;
          t.seal();
        }
        series[m] = std::move(t);
      }
    }
    exp_[j] = std::move(series);
  }
  order_.resize(n_);
  position_.resize(n_);
  for (int s = 0; s < n_; ++s) order_[s] = mode == Mode::Adjoint ? s : n_ - 1 - s;
  for (int s = 0; s < n_; ++s) position_[order_[s]] = s;

  for (int j = 0; j < n_; ++j)
    for (std::size_t m = 1; m < exp_[j].size(); ++m)
      for (const auto& e : exp_[j][m].entries())
        if (position_[e.col] >= position_[e.row])
          throw std::logic_error("action is not triangular in the processing order");
}

std::vector<MultiPoly> ModuleWithFiltration::apply_generator(std::span<const MultiPoly> x, int j,
                                                             const MultiPoly& t) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("apply_generator: bad vector size");
  std::vector<MultiPoly> y(x.begin(), x.end());
  MultiPoly tp(1);
  for (int m = 1; m <= max_power(j); ++m) {
    tp *= t;
    for (const auto& e : exp_[j][m].entries())
      if (!x[e.col].is_zero()) y[e.row] += tp * x[e.col].scaled(Rational(e.value));
  }
  return y;
}

std::vector<std::uint64_t> ModuleWithFiltration::apply_fq(std::span<const std::uint64_t> x, int j,
                                                          std::uint64_t s, std::uint64_t q) const {
  std::vector<std::uint64_t> y(x.begin(), x.end());
  std::uint64_t sp = 1;
  for (int m = 1; m <= max_power(j); ++m) {
    sp = sp * (s % q) % q;
    for (const auto& e : exp_[j][m].entries()) {
      const auto v = static_cast<std::uint64_t>(((e.value % static_cast<std::int64_t>(q)) +
                                                 static_cast<std::int64_t>(q)) %
                                                static_cast<std::int64_t>(q));
      y[e.row] = (y[e.row] + sp * v % q * (x[e.col] % q)) % q;
    }
  }
  return y;
}

ModuleWithFiltration adjoint_module(const StructureConstants& sc) { return {sc, Mode::Adjoint}; }
ModuleWithFiltration coadjoint_module(const StructureConstants& sc) { return {sc, Mode::Coadjoint}; }

// ------------------------------------------------------------ full algebra

IntMatrix full_algebra_ad(const StructureConstants& sc, int j) {
  const RootSystem& rs = sc.roots();
  const int N = rs.size(), r = rs.rank(), dim = 2 * N + r;
  IntMatrix ad(dim);
  const auto& bj = rs.root(j).coeffs;
  auto signed_slot = [N](int s) { return s > 0 ? s - 1 : N - s - 1; };

  for (int k = 0; k < N; ++k) {
    // e_k
    if (auto s = rs.sum(j, k)) ad(*s, k) = sc(j, k);
    // e_{-k}
    if (k == j) {
      // [e_a, e_{-a}] = h_a, with a^vee = sum c_i * norm(a_i)/norm(a) * a_i^vee
      for (int i = 0; i < r; ++i) {
        Coeffs simple(r, 0);
        simple[i] = 1;
        const int num = bj[i] * rs.inner(simple, simple);
        if (num % rs.norm(j) != 0) throw integrality_error("coroot not integral");
        ad(2 * N + i, N + k) = num / rs.norm(j);
      }
    } else {
      Coeffs diff(r);
      for (int i = 0; i < r; ++i) diff[i] = bj[i] - rs.root(k).coeffs[i];
      if (rs.is_root(diff)) {
        int target = 0;
        if (auto p = rs.find(diff)) {
          target = *p + 1;
        } else {
          Coeffs neg(diff);
          for (auto& c : neg) c = -c;
          target = -(*rs.find(neg) + 1);
        }
        ad(signed_slot(target), N + k) = sc.signed_constant(j + 1, -(k + 1));
      }
    }
  }
  // [e_j, h_i] = -<b_j, a_i^vee> e_j
  for (int i = 0; i < r; ++i) {
    Coeffs simple(r, 0);
    simple[i] = 1;
    const int pairing = 2 * rs.inner(bj, simple) / rs.inner(simple, simple);
    ad(j, 2 * N + i) = -pairing;
  }
  ad.seal();
  return ad;
}

FullAlgebraTables full_algebra_tables(const StructureConstants& sc) {
  FullAlgebraTables t;
  const RootSystem& rs = sc.roots();
  t.dim = 2 * rs.size() + rs.rank();
  for (int j = 0; j < rs.size(); ++j)
    t.exp.push_back(exp_series(full_algebra_ad(sc, j), rs.type().name() + " on g"));
  return t;
}

}  // namespace borelmod

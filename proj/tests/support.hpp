#pragma once

// Test-side reference computations. Nothing here calls into the engine's
// counting code; the unitriangular models only use integer matrices.

#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "borelmod/poly.hpp"
#include "borelmod/roots.hpp"

namespace support {

using borelmod::MultiPoly;

struct UF {
  std::vector<std::uint32_t> p;
  std::uint64_t sets;
  explicit UF(std::size_t n) : p(n), sets(n) { std::iota(p.begin(), p.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      p[std::max(a, b)] = std::min(a, b);
      --sets;
    }
  }
};

// n x n matrices over F_p, row-major.
using Mat = std::vector<int>;

inline Mat mul(const Mat& a, const Mat& b, int n, int p) {
  Mat c(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (a[i * n + k])
        for (int j = 0; j < n; ++j) c[i * n + j] = (c[i * n + j] + a[i * n + k] * b[k * n + j]) % p;
  return c;
}

// Positions (i, j), i < j, of the strictly upper triangle.
inline std::vector<std::pair<int, int>> upper(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Elementary generators I + E_{i,i+1} and their inverses I - E_{i,i+1}.
inline std::pair<std::vector<Mat>, std::vector<Mat>> ut_generators(int n, int p) {
  std::vector<Mat> g, gi;
  for (int i = 0; i + 1 < n; ++i) {
    Mat a(n * n, 0), b(n * n, 0);
    for (int k = 0; k < n; ++k) a[k * n + k] = b[k * n + k] = 1;
    a[i * n + i + 1] = 1;
    b[i * n + i + 1] = p - 1;
    g.push_back(a);
    gi.push_back(b);
  }
  return {g, gi};
}

// Orbits of UT_n(p) on a set of matrices supported on `pos`, acting by
// X -> proj(g X g^-1). `unit` adds the identity (group elements).
inline std::uint64_t conjugation_orbits(int n, int p, const std::vector<std::pair<int, int>>& pos, bool unit) {
  const auto [g, gi] = ut_generators(n, p);
  const std::size_t m = pos.size();
  const std::uint64_t total = ipow(p, m);
  auto decode = [&](std::uint64_t code) {
    Mat x(n * n, 0);
    if (unit)
      for (int k = 0; k < n; ++k) x[k * n + k] = 1;
    for (std::size_t i = 0; i < m; ++i) {
      x[pos[i].first * n + pos[i].second] = static_cast<int>(code % p);
      code /= p;
    }
    return x;
  };
  auto encode = [&](const Mat& x) {
    std::uint64_t code = 0;
    for (std::size_t i = m; i-- > 0;) code = code * p + x[pos[i].first * n + pos[i].second];
    return code;
  };
  UF uf(total);
  for (std::uint64_t c = 0; c < total; ++c) {
    const Mat x = decode(c);
    for (std::size_t k = 0; k < g.size(); ++k)
      uf.unite(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(encode(mul(mul(g[k], x, n, p), gi[k], n, p))));
  }
  return uf.sets;
}

// k(UT_n(p)), the unitriangular group being U for type A_{n-1}.
inline std::uint64_t ut_class_count(int n, int p) { return conjugation_orbits(n, p, upper(n), true); }

// UT_n(p) orbits on strictly upper triangular matrices (adjoint).
inline std::uint64_t ut_adjoint_orbits(int n, int p) { return conjugation_orbits(n, p, upper(n), false); }

// UT_n(p) orbits on strictly lower triangular matrices, the dual of u via
// the trace form; the action is conjugation followed by truncation.
inline std::uint64_t ut_coadjoint_orbits(int n, int p) {
  std::vector<std::pair<int, int>> lower;
  for (auto [i, j] : upper(n)) lower.emplace_back(j, i);
  return conjugation_orbits(n, p, lower, false);
}

// The Lie bracket on g in the basis e_a (signed roots a = +-1..+-N) and the
// simple coroots h_1..h_r, written directly from the structure constants.
// Basis index: positive root k -> k, negative root k -> N + k, h_i -> 2N + i.
class Bracket {
 public:
  using Vec = std::map<int, long>;

  explicit Bracket(const borelmod::StructureConstants& sc) : sc_(sc), rs_(sc.roots()) {
    N_ = rs_.size();
    r_ = rs_.rank();
  }

  int dim() const { return 2 * N_ + r_; }

  Vec operator()(int x, int y) const {
    Vec out;
    if (x >= 2 * N_ && y >= 2 * N_) return out;
    if (x >= 2 * N_) {
      Vec v = (*this)(y, x);
      for (auto& [k, c] : v) c = -c;
      return v;
    }
    const int a = signed_of(x);
    const auto ca = coeffs(a);
    if (y >= 2 * N_) {
      // [e_a, h_i] = -<a, alpha_i^vee> e_a
      borelmod::Coeffs s(r_, 0);
      s[y - 2 * N_] = 1;
      const long pair = 2 * rs_.inner(ca, s) / rs_.inner(s, s);
      if (pair) out[x] = -pair;
      return out;
    }
    const int b = signed_of(y);
    const auto cb = coeffs(b);
    borelmod::Coeffs sum(r_);
    bool zero = true;
    for (int i = 0; i < r_; ++i) {
      sum[i] = ca[i] + cb[i];
      zero = zero && sum[i] == 0;
    }
    if (zero) {
      // [e_a, e_-a] = h_a for a > 0, expressed in simple coroots.
      const int sign = a > 0 ? 1 : -1;
      const auto& pa = rs_.root(std::abs(a) - 1).coeffs;
      for (int i = 0; i < r_; ++i) {
        borelmod::Coeffs s(r_, 0);
        s[i] = 1;
        const long c = pa[i] * rs_.inner(s, s) / rs_.norm(std::abs(a) - 1);
        if (c) out[2 * N_ + i] = sign * c;
      }
      return out;
    }
    if (!rs_.is_root(sum)) return out;
    const int n = sc_.signed_constant(a, b);
    int target;
    if (auto k = rs_.find(sum)) {
      target = *k;
    } else {
      for (auto& c : sum) c = -c;
      target = N_ + *rs_.find(sum);
    }
    out[target] = n;
    return out;
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    Vec out;
    for (auto [i, a] : u)
      for (auto [j, b] : v)
        for (auto [k, c] : (*this)(i, j)) out[k] += a * b * c;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
  }

 private:
  int signed_of(int x) const { return x < N_ ? x + 1 : -(x - N_ + 1); }
  borelmod::Coeffs coeffs(int a) const {
    auto c = rs_.root(std::abs(a) - 1).coeffs;
    if (a < 0)
      for (auto& v : c) v = -v;
    return c;
  }
  const borelmod::StructureConstants& sc_;
  const borelmod::RootSystem& rs_;
  int N_ = 0, r_ = 0;
};

// Largest absolute value of any coefficient in the Jacobi sums over all basis
// triples (0 when the identity holds).
inline long jacobi_defect(const borelmod::StructureConstants& sc) {
  const Bracket br(sc);
  const int d = br.dim();
  std::vector<std::vector<Bracket::Vec>> table(d, std::vector<Bracket::Vec>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) table[i][j] = br(i, j);
  auto apply = [&](int x, const Bracket::Vec& v, Bracket::Vec& acc) {
    for (auto [k, c] : v)
      for (auto [m, e] : table[x][k]) acc[m] += c * e;
  };
  long worst = 0;
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y)
      for (int z = y + 1; z < d; ++z) {
        Bracket::Vec acc;
        apply(x, table[y][z], acc);
        apply(y, table[z][x], acc);
        apply(z, table[x][y], acc);
        for (auto [k, c] : acc) worst = std::max(worst, std::abs(c));
      }
  return worst;
}

// Random polynomial in a1..a<params> and t1..t<groups> with small integer
// coefficients.
inline MultiPoly random_poly(std::mt19937& rng, int params, int groups, int terms, int max_exp) {
  std::uniform_int_distribution<int> coef(-5, 5), expo(0, max_exp), pick(0, params + groups - 1);
  MultiPoly p;
  for (int t = 0; t < terms; ++t) {
    borelmod::Monomial m;
    const int vars = 1 + pick(rng) % 3;
    for (int v = 0; v < vars; ++v) {
      const int k = pick(rng);
      const auto var = k < params ? borelmod::Var::param(k + 1) : borelmod::Var::group(k - params + 1);
      m = m * borelmod::Monomial(var, static_cast<std::uint32_t>(expo(rng)));
    }
    p += MultiPoly(m, borelmod::Rational(coef(rng)));
  }
  return p;
}

}  // namespace support

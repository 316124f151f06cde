#include "borelmod/oracle.hpp"

#include <numeric>
#include <sstream>
#include <unordered_map>

namespace borelmod {

namespace {

void check_instance(const CartanType& ct, int n, std::uint64_t p, std::uint64_t guard) {
  if (p < 2 || p > 65535) throw std::domain_error("oracle prime out of range");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::domain_error(std::to_string(p) + " is not prime");
  if (!bad_primes(ct).is_good(p))
    throw std::domain_error(std::to_string(p) + " is a bad prime for " + ct.name());
  std::uint64_t states = 1;
  for (int i = 0; i < n; ++i) {
    if (states > guard / p) throw guard_exceeded("p^N exceeds the enumeration guard");
    states *= p;
  }
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent[a] = b;
    return true;
  }
};

std::uint64_t mod_entry(std::int64_t v, std::uint64_t p) {
  const auto sp = static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(((v % sp) + sp) % sp);
}

// Sparse F_p matrix of x_j(1) = sum_m M_{j,m}.
struct SparseMod {
  std::vector<std::vector<std::pair<int, std::uint32_t>>> rows;  // row -> (col, value)
};

SparseMod exp_at_one(const std::vector<IntMatrix>& series, std::uint64_t p) {
  const int n = series.front().size();
  std::vector<std::int64_t> dense(static_cast<std::size_t>(n) * n, 0);
  for (const auto& m : series)
    for (const auto& e : m.entries()) dense[static_cast<std::size_t>(e.row) * n + e.col] += e.value;
  SparseMod s;
  s.rows.resize(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (auto v = mod_entry(dense[static_cast<std::size_t>(r) * n + c], p); v != 0)
        s.rows[r].emplace_back(c, static_cast<std::uint32_t>(v));
  return s;
}

}  // namespace

std::uint64_t brute_orbits(const ModuleWithFiltration& mod, std::uint64_t p, std::uint64_t guard) {
  const int n = mod.dim();
  check_instance(mod.roots().type(), n, p, guard);
  std::uint64_t states = 1;
  for (int i = 0; i < n; ++i) states *= p;

  std::vector<SparseMod> gens;
  for (int j = 0; j < n; ++j) {
    std::vector<IntMatrix> series;
    for (int m = 0; m <= mod.max_power(j); ++m) series.push_back(mod.exp_coefficient(j, m));
    gens.push_back(exp_at_one(series, p));
  }
  std::vector<std::uint64_t> weight(n, 1);
  for (int i = 1; i < n; ++i) weight[i] = weight[i - 1] * p;

  UnionFind uf(states);
  std::uint64_t orbits = states;
  std::vector<std::uint64_t> x(n);
  for (std::uint64_t code = 0; code < states; ++code) {
    std::uint64_t r = code;
    for (int i = 0; i < n; ++i) {
      x[i] = r % p;
      r /= p;
    }
    for (const auto& g : gens) {
      std::uint64_t image = 0;
      for (int row = 0; row < n; ++row) {
        std::uint64_t acc = 0;
        for (auto [c, v] : g.rows[row]) acc += v * x[c];
        image += (acc % p) * weight[row];
      }
      if (image != code && uf.unite(static_cast<std::uint32_t>(code), static_cast<std::uint32_t>(image)))
        --orbits;
    }
  }
  return orbits;
}

std::uint64_t brute_classes(const StructureConstants& sc, std::uint64_t p, std::uint64_t guard) {
  const RootSystem& rs = sc.roots();
  const int N = rs.size();
  check_instance(rs.type(), N, p, guard);
  std::uint64_t order = 1;
  for (int i = 0; i < N; ++i) order *= p;

  const FullAlgebraTables tables = full_algebra_tables(sc);
  const int d = tables.dim;
  std::vector<SparseMod> gen, inv;
  for (int j = 0; j < N; ++j) {
    gen.push_back(exp_at_one(tables.exp[j], p));
    // exp(-ad e_j): alternate signs
    std::vector<IntMatrix> neg = tables.exp[j];
    for (std::size_t m = 1; m < neg.size(); m += 2) {
      for (const auto& e : neg[m].entries()) neg[m](e.row, e.col) = -e.value;
      neg[m].seal();
    }
    inv.push_back(exp_at_one(neg, p));
  }

  using Mat = std::vector<std::uint16_t>;
  auto left = [&](const SparseMod& a, const Mat& m) {
    Mat out(m.size(), 0);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        std::uint64_t acc = 0;
        for (auto [k, v] : a.rows[r]) acc += static_cast<std::uint64_t>(v) * m[k * d + c];
        out[r * d + c] = static_cast<std::uint16_t>(acc % p);
      }
    return out;
  };
  auto right = [&](const Mat& m, const SparseMod& a) {
    Mat out(m.size(), 0);
    for (int r = 0; r < d; ++r)
      for (int k = 0; k < d; ++k) {
        const std::uint64_t mv = m[r * d + k];
        if (mv == 0) continue;
        for (auto [c, v] : a.rows[k]) out[r * d + c] = static_cast<std::uint16_t>((out[r * d + c] + mv * v) % p);
      }
    return out;
  };
  struct Hash {
    std::size_t operator()(const Mat& m) const {
      std::size_t h = 1469598103934665603ull;
      for (auto v : m) h = (h ^ v) * 1099511628211ull;
      return h;
    }
  };

  // Enumerate U(p) by closing {1} under left multiplication by generators.
  std::vector<Mat> elems;
  std::unordered_map<Mat, std::uint32_t, Hash> index;
  Mat id(static_cast<std::size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i) id[i * d + i] = 1;
  index.emplace(id, 0);
  elems.push_back(id);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gen) {
      Mat m = left(g, elems[head]);
      if (index.contains(m)) continue;
      if (elems.size() >= order) throw std::logic_error("U(p) larger than p^N");
      index.emplace(m, static_cast<std::uint32_t>(elems.size()));
      elems.push_back(std::move(m));
    }
  }
  if (elems.size() != order) throw std::logic_error("U(p) smaller than p^N: adjoint action not faithful");

  UnionFind uf(elems.size());
  std::uint64_t classes = elems.size();
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (int j = 0; j < N; ++j) {
      const Mat c = right(left(gen[j], elems[i]), inv[j]);
      if (uf.unite(static_cast<std::uint32_t>(i), index.at(c))) --classes;
    }
  return classes;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::OverCount: return "over-count";
    case Verdict::UnderCount: return "under-count";
  }
  return "?";
}

std::string VerifyReport::to_string() const {
  std::ostringstream os;
  os << "cells total: " << cell_total.get_str() << "\n"
     << "brute-force orbits: " << orbits << "\n"
     << "verdict: " << borelmod::to_string(verdict);
  if (verdict == Verdict::OverCount)
    os << " (+" << Integer(cell_total - Integer(static_cast<unsigned long>(orbits))).get_str() << ")";
  if (verdict == Verdict::UnderCount) os << " (covering violated)";
  if (relaxed) os << "\nforest has relaxed cells";
  os << "\n";
  return os.str();
}

VerifyReport verify(const Forest& f, const ModuleWithFiltration& mod, std::uint64_t p,
                    std::uint64_t guard) {
  if (f.type != mod.roots().type() || f.mode != mod.mode())
    throw std::invalid_argument("forest and module differ in type or mode");
  VerifyReport r;
  r.cell_total = class_number(f, p, guard);
  r.orbits = brute_orbits(mod, p, guard);
  for (const auto& c : f.cells) r.relaxed = r.relaxed || c.relaxed;
  const Integer o(static_cast<unsigned long>(r.orbits));
  r.verdict = r.cell_total == o ? Verdict::Equal : r.cell_total > o ? Verdict::OverCount : Verdict::UnderCount;
  return r;
}

}  // namespace borelmod

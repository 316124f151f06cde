#include "borelmod/roots.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace borelmod {

namespace {

std::vector<std::vector<int>> gram_matrix(const CartanType& ct) {
  const int n = ct.rank;
  std::vector<std::vector<int>> g(n, std::vector<int>(n, 0));
  auto link = [&](int i, int j, int v) {
    g[i][j] = v;
    g[j][i] = v;
  };
  switch (ct.family) {
    case 'A':
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
      break;
    case 'B':
      for (int i = 0; i < n - 1; ++i) g[i][i] = 4;
      g[n - 1][n - 1] = 2;
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -2);
      break;
    case 'C':
      for (int i = 0; i < n - 1; ++i) g[i][i] = 2;
      g[n - 1][n - 1] = 4;
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
      link(n - 2, n - 1, -2);
      break;
    case 'D':
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
      link(n - 3, n - 1, -1);
      break;
    case 'E':
      // Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4.
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      link(0, 2, -1);
      link(1, 3, -1);
      for (int i = 2; i + 1 < n; ++i) link(i, i + 1, -1);
      break;
    case 'F':
      g[0][0] = g[1][1] = 4;
      g[2][2] = g[3][3] = 2;
      link(0, 1, -2);
      link(1, 2, -2);
      link(2, 3, -1);
      break;
    case 'G':
      g[0][0] = 2;
      g[1][1] = 6;
      link(0, 1, -3);
      break;
    default:
      throw invalid_type_error("unknown family");
  }
  return g;
}

bool coeffs_lex_greater(const Coeffs& a, const Coeffs& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Coeffs add(const Coeffs& a, const Coeffs& b, int scale = 1) {
  Coeffs r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + scale * b[i];
  return r;
}

Coeffs negate(const Coeffs& a) {
  Coeffs r(a);
  for (auto& x : r) x = -x;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- CartanType

bool CartanType::is_valid(char family, int rank) {
  switch (family) {
    case 'A': return rank >= 1;
    case 'B': return rank >= 2;
    case 'C': return rank >= 2;
    case 'D': return rank >= 3;
    case 'E': return rank >= 6 && rank <= 8;
    case 'F': return rank == 4;
    case 'G': return rank == 2;
    default: return false;
  }
}

CartanType CartanType::parse(std::string_view text) {
  if (text.size() < 2) throw invalid_type_error("bad Cartan type '" + std::string(text) + "'");
  const char family = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  int rank = 0;
  for (char c : text.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || rank > 1000)
      throw invalid_type_error("bad Cartan type '" + std::string(text) + "'");
    rank = rank * 10 + (c - '0');
  }
  if (!is_valid(family, rank))
    throw invalid_type_error("no simple type " + std::string(text));
  return CartanType{family, rank};
}

std::string CartanType::name() const { return std::string(1, family) + std::to_string(rank); }

int Root::height() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0); }

// ---------------------------------------------------------------- RootSystem

RootSystem::RootSystem(CartanType type) : type_(type) {
  if (!CartanType::is_valid(type.family, type.rank))
    throw invalid_type_error("no simple type " + type.name());
  const int n = type.rank;
  gram_ = gram_matrix(type);
  cartan_.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cartan_[i][j] = 2 * gram_[i][j] / gram_[i][i];

  // Closure by height. When a level is processed every lower level is
  // complete, so root strings through simple roots can be read off.
  std::set<Coeffs> known;
  std::vector<Coeffs> level;
  for (int i = 0; i < n; ++i) {
    Coeffs c(n, 0);
    c[i] = 1;
    level.push_back(c);
    known.insert(c);
  }
  std::vector<Coeffs> all;
  while (!level.empty()) {
    std::sort(level.begin(), level.end(), coeffs_lex_greater);
    all.insert(all.end(), level.begin(), level.end());
    std::set<Coeffs> next;
    for (const auto& beta : level) {
      for (int i = 0; i < n; ++i) {
        int p = 0;
        for (Coeffs c = beta;;) {
          c[i] -= 1;
          if (!known.contains(c)) break;
          ++p;
        }
        int pairing = 0;  // <beta, a_i^vee>
        for (int k = 0; k < n; ++k) pairing += beta[k] * gram_[k][i];
        pairing = 2 * pairing / gram_[i][i];
        if (p - pairing > 0) {
          Coeffs c = beta;
          c[i] += 1;
          next.insert(c);
        }
      }
    }
    for (const auto& c : next) known.insert(c);
    level.assign(next.begin(), next.end());
  }

  roots_.reserve(all.size());
  for (auto& c : all) roots_.push_back(Root{std::move(c)});
  const int N = size();
  norms_.resize(N);
  for (int i = 0; i < N; ++i) norms_[i] = inner(roots_[i].coeffs, roots_[i].coeffs);

  sum_table_.assign(static_cast<std::size_t>(N) * N, -1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (auto k = find(add(roots_[i].coeffs, roots_[j].coeffs)))
        sum_table_[static_cast<std::size_t>(i) * N + j] = *k;
}

std::optional<int> RootSystem::find(const Coeffs& c) const {
  // Binary search over (height asc, lex desc).
  const int h = std::accumulate(c.begin(), c.end(), 0);
  auto it = std::lower_bound(roots_.begin(), roots_.end(), c, [&](const Root& r, const Coeffs& key) {
    const int hr = r.height();
    if (hr != h) return hr < h;
    return coeffs_lex_greater(r.coeffs, key);
  });
  if (it != roots_.end() && it->coeffs == c) return static_cast<int>(it - roots_.begin());
  return std::nullopt;
}

bool RootSystem::is_root(const Coeffs& c) const {
  return find(c).has_value() || find(negate(c)).has_value();
}

std::optional<int> RootSystem::sum(int i, int j) const {
  const int k = sum_table_[static_cast<std::size_t>(i) * size() + j];
  if (k < 0) return std::nullopt;
  return k;
}

int RootSystem::inner(const Coeffs& a, const Coeffs& b) const {
  int s = 0;
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) s += a[i] * gram_[i][j] * b[j];
  return s;
}

// ------------------------------------------------------- StructureConstants

namespace {

// Signed root helper: +k+1 / -(k+1).
struct Signed {
  const RootSystem& rs;
  Coeffs coeffs(int a) const {
    const auto& c = rs.root(std::abs(a) - 1).coeffs;
    return a > 0 ? c : negate(c);
  }
  std::optional<int> of(const Coeffs& c) const {
    if (auto k = rs.find(c)) return *k + 1;
    if (auto k = rs.find(negate(c))) return -(*k + 1);
    return std::nullopt;
  }
  int norm(int a) const { return rs.norm(std::abs(a) - 1); }
};

}  // namespace

int StructureConstants::string_below(int i, int j) const {
  int p = 0;
  Coeffs c = rs_.root(j).coeffs;
  for (;;) {
    c = add(c, rs_.root(i).coeffs, -1);
    if (!rs_.is_root(c)) break;
    ++p;
  }
  return p;
}

StructureConstants::StructureConstants(const RootSystem& rs) : rs_(rs) {
  const int N = rs_.size();
  pos_.assign(static_cast<std::size_t>(N) * N, 0);
  const Signed sg{rs_};

  // General N(a, b) over signed roots, reduced to positive pairs with
  // smaller sums (Carter's relations for a Chevalley basis).
  std::function<mpq_class(int, int)> value = [&](int a, int b) -> mpq_class {
    auto c = sg.of(add(sg.coeffs(a), sg.coeffs(b)));
    if (!c) return 0;
    if (a > 0 && b > 0) return pos_[idx(a - 1, b - 1)];
    if (a < 0 && b < 0) return -value(-a, -b);
    if (a < 0) return -value(b, a);
    const int t = *c;  // a positive, b negative, t = a + b
    if (t > 0) return -mpq_class(sg.norm(t)) / sg.norm(a) * value(-b, t);
    return mpq_class(sg.norm(t)) / sg.norm(b) * value(-t, a);
  };

  for (int k = 0; k < N; ++k) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        if (rs_.sum(i, j) == k) pairs.emplace_back(i, j);
    if (pairs.empty()) continue;
    const auto [al, be] = pairs.front();  // extraspecial
    const int nab = string_below(al, be) + 1;
    pos_[idx(al, be)] = nab;
    pos_[idx(be, al)] = -nab;
    const int xi_norm = rs_.norm(k);
    for (std::size_t q = 1; q < pairs.size(); ++q) {
      const auto [ga, de] = pairs[q];
      const int A = al + 1, B = be + 1, G = ga + 1, D = de + 1;
      mpq_class acc = 0;
      if (auto bg = sg.of(add(rs_.root(be).coeffs, rs_.root(ga).coeffs, -1)))
        acc += value(B, -G) * value(A, -D) / sg.norm(*bg);
      if (auto ag = sg.of(add(rs_.root(al).coeffs, rs_.root(ga).coeffs, -1)))
        acc += value(-G, A) * value(B, -D) / sg.norm(*ag);
      mpq_class n = acc * xi_norm / nab;
      if (n.get_den() != 1)
        throw std::logic_error("non-integral structure constant for " + rs_.type().name());
      const int v = static_cast<int>(n.get_num().get_si());
      if (std::abs(v) != string_below(ga, de) + 1)
        throw std::logic_error("structure constant violates the root-string rule");
      pos_[idx(ga, de)] = v;
      pos_[idx(de, ga)] = -v;
    }
  }

  full_.assign(static_cast<std::size_t>(4) * N * N, 0);
  auto slot = [N](int a) { return a > 0 ? a - 1 : N - a - 1; };
  for (int a = -N; a <= N; ++a) {
    if (a == 0) continue;
    for (int b = -N; b <= N; ++b) {
      if (b == 0) continue;
      mpq_class v = value(a, b);
      if (v.get_den() != 1) throw std::logic_error("non-integral structure constant");
      full_[static_cast<std::size_t>(slot(a)) * (2 * N) + slot(b)] =
          static_cast<int>(v.get_num().get_si());
    }
  }
}

int StructureConstants::full(int a, int b) const {
  const int N = rs_.size();
  auto slot = [N](int x) { return x > 0 ? x - 1 : N - x - 1; };
  return full_[static_cast<std::size_t>(slot(a)) * (2 * N) + slot(b)];
}

int StructureConstants::signed_constant(int a, int b) const {
  const int N = rs_.size();
  if (a == 0 || b == 0 || std::abs(a) > N || std::abs(b) > N)
    throw std::out_of_range("signed root index");
  return full(a, b);
}

// ------------------------------------------------------------- good primes

GoodPrimeData bad_primes(const RootSystem& rs) {
  GoodPrimeData out;
  for (int c : rs.root(rs.highest_root()).coeffs) {
    int x = c;
    for (int p = 2; p * p <= x; ++p)
      while (x % p == 0) {
        out.bad_primes.insert(p);
        x /= p;
      }
    if (x > 1) out.bad_primes.insert(x);
  }
  return out;
}

GoodPrimeData bad_primes(const CartanType& ct) { return bad_primes(RootSystem(ct)); }

int group_dimension(const CartanType& ct) {
  const int n = ct.rank;
  switch (ct.family) {
    case 'A': return n * (n + 2);
    case 'B':
    case 'C': return n * (2 * n + 1);
    case 'D': return n * (2 * n - 1);
    case 'E': return n == 6 ? 78 : n == 7 ? 133 : 248;
    case 'F': return 52;
    case 'G': return 14;
    default: throw invalid_type_error("unknown family");
  }
}

std::string format_coeffs(const Coeffs& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  return os.str();
}

}  // namespace borelmod

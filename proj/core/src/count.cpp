#include "borelmod/count.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace borelmod {

std::uint64_t enumeration_guard() {
  if (const char* env = std::getenv("BM_GUARD")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 10'000'000;
}

ModalityResult modality(const Forest& f) {
  ModalityResult r;
  for (const auto& c : f.cells) {
    r.mod_U = std::max(r.mod_U, c.dim);
    r.upper_bound_only = r.upper_bound_only || c.relaxed;
  }
  r.mod_B = r.mod_U - f.type.rank;
  return r;
}

CellShape cell_shape(const Cell& c) {
  CellShape s;
  std::set<Var> params;
  for (const auto& slot : c.slots)
    if (slot.kind == SlotKind::Param) params.insert(slot.value.leading().mono.factors()[0].first);
  std::vector<MultiPoly> neq;
  for (const auto& p : c.neq)
    if (!p.is_constant()) neq.push_back(p);
    else if (p.is_zero()) throw std::logic_error("cell with a zero inequation");

  auto occurrences = [&](Var v) {
    return std::count_if(neq.begin(), neq.end(), [&](const MultiPoly& p) { return p.contains(v); });
  };
  for (bool progress = true; progress;) {
    progress = false;
    for (auto it = params.begin(); it != params.end();) {
      if (occurrences(*it) == 0) {
        ++s.q_exp;
        it = params.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    for (auto it = neq.begin(); it != neq.end(); ++it) {
      std::optional<Var> pick;
      for (const Var& v : it->vars()) {
        if (!params.contains(v) || occurrences(v) != 1) continue;
        auto d = it->linear_decompose(v);
        if (d && d->first.is_constant()) {
          pick = v;
          break;
        }
      }
      if (pick) {
        ++s.qm1_exp;
        params.erase(*pick);
        neq.erase(it);
        progress = true;
        break;
      }
    }
  }
  s.rest_params.assign(params.begin(), params.end());
  s.rest_neq = std::move(neq);
  return s;
}

namespace {

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Integer ipow(const Integer& b, int e) {
  Integer r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// A polynomial over F_q compiled against a dense variable numbering.
struct ModPoly {
  struct T {
    std::uint64_t c;
    std::vector<std::pair<int, std::uint32_t>> pw;
  };
  std::vector<T> terms;

  std::uint64_t eval(const std::vector<std::uint64_t>& x, std::uint64_t q) const {
    std::uint64_t acc = 0;
    for (const auto& t : terms) {
      std::uint64_t v = t.c;
      for (auto [i, e] : t.pw)
        for (std::uint32_t k = 0; k < e; ++k) v = v * x[i] % q;
      acc = (acc + v) % q;
    }
    return acc;
  }
};

ModPoly compile(const MultiPoly& p, const std::map<Var, int>& index, std::uint64_t q) {
  ModPoly m;
  for (const auto& t : p.terms()) {
    if (t.coeff.get_den() != 1) throw std::logic_error("non-integral inequation");
    ModPoly::T mt;
    mt.c = reduce_mod(Integer(t.coeff.get_num()), q);
    for (const auto& [v, e] : t.mono.factors()) mt.pw.emplace_back(index.at(v), e);
    m.terms.push_back(std::move(mt));
  }
  return m;
}

}  // namespace

Integer point_count(const Cell& c, std::uint64_t q, std::uint64_t guard) {
  if (!is_prime(q)) throw std::domain_error("q must be prime");
  const CellShape s = cell_shape(c);
  Integer total = ipow(Integer(static_cast<unsigned long>(q)), s.q_exp) *
                  ipow(Integer(static_cast<unsigned long>(q - 1)), s.qm1_exp);
  if (s.closed()) return total;

  const std::size_t k = s.rest_params.size();
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (space > guard / q) throw guard_exceeded("cell enumeration exceeds the guard");
    space *= q;
  }
  std::map<Var, int> index;
  for (std::size_t i = 0; i < k; ++i) index[s.rest_params[i]] = static_cast<int>(i);
  std::vector<ModPoly> neq;
  for (const auto& p : s.rest_neq) neq.push_back(compile(p, index, q));

  std::vector<std::uint64_t> x(k, 0);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < space; ++n) {
    std::uint64_t r = n;
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = r % q;
      r /= q;
    }
    bool ok = true;
    for (const auto& p : neq)
      if (p.eval(x, q) == 0) {
        ok = false;
        break;
      }
    hits += ok;
  }
  return total * Integer(static_cast<unsigned long>(hits));
}

void check_prime(const Forest& f, std::uint64_t q) {
  if (f.partial) throw std::invalid_argument("partial forest: counts need all coordinates");
  if (!is_prime(q)) throw std::domain_error(std::to_string(q) + " is not prime");
  if (!bad_primes(f.type).is_good(q))
    throw std::domain_error(std::to_string(q) + " is a bad prime for " + f.type.name());
  for (int p : f.stats.critical_primes)
    if (static_cast<std::uint64_t>(p) == q)
      throw std::domain_error("the forest divides by " + std::to_string(q) +
                              "; its counts are not valid in that characteristic");
}

Integer class_number(const Forest& f, std::uint64_t q, std::uint64_t guard) {
  check_prime(f, q);
  Integer sum = 0;
  for (const auto& c : f.cells) sum += point_count(c, q, guard);
  return sum;
}

Integer CountPolynomial::eval(const Integer& t) const {
  Integer acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::string CountPolynomial::to_string() const {
  if (coeffs.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Integer& c = coeffs[i];
    if (c == 0) continue;
    const Integer a = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const bool show = a != 1 || i == 0;
    if (show) out += a.get_str();
    if (i > 0) {
      if (show) out += "*";
      out += "t";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

CountPolynomial class_polynomial(const Forest& f) {
  if (f.partial) throw std::invalid_argument("partial forest: counts need all coordinates");
  CountPolynomial poly;
  for (const auto& c : f.cells) {
    const CellShape s = cell_shape(c);
    if (!s.closed())
      throw non_closed_form_error("cell " + format_label(c.label) + " is not of the form t^a (t-1)^b");
    // t^a (t-1)^b
    std::vector<Integer> term(1, 1);
    for (int i = 0; i < s.qm1_exp; ++i) {
      std::vector<Integer> next(term.size() + 1, 0);
      for (std::size_t k = 0; k < term.size(); ++k) {
        next[k + 1] += term[k];
        next[k] -= term[k];
      }
      term = std::move(next);
    }
    term.insert(term.begin(), static_cast<std::size_t>(s.q_exp), Integer(0));
    if (poly.coeffs.size() < term.size()) poly.coeffs.resize(term.size(), 0);
    for (std::size_t k = 0; k < term.size(); ++k) poly.coeffs[k] += term[k];
    poly.exact = poly.exact && !c.relaxed;
  }
  while (!poly.coeffs.empty() && poly.coeffs.back() == 0) poly.coeffs.pop_back();
  return poly;
}

}  // namespace borelmod

#include "borelmod/cases.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

namespace borelmod {

// ------------------------------------------------------------ small helpers

Budget Budget::small() { return Budget{8, 400, 16, 4}; }

void Budget::validate() const {
  if (max_branches <= 0 || max_poly_terms == 0 || max_poly_degree == 0 || max_resolve_steps <= 0)
    throw std::invalid_argument("budget fields must all be positive");
}

std::string to_string(Strategy s) { return s == Strategy::Lazy ? "lazy" : "eager"; }
std::string to_string(GroupShape s) { return s == GroupShape::Product ? "product" : "linear"; }

Strategy parse_strategy(std::string_view s) {
  if (s == "lazy") return Strategy::Lazy;
  if (s == "eager") return Strategy::Eager;
  throw std::invalid_argument("strategy must be lazy or eager");
}

GroupShape parse_shape(std::string_view s) {
  if (s == "product") return GroupShape::Product;
  if (s == "linear") return GroupShape::Linear;
  throw std::invalid_argument("shape must be product or linear");
}

int Case::dim() const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(),
                                        [](const Slot& s) { return s.kind == SlotKind::Param; }));
}

void LiftStats::merge(const LiftStats& o) {
  pruned += o.pruned;
  budget_relaxations += o.budget_relaxations;
  unresolved += o.unresolved;
  critical_primes.insert(o.critical_primes.begin(), o.critical_primes.end());
}

std::string format_label(const BranchLabel& l) {
  std::string s;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(l[i]);
  }
  return s;
}

BranchLabel parse_label(std::string_view s) {
  BranchLabel l;
  if (s.empty()) return l;
  std::size_t start = 0;
  for (;;) {
    const auto dot = s.find('.', start);
    const auto part = s.substr(start, dot == std::string_view::npos ? s.size() - start : dot - start);
    if (part.empty() || part.size() > 5) throw std::invalid_argument("bad branch label");
    unsigned v = 0;
    for (char ch : part) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("bad branch label");
      v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    if (v > 65535) throw std::invalid_argument("bad branch label");
    l.push_back(static_cast<std::uint16_t>(v));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return l;
}

std::vector<MultiPoly> representative(const Case& c) {
  std::vector<MultiPoly> x(c.slots.size());
  for (std::size_t k = 0; k < c.slots.size(); ++k)
    if (c.slots[k].kind == SlotKind::Param || c.slots[k].kind == SlotKind::Derived)
      x[k] = c.slots[k].value;
  return x;
}

namespace {

void record_primes(const Integer& z, LiftStats* stats) {
  if (!stats) return;
  Integer x = abs(z);
  for (unsigned long p = 2; x > 1 && p < 100000; ++p) {
    if (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
      stats->critical_primes.insert(static_cast<int>(p));
      while (mpz_divisible_ui_p(x.get_mpz_t(), p)) x /= p;
    }
  }
  if (x > 1 && x.fits_sint_p()) stats->critical_primes.insert(static_cast<int>(x.get_si()));
}

void record_primes(const Rational& c, LiftStats* stats) {
  record_primes(Integer(c.get_num()), stats);
  record_primes(Integer(c.get_den()), stats);
}

void check_caps(const MultiPoly& p, const Budget& b) {
  if (p.size() > b.max_poly_terms || p.total_degree() > b.max_poly_degree)
    throw budget_exceeded("polynomial exceeds budget caps");
}

bool is_member(const std::vector<MultiPoly>& set, const MultiPoly& p) {
  return std::binary_search(set.begin(), set.end(), p);
}

void insert_sorted(std::vector<MultiPoly>& set, MultiPoly p) {
  auto it = std::lower_bound(set.begin(), set.end(), p);
  if (it == set.end() || !(*it == p)) set.insert(it, std::move(p));
}

// Param-only part of the monomial gcd.
Monomial param_gcd(const MultiPoly& p) {
  Monomial g = p.monomial_gcd();
  Monomial out;
  for (const auto& [v, e] : g.factors())
    if (v.is_param()) out = out * Monomial(v, e);
  return out;
}

// Divides out members of the set until nothing divides; result primitive.
MultiPoly reduce_by(const MultiPoly& p, const std::vector<MultiPoly>& set) {
  MultiPoly r = p.primitive();
  bool progress = true;
  while (progress && !r.is_constant()) {
    progress = false;
    for (const auto& d : set) {
      if (d.is_constant() || d.total_degree() > r.total_degree()) continue;
      if (auto q = r.divide_exact(d)) {
        r = q->primitive();
        progress = true;
        break;
      }
    }
  }
  return r;
}

// Removes the content and every factor known to be nonzero on the case.
MultiPoly strip(const MultiPoly& p, const std::vector<MultiPoly>& set, LiftStats* stats) {
  if (p.is_zero()) return p;
  record_primes(p.content(), stats);
  Monomial known;
  const Monomial g = param_gcd(p);
  for (const auto& [v, e] : g.factors())
    if (is_member(set, MultiPoly(v))) known = known * Monomial(v, e);
  MultiPoly r = (known.is_one() ? p : p.divide_monomial(known)).primitive();
  for (const auto& d : set) {
    if (d.size() < 2) continue;
    while (r.total_degree() >= d.total_degree()) {
      auto q = r.divide_exact(d);
      if (!q) break;
      r = q->primitive();
    }
  }
  return r;
}

}  // namespace

namespace neq {

bool add(std::vector<MultiPoly>& set, const MultiPoly& p) {
  if (p.is_zero()) return false;
  if (p.is_constant()) return true;
  const Monomial m = param_gcd(p);
  for (const auto& [v, e] : m.factors()) insert_sorted(set, MultiPoly(v));
  MultiPoly r = (m.is_one() ? p : p.divide_monomial(m)).primitive();
  if (!r.is_constant()) insert_sorted(set, std::move(r));
  return true;
}

bool known_nonzero(const MultiPoly& p, const std::vector<MultiPoly>& set) {
  if (p.is_zero()) return false;
  return unknown_factors(p, set).empty();
}

std::vector<MultiPoly> unknown_factors(const MultiPoly& p, const std::vector<MultiPoly>& set) {
  std::vector<MultiPoly> out;
  if (p.is_zero()) return {MultiPoly(0)};
  const Monomial m = param_gcd(p);
  for (const auto& [v, e] : m.factors())
    if (!is_member(set, MultiPoly(v))) out.emplace_back(v);
  MultiPoly r = reduce_by(m.is_one() ? p : p.divide_monomial(m), set);
  if (!r.is_constant()) out.push_back(std::move(r));
  return out;
}

}  // namespace neq

// --------------------------------------------------------- stabilizer system

StabilizerSystem stabilizer_system(const Case& c, const ModuleWithFiltration& mod,
                                   const RunOptions& opt, LiftStats* stats) {
  const int N = mod.dim();
  const int s = c.level;
  if (s >= N) throw std::invalid_argument("stabilizer_system: case already complete");
  const auto& order = mod.order();
  const Budget& budget = opt.budget;

  const std::vector<MultiPoly> x = representative(c);
  std::vector<char> relevant(N, 0);
  for (int k = 0; k <= s; ++k) relevant[order[k]] = 1;

  // g.x on the coordinates processed so far plus the next one. Other rows
  // cannot feed these by triangularity.
  std::vector<MultiPoly> y = x;
  if (opt.shape == GroupShape::Product) {
    std::vector<MultiPoly> delta(N);
    std::vector<int> touched;
    for (int j = N - 1; j >= 0; --j) {
      const Var t = Var::group(static_cast<std::uint32_t>(j + 1));
      touched.clear();
      for (int m = 1; m <= mod.max_power(j); ++m) {
        const Monomial tm(t, static_cast<std::uint32_t>(m));
        for (const auto& e : mod.exp_coefficient(j, m).entries()) {
          if (!relevant[e.row] || y[e.col].is_zero()) continue;
          if (delta[e.row].is_zero()) touched.push_back(e.row);
          delta[e.row] += y[e.col].times(tm, Rational(e.value));
        }
      }
      for (int r : touched) {
        y[r] += delta[r];
        delta[r] = MultiPoly();
        check_caps(y[r], budget);
      }
    }
  } else {
    for (int j = 0; j < N; ++j) {
      const Monomial tm(Var::group(static_cast<std::uint32_t>(j + 1)));
      for (const auto& e : mod.exp_coefficient(j, 1).entries())
        if (relevant[e.row] && !x[e.col].is_zero()) y[e.row] += x[e.col].times(tm, Rational(e.value));
    }
    for (int k = 0; k <= s; ++k) check_caps(y[order[k]], budget);
  }

  StabilizerSystem sys;
  std::vector<MultiPoly> eqs(s);
  for (int k = 0; k < s; ++k) eqs[k] = y[order[k]] - x[order[k]];
  sys.target = y[order[s]];

  std::set<Var> gone;
  auto apply_to_rest = [&](int k, auto&& fn) {
    for (int r = k + 1; r < s; ++r) {
      eqs[r] = strip(fn(eqs[r]), c.neq, stats);
      check_caps(eqs[r], budget);
    }
    sys.target = strip(fn(sys.target), c.neq, stats);
    check_caps(sys.target, budget);
  };

  for (int k = 0; k < s; ++k) {
    MultiPoly e = strip(eqs[k], c.neq, stats);
    const Slot& slot = c.slots[order[k]];
    if (slot.pivot && !gone.contains(*slot.pivot)) {
      const Var tp = *slot.pivot;
      auto dec = e.linear_decompose(tp);
      if (dec && !dec->first.is_zero() && !dec->first.contains_family(VarFamily::Group)) {
        const MultiPoly kappa = dec->first;
        const MultiPoly num = -dec->second;
        record_primes(kappa.content(), stats);
        if (kappa.is_constant()) {
          const MultiPoly value = num.scaled(1 / kappa.constant_term());
          apply_to_rest(k, [&](const MultiPoly& p) { return p.substitute(tp, value); });
        } else {
          apply_to_rest(k, [&](const MultiPoly& p) { return p.substitute_rational(tp, num, kappa).first; });
        }
        gone.insert(tp);
        sys.residual.emplace_back();
        continue;
      }
    }
    if (e.is_zero()) {
      sys.residual.emplace_back();
      continue;
    }
    // No usable pivot: restrict to the part of the stabilizer where every
    // group var of this equation vanishes. That is still inside the true
    // stabilizer, so later normalizations stay valid.
    sys.unresolved = true;
    bool has_group = false;
    for (const Var& v : e.vars()) {
      if (!v.is_group()) continue;
      has_group = true;
      gone.insert(v);
      apply_to_rest(k, [&](const MultiPoly& p) { return p.substitute(v, MultiPoly()); });
    }
    if (!has_group) sys.side_constraints.push_back({ConstraintKind::Eq, e});
    sys.residual.push_back(e);
    if (stats) ++stats->unresolved;
  }

  for (int j = 1; j <= N; ++j) {
    const Var v = Var::group(static_cast<std::uint32_t>(j));
    if (!gone.contains(v)) sys.free_vars.push_back(v);
  }
  return sys;
}

// ------------------------------------------------------------------ resolve

namespace {

struct ResolveState {
  Case c;
  MultiPoly f;
  std::set<Var> skip;
  int steps = 0;
  bool relaxed = false;
  std::vector<Constraint> added;
};

enum class Elim { Ok, Empty, Failed };

class Resolver {
 public:
  Resolver(const ModuleWithFiltration& mod, const RunOptions& opt, const std::vector<Var>& free_vars,
           LiftStats* stats)
      : mod_(mod), opt_(opt), free_(free_vars.begin(), free_vars.end()), stats_(stats) {}

  std::vector<Branch> run(ResolveState st) {
    explore(std::move(st));
    return std::move(out_);
  }

 private:
  void explore(ResolveState st) {
    for (;;) {
      st.f = strip(st.f, st.c.neq, stats_);
      check_caps(st.f, opt_.budget);
      if (st.f.is_zero()) return emit_param(std::move(st));

      // Highest free group var occurring linearly with a t-free coefficient.
      std::optional<Var> pick;
      std::pair<MultiPoly, MultiPoly> dec;
      const auto vars = st.f.vars();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (!it->is_group() || !free_.contains(*it) || st.skip.contains(*it)) continue;
        auto d = st.f.linear_decompose(*it);
        if (!d || d->first.contains_family(VarFamily::Group)) continue;
        pick = *it;
        dec = std::move(*d);
        break;
      }
      if (!pick) {
        // The action is nonzero but no linear pivot exists: keep the
        // coordinate as a parameter, which can only over-cover.
        if (stats_) ++stats_->unresolved;
        st.relaxed = true;
        return emit_param(std::move(st));
      }
      const MultiPoly& kappa = dec.first;
      if (neq::known_nonzero(kappa, st.c.neq)) return emit_pivot(std::move(st), *pick, dec);

      const auto factors = neq::unknown_factors(kappa, st.c.neq);
      const int needed = static_cast<int>(factors.size()) + 1;
      if (st.steps >= opt_.budget.max_resolve_steps ||
          leaves_ + pending_ + needed > opt_.budget.max_branches) {
        if (stats_) ++stats_->budget_relaxations;
        st.relaxed = true;
        return emit_param(std::move(st));
      }
      ++st.steps;
      pending_ += needed - 1;

      ResolveState a = st;
      for (const auto& fct : factors) {
        neq::add(a.c.neq, fct);
        a.added.push_back({ConstraintKind::Neq, fct});
      }
      emit_pivot(std::move(a), *pick, dec);

      for (std::size_t i = 0; i < factors.size(); ++i) {
        --pending_;
        ResolveState b = st;
        for (std::size_t k = 0; k < i; ++k) {
          neq::add(b.c.neq, factors[k]);
          b.added.push_back({ConstraintKind::Neq, factors[k]});
        }
        b.added.push_back({ConstraintKind::Eq, factors[i]});
        switch (eliminate(b, factors[i])) {
          case Elim::Empty:
            if (stats_) ++stats_->pruned;
            continue;
          case Elim::Failed:
            if (stats_) ++stats_->unresolved;
            b.relaxed = true;
            b.skip.insert(*pick);
            break;
          case Elim::Ok:
            break;
        }
        explore(std::move(b));
      }
      return;
    }
  }

  // Uses factor == 0 to remove one parameter with a constant coefficient.
  Elim eliminate(ResolveState& st, const MultiPoly& factor) {
    std::optional<Var> best;
    MultiPoly value;
    for (const Var& v : factor.vars()) {
      if (!v.is_param()) continue;
      auto d = factor.linear_decompose(v);
      if (!d || !d->first.is_constant() || d->first.is_zero()) continue;
      if (best && mod_.position(static_cast<int>(v.index) - 1) <
                      mod_.position(static_cast<int>(best->index) - 1))
        continue;
      best = v;
      record_primes(d->first.constant_term(), stats_);
      value = (-d->second).scaled(1 / d->first.constant_term());
    }
    if (!best) return Elim::Failed;

    Case& c = st.c;
    for (auto& slot : c.slots) {
      if (slot.kind == SlotKind::Param && slot.value == MultiPoly(*best)) {
        slot.value = value;
        slot.kind = value.is_zero() ? SlotKind::Zero : SlotKind::Derived;
      } else if (slot.kind == SlotKind::Derived) {
        slot.value = slot.value.substitute(*best, value);
        if (slot.value.is_zero()) slot.kind = SlotKind::Zero;
      }
    }
    std::vector<MultiPoly> fresh;
    for (const auto& p : c.neq)
      if (!neq::add(fresh, p.substitute(*best, value))) return Elim::Empty;
    c.neq = std::move(fresh);
    st.f = st.f.substitute(*best, value);
    return Elim::Ok;
  }

  void emit_pivot(ResolveState st, Var t, const std::pair<MultiPoly, MultiPoly>& dec) {
    record_primes(dec.first.content(), stats_);
    Branch b;
    b.outcome = Outcome::Normalized;
    b.pivot = t;
    b.num = -dec.second;
    b.den = dec.first;
    b.added_constraints = std::move(st.added);
    b.consumed_budget = st.steps;
    b.relaxed = st.relaxed;
    b.state = std::move(st.c);
    out_.push_back(std::move(b));
    ++leaves_;
  }

  void emit_param(ResolveState st) {
    const int coord = mod_.order()[st.c.level];
    const Var a = Var::param(static_cast<std::uint32_t>(coord + 1));
    if (opt_.strategy == Strategy::Eager) {
      ResolveState z = st;
      neq::add(st.c.neq, MultiPoly(a));
      st.added.push_back({ConstraintKind::Neq, MultiPoly(a)});
      push_param(std::move(st));
      z.added.push_back({ConstraintKind::Eq, MultiPoly(a)});
      Branch b;
      b.outcome = Outcome::Normalized;  // zero slot without a pivot
      b.added_constraints = std::move(z.added);
      b.consumed_budget = z.steps;
      b.relaxed = z.relaxed;
      b.state = std::move(z.c);
      out_.push_back(std::move(b));
      ++leaves_;
      return;
    }
    push_param(std::move(st));
  }

  void push_param(ResolveState st) {
    Branch b;
    b.outcome = Outcome::NewParam;
    b.added_constraints = std::move(st.added);
    b.consumed_budget = st.steps;
    b.relaxed = st.relaxed;
    b.state = std::move(st.c);
    out_.push_back(std::move(b));
    ++leaves_;
  }

  const ModuleWithFiltration& mod_;
  const RunOptions& opt_;
  std::set<Var> free_;
  LiftStats* stats_;
  std::vector<Branch> out_;
  int leaves_ = 0;
  int pending_ = 0;
};

}  // namespace

std::vector<Branch> resolve(const MultiPoly& target, const std::vector<Var>& free_vars, const Case& c,
                            const ModuleWithFiltration& mod, const RunOptions& opt, LiftStats* stats) {
  ResolveState st;
  st.c = c;
  st.f = target;
  return Resolver(mod, opt, free_vars, stats).run(std::move(st));
}

// --------------------------------------------------------------------- lift

Case root_case(const ModuleWithFiltration& mod) {
  Case c;
  c.slots.resize(mod.dim());
  return c;
}

std::vector<Case> lift(const Case& c, const ModuleWithFiltration& mod, const RunOptions& opt,
                       LiftStats* stats) {
  if (c.level >= mod.dim()) throw std::invalid_argument("lift: case already complete");
  const int coord = mod.order()[c.level];
  const Var a = Var::param(static_cast<std::uint32_t>(coord + 1));

  std::vector<Branch> branches;
  LiftStats local;
  bool over_budget = false;
  try {
    StabilizerSystem sys = stabilizer_system(c, mod, opt, &local);
    Case base = c;
    if (sys.unresolved) base.relaxed = true;
    branches = resolve(sys.target, sys.free_vars, base, mod, opt, &local);
  } catch (const budget_exceeded&) {
    over_budget = true;
  }

  std::vector<Case> children;
  if (over_budget) {
    // Polynomials outgrew the caps: do not normalize this coordinate.
    LiftStats relaxed_stats;
    relaxed_stats.budget_relaxations = 1;
    if (stats) stats->merge(relaxed_stats);
    Case child = c;
    child.slots[coord] = Slot{SlotKind::Param, MultiPoly(a), std::nullopt};
    child.relaxed = true;
    child.level += 1;
    child.label.push_back(0);
    children.push_back(std::move(child));
    return children;
  }
  if (stats) stats->merge(local);

  children.reserve(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    Branch& b = branches[i];
    Case child = std::move(b.state);
    if (b.outcome == Outcome::NewParam) {
      child.slots[coord] = Slot{SlotKind::Param, MultiPoly(a), std::nullopt};
    } else {
      child.slots[coord] = Slot{SlotKind::Zero, MultiPoly(), b.pivot};
    }
    child.relaxed = child.relaxed || b.relaxed;
    child.level = c.level + 1;
    child.label = c.label;
    child.label.push_back(static_cast<std::uint16_t>(i));
    children.push_back(std::move(child));
  }
  return children;
}

// ---------------------------------------------------------------------- run

namespace {

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  for (std::size_t w = 0; w < count; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Forest run(const ModuleWithFiltration& mod, const RunOptions& opt) {
  opt.budget.validate();
  const int N = mod.dim();
  const int levels = opt.max_level ? std::clamp(*opt.max_level, 0, N) : N;

  Forest forest;
  forest.type = mod.roots().type();
  forest.mode = mod.mode();
  forest.budget = opt.budget;
  forest.strategy = opt.strategy;
  forest.shape = opt.shape;
  forest.levels = levels;
  forest.partial = levels < N;

  std::vector<Case> frontier{root_case(mod)};
  LiftStats total;
  for (int level = 0; level < levels; ++level) {
    std::vector<std::vector<Case>> next(frontier.size());
    std::vector<LiftStats> stats(frontier.size());
    parallel_for(frontier.size(), opt.workers, [&](std::size_t i) {
      if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
        throw deadline_exceeded("time cap reached at level " + std::to_string(level));
      next[i] = lift(frontier[i], mod, opt, &stats[i]);
    });
    std::vector<Case> merged;
    for (std::size_t i = 0; i < next.size(); ++i) {
      total.merge(stats[i]);
      for (auto& c : next[i]) merged.push_back(std::move(c));
    }
    frontier = std::move(merged);
  }

  forest.cells.reserve(frontier.size());
  for (auto& c : frontier) {
    Cell cell;
    cell.dim = c.dim();
    cell.label = std::move(c.label);
    cell.slots = std::move(c.slots);
    cell.neq = std::move(c.neq);
    cell.relaxed = c.relaxed;
    forest.stats.relaxed_cells += cell.relaxed ? 1 : 0;
    forest.stats.max_dim = std::max(forest.stats.max_dim, cell.dim);
    forest.cells.push_back(std::move(cell));
  }
  forest.stats.cells = forest.cells.size();
  forest.stats.pruned = total.pruned;
  forest.stats.budget_relaxations = total.budget_relaxations;
  forest.stats.unresolved_conditions = total.unresolved;
  forest.stats.critical_primes.assign(total.critical_primes.begin(), total.critical_primes.end());
  return forest;
}

}  // namespace borelmod

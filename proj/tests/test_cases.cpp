#include <doctest.h>

#include "borelmod/cases.hpp"
#include "borelmod/count.hpp"
#include "borelmod/forest_io.hpp"
#include "support.hpp"

using namespace borelmod;

namespace {

struct Setup {
  RootSystem rs;
  StructureConstants sc;
  ModuleWithFiltration mod;
  Setup(const char* t, Mode m) : rs(CartanType::parse(t)), sc(rs), mod(sc, m) {}
};

MultiPoly P(const char* s) { return MultiPoly::parse(s); }

std::vector<std::string> pattern(const Cell& c) {
  std::vector<std::string> out;
  for (const auto& s : c.slots) out.push_back(slot_to_string(s));
  return out;
}

std::vector<Var> all_t(int n) {
  std::vector<Var> v;
  for (int j = 1; j <= n; ++j) v.push_back(Var::group(j));
  return v;
}

}  // namespace

TEST_CASE("neq bookkeeping") {
  std::vector<MultiPoly> set;
  CHECK(neq::add(set, P("3*a1^2*a2*(a3 - a4)")));
  CHECK(set.size() == 3);
  CHECK(neq::known_nonzero(P("a1*a2"), set));
  CHECK(neq::known_nonzero(P("-2*a1*(a4 - a3)^2"), set));
  CHECK_FALSE(neq::known_nonzero(P("a1*a5"), set));
  CHECK(neq::unknown_factors(P("a1*a5*(a3 - a4)*(a2 + a5)"), set) == std::vector<MultiPoly>{P("a5"), P("a2 + a5")});
  CHECK_FALSE(neq::add(set, MultiPoly()));
  CHECK(neq::add(set, P("7")));
  CHECK(set.size() == 3);
}

TEST_CASE("labels") {
  CHECK(format_label({0, 2, 13}) == "0.2.13");
  CHECK(parse_label("0.2.13") == BranchLabel{0, 2, 13});
  CHECK_THROWS(parse_label("0..1"));
  CHECK_THROWS(parse_label("0.x"));
  CHECK_THROWS(parse_label("99999"));
}

TEST_CASE("resolve: constant coefficient gives a single normalized branch") {
  Setup s("A2", Mode::Adjoint);
  Case c = root_case(s.mod);
  c.level = 2;
  const auto b = resolve(P("3*t1"), all_t(3), c, s.mod, RunOptions{});
  REQUIRE(b.size() == 1);
  CHECK(b[0].outcome == Outcome::Normalized);
  CHECK(b[0].pivot == Var::group(1));
  CHECK(b[0].added_constraints.empty());
}

TEST_CASE("resolve: a1*t2 splits on a1") {
  Setup s("A2", Mode::Adjoint);
  Case c = root_case(s.mod);
  c.slots[0] = Slot{SlotKind::Param, P("a1"), std::nullopt};
  c.slots[1] = Slot{SlotKind::Param, P("a2"), std::nullopt};
  c.level = 2;
  const auto b = resolve(P("a1*t2"), all_t(3), c, s.mod, RunOptions{});
  REQUIRE(b.size() == 2);
  CHECK(b[0].outcome == Outcome::Normalized);
  CHECK(b[0].state.neq == std::vector<MultiPoly>{P("a1")});
  CHECK(b[1].outcome == Outcome::NewParam);
  CHECK(b[1].state.slots[0].kind == SlotKind::Zero);
  CHECK(b[1].state.neq.empty());
}

TEST_CASE("resolve: no group var means a new parameter") {
  Setup s("A2", Mode::Adjoint);
  Case c = root_case(s.mod);
  const auto b = resolve(MultiPoly(), all_t(3), c, s.mod, RunOptions{});
  REQUIRE(b.size() == 1);
  CHECK(b[0].outcome == Outcome::NewParam);
}

TEST_CASE("resolve: eager splits new parameters") {
  Setup s("A2", Mode::Adjoint);
  RunOptions opt;
  opt.strategy = Strategy::Eager;
  const auto b = resolve(MultiPoly(), all_t(3), root_case(s.mod), s.mod, opt);
  REQUIRE(b.size() == 2);
  CHECK(b[0].outcome == Outcome::NewParam);
  CHECK(b[0].state.neq == std::vector<MultiPoly>{P("a1")});
  CHECK(b[1].outcome == Outcome::Normalized);
  CHECK_FALSE(b[1].pivot);
}

TEST_CASE("stabilizer system") {
  Setup s("A2", Mode::Adjoint);
  const Case root = root_case(s.mod);
  const auto sys0 = stabilizer_system(root, s.mod, RunOptions{});
  CHECK(sys0.free_vars.size() == 3);
  CHECK(sys0.target.is_zero());

  Case c = root;
  c.slots[0] = Slot{SlotKind::Param, P("a1"), std::nullopt};
  c.slots[1] = Slot{SlotKind::Param, P("a2"), std::nullopt};
  c.level = 2;
  const auto sys = stabilizer_system(c, s.mod, RunOptions{});
  CHECK(sys.free_vars.size() == 3);
  CHECK_FALSE(sys.unresolved);
  CHECK((sys.target == P("a2*t1 - a1*t2") || sys.target == P("a1*t2 - a2*t1")));
}

TEST_CASE("A1 and A2 forests") {
  {
    Setup s("A1", Mode::Adjoint);
    const Forest f = run(s.mod, RunOptions{});
    REQUIRE(f.cells.size() == 1);
    CHECK(pattern(f.cells[0]) == std::vector<std::string>{"a1"});
    CHECK(f.cells[0].neq.empty());
  }
  Setup s("A2", Mode::Adjoint);
  const Forest f = run(s.mod, RunOptions{});
  REQUIRE(f.cells.size() == 3);
  CHECK(pattern(f.cells[0]) == std::vector<std::string>{"a1", "a2", "0"});
  CHECK(f.cells[0].neq == std::vector<MultiPoly>{P("a1")});
  CHECK(pattern(f.cells[1]) == std::vector<std::string>{"0", "a2", "0"});
  CHECK(f.cells[1].neq == std::vector<MultiPoly>{P("a2")});
  CHECK(pattern(f.cells[2]) == std::vector<std::string>{"0", "0", "a3"});
  CHECK(f.cells[2].neq.empty());
  CHECK(f.stats.max_dim == 2);
  CHECK(f.stats.relaxed_cells == 0);
}

TEST_CASE("G2 adjoint forest: unrelaxed, max dim 3") {
  Setup s("G2", Mode::Adjoint);
  const Forest f = run(s.mod, RunOptions{});
  CHECK(f.stats.relaxed_cells == 0);
  CHECK(f.stats.max_dim == 3);
}

TEST_CASE("labels are distinct and sorted; processed slots are never pending") {
  for (const auto* t : {"A3", "B3", "G2"}) {
    for (Mode m : {Mode::Adjoint, Mode::Coadjoint}) {
      Setup s(t, m);
      const Forest f = run(s.mod, RunOptions{});
      for (std::size_t i = 1; i < f.cells.size(); ++i) CHECK(f.cells[i - 1].label < f.cells[i].label);
      for (const auto& c : f.cells) {
        for (const auto& slot : c.slots) CHECK(slot.kind != SlotKind::Pending);
        for (const auto& n : c.neq) CHECK_FALSE(n.is_constant());
        CHECK(c.dim <= s.mod.dim());
      }
    }
  }
}

TEST_CASE("partial runs") {
  Setup s("B3", Mode::Coadjoint);
  RunOptions opt;
  opt.max_level = 4;
  const Forest f = run(s.mod, opt);
  CHECK(f.partial);
  CHECK(f.levels == 4);
  for (const auto& c : f.cells)
    for (int k = 0; k < s.mod.dim(); ++k)
      CHECK((c.slots[k].kind == SlotKind::Pending) == (s.mod.position(k) >= 4));
}

TEST_CASE("tiny budgets relax but complete") {
  Setup s("B2", Mode::Adjoint);
  RunOptions opt;
  opt.budget.max_poly_degree = 1;
  const Forest f = run(s.mod, opt);
  CHECK(f.stats.relaxed_cells > 0);
  CHECK(f.stats.budget_relaxations > 0);
  const Forest exact = run(s.mod, RunOptions{});
  CHECK(f.stats.max_dim >= exact.stats.max_dim);
}

TEST_CASE("invalid budgets are rejected") {
  Setup s("A2", Mode::Adjoint);
  RunOptions opt;
  opt.budget.max_resolve_steps = 0;
  CHECK_THROWS_AS(run(s.mod, opt), std::invalid_argument);
}

TEST_CASE("worker count does not change the forest") {
  for (const auto* t : {"A3", "B3"}) {
    Setup s(t, Mode::Adjoint);
    RunOptions one, many;
    many.workers = 4;
    CHECK(forest_to_json(run(s.mod, one)) == forest_to_json(run(s.mod, many)));
  }
}

TEST_CASE("eager and lazy agree on counts") {
  for (const auto* t : {"A3", "B2", "G2"}) {
    Setup s(t, Mode::Coadjoint);
    RunOptions eager;
    eager.strategy = Strategy::Eager;
    const Forest a = run(s.mod, RunOptions{});
    const Forest b = run(s.mod, eager);
    CHECK(b.cells.size() >= a.cells.size());
    CHECK(class_polynomial(a).coeffs == class_polynomial(b).coeffs);
  }
}

TEST_CASE("deadline") {
  Setup s("B3", Mode::Adjoint);
  RunOptions opt;
  opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(run(s.mod, opt), deadline_exceeded);
}

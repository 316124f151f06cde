#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "borelmod/action.hpp"
#include "borelmod/poly.hpp"

namespace borelmod {

// Deterministic stand-in for a wall-clock limit on the resolving step.
struct Budget {
  int max_branches = 256;          // leaves produced by one lift step
  std::size_t max_poly_terms = 20000;
  std::uint32_t max_poly_degree = 64;
  int max_resolve_steps = 64;      // case splits along one resolve path

  static Budget small();
  void validate() const;  // all fields positive
  bool operator==(const Budget&) const = default;
};

// Lazy introduces a parameter without splitting on it; eager also splits
// every new parameter into zero / nonzero.
enum class Strategy { Lazy, Eager };

// How a general element of U is written. Product is the ordered product of
// all root subgroups x_1(t_1)...x_N(t_N). Linear keeps only the first order
// term 1 + sum t_j ad e_j, i.e. it works with Lie algebra centralizers.
enum class GroupShape { Product, Linear };

std::string to_string(Strategy s);
std::string to_string(GroupShape s);
Strategy parse_strategy(std::string_view s);
GroupShape parse_shape(std::string_view s);

enum class SlotKind : std::uint8_t { Pending, Zero, Param, Derived };

struct Slot {
  SlotKind kind = SlotKind::Pending;
  MultiPoly value;           // 0, a<k>, or an expression in earlier parameters
  std::optional<Var> pivot;  // group var that normalized a Zero slot
};

using BranchLabel = std::vector<std::uint16_t>;

// A locally closed set of representatives, lifted through the first `level`
// coordinates in processing order. Slots are indexed by coordinate. Only
// inequations survive; equations are eliminated or branched on.
struct Case {
  int level = 0;
  std::vector<Slot> slots;
  std::vector<MultiPoly> neq;  // normalized factors, sorted, unique
  bool relaxed = false;
  BranchLabel label;

  int dim() const;  // number of Param slots
};

// A completed (or, in partial runs, final-level) case.
struct Cell {
  BranchLabel label;
  std::vector<Slot> slots;
  std::vector<MultiPoly> neq;
  bool relaxed = false;
  int dim = 0;
};

struct ForestStats {
  std::size_t cells = 0;
  std::size_t relaxed_cells = 0;
  int max_dim = 0;
  std::size_t pruned = 0;                 // empty branches discarded
  std::size_t budget_relaxations = 0;     // conditions dropped for budget
  std::size_t unresolved_conditions = 0;  // conditions no linear pivot could resolve
  std::vector<int> critical_primes;       // primes the symbolic decisions divided by

  bool operator==(const ForestStats&) const = default;
};

struct Forest {
  CartanType type;
  Mode mode = Mode::Adjoint;
  Budget budget;
  Strategy strategy = Strategy::Lazy;
  GroupShape shape = GroupShape::Product;
  int levels = 0;        // coordinates processed
  bool partial = false;  // levels < N
  std::vector<Cell> cells;
  ForestStats stats;
};

struct RunOptions {
  Budget budget;
  Strategy strategy = Strategy::Lazy;
  GroupShape shape = GroupShape::Product;
  int workers = 1;
  std::optional<int> max_level;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class deadline_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-lift bookkeeping, merged into ForestStats.
struct LiftStats {
  std::size_t pruned = 0;
  std::size_t budget_relaxations = 0;
  std::size_t unresolved = 0;
  std::set<int> critical_primes;

  void merge(const LiftStats& o);
};

struct StabilizerSystem {
  std::vector<Var> free_vars;         // group vars neither solved nor forced to 0
  std::vector<MultiPoly> residual;    // processed equations after solving (all zero when exact)
  MultiPoly target;                   // action on the next coordinate, its own value excluded
  std::vector<Constraint> side_constraints;
  bool unresolved = false;            // some equation had to be handled by forcing vars to 0
};

// Stabilizer of the partial representative, solved by the recorded pivots.
// Throws budget_exceeded when a polynomial outgrows the budget caps.
StabilizerSystem stabilizer_system(const Case& c, const ModuleWithFiltration& mod,
                                   const RunOptions& opt, LiftStats* stats = nullptr);

enum class Outcome { Normalized, NewParam };

struct Branch {
  Outcome outcome = Outcome::NewParam;
  std::optional<Var> pivot;
  MultiPoly num, den;                      // pivot := num / den
  std::vector<Constraint> added_constraints;
  int consumed_budget = 0;                 // resolve steps on this path
  bool relaxed = false;
  Case state;                              // parent with substitutions and constraints applied
};

// Branch enumeration for one coordinate. target excludes the coordinate's
// own value. Free group vars are scanned in descending index order.
std::vector<Branch> resolve(const MultiPoly& target, const std::vector<Var>& free_vars,
                            const Case& c, const ModuleWithFiltration& mod,
                            const RunOptions& opt, LiftStats* stats = nullptr);

Case root_case(const ModuleWithFiltration& mod);
std::vector<Case> lift(const Case& c, const ModuleWithFiltration& mod, const RunOptions& opt,
                       LiftStats* stats = nullptr);
Forest run(const ModuleWithFiltration& mod, const RunOptions& opt);

// The representative's coordinate vector (Pending slots read as 0).
std::vector<MultiPoly> representative(const Case& c);

// Neq bookkeeping helpers, exposed for tests.
namespace neq {
// Adds the factors of p; returns false if p is identically zero.
bool add(std::vector<MultiPoly>& set, const MultiPoly& p);
bool known_nonzero(const MultiPoly& p, const std::vector<MultiPoly>& set);
std::vector<MultiPoly> unknown_factors(const MultiPoly& p, const std::vector<MultiPoly>& set);
}  // namespace neq

std::string format_label(const BranchLabel& l);
BranchLabel parse_label(std::string_view s);

}  // namespace borelmod

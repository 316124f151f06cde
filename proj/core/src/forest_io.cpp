#include "borelmod/forest_io.hpp"

#include <json.hpp>

namespace borelmod {

using ojson = nlohmann::ordered_json;

std::string slot_to_string(const Slot& s) {
  switch (s.kind) {
    case SlotKind::Pending: return "*";
    case SlotKind::Zero: return "0";
    case SlotKind::Param:
    case SlotKind::Derived: return s.value.to_string();
  }
  return "*";
}

std::string forest_to_json(const Forest& f) {
  ojson j;
  j["type"] = f.type.name();
  j["mode"] = to_string(f.mode);
  j["shape"] = to_string(f.shape);
  j["strategy"] = to_string(f.strategy);
  j["budget"] = {{"max_branches", f.budget.max_branches},
                 {"max_poly_terms", f.budget.max_poly_terms},
                 {"max_poly_degree", f.budget.max_poly_degree},
                 {"max_resolve_steps", f.budget.max_resolve_steps}};
  j["partial"] = f.partial;
  j["levels"] = f.levels;
  ojson cells = ojson::array();
  for (const auto& c : f.cells) {
    ojson cell;
    cell["label"] = format_label(c.label);
    ojson pattern = ojson::array();
    for (const auto& s : c.slots) pattern.push_back(slot_to_string(s));
    cell["pattern"] = std::move(pattern);
    ojson neq = ojson::array();
    for (const auto& p : c.neq) neq.push_back(p.to_string());
    cell["neq"] = std::move(neq);
    cell["relaxed"] = c.relaxed;
    cell["dim"] = c.dim;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  const auto& s = f.stats;
  j["stats"] = {{"cells", s.cells},
                {"relaxed_cells", s.relaxed_cells},
                {"max_dim", s.max_dim},
                {"pruned", s.pruned},
                {"budget_relaxations", s.budget_relaxations},
                {"unresolved_conditions", s.unresolved_conditions},
                {"critical_primes", s.critical_primes}};
  return j.dump(2) + "\n";
}

namespace {

template <class T>
T get(const ojson& j, const char* key) {
  if (!j.contains(key)) throw forest_format_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw forest_format_error(std::string("bad value for '") + key + "'");
  }
}

Slot parse_slot(const std::string& text, int coord) {
  if (text == "*") return Slot{};
  if (text == "0") return Slot{SlotKind::Zero, MultiPoly(), std::nullopt};
  MultiPoly p;
  try {
    p = MultiPoly::parse(text);
  } catch (const parse_error& e) {
    throw forest_format_error("bad pattern entry '" + text + "': " + e.what());
  }
  if (p.contains_family(VarFamily::Group)) throw forest_format_error("group var in pattern: " + text);
  const MultiPoly own(Var::param(static_cast<std::uint32_t>(coord + 1)));
  if (p == own) return Slot{SlotKind::Param, p, std::nullopt};
  if (p.contains(own.leading().mono.factors()[0].first))
    throw forest_format_error("pattern entry uses its own parameter: " + text);
  return Slot{SlotKind::Derived, p, std::nullopt};
}

}  // namespace

namespace {

Forest parse_forest(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw forest_format_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw forest_format_error("forest must be a JSON object");

  Forest f;
  try {
    f.type = CartanType::parse(get<std::string>(j, "type"));
    f.mode = parse_mode(get<std::string>(j, "mode"));
    if (j.contains("shape")) f.shape = parse_shape(get<std::string>(j, "shape"));
    if (j.contains("strategy")) f.strategy = parse_strategy(get<std::string>(j, "strategy"));
  } catch (const std::invalid_argument& e) {
    throw forest_format_error(e.what());
  }
  const auto& b = j.at("budget");
  f.budget.max_branches = get<int>(b, "max_branches");
  f.budget.max_poly_terms = get<std::size_t>(b, "max_poly_terms");
  f.budget.max_poly_degree = get<std::uint32_t>(b, "max_poly_degree");
  f.budget.max_resolve_steps = get<int>(b, "max_resolve_steps");
  const RootSystem rs(f.type);
  const int N = rs.size();
  f.levels = j.contains("levels") ? get<int>(j, "levels") : N;
  f.partial = j.contains("partial") ? get<bool>(j, "partial") : false;
  if (f.levels < 0 || f.levels > N || f.partial != (f.levels < N))
    throw forest_format_error("inconsistent levels/partial");

  const auto& cells = j.at("cells");
  if (!cells.is_array()) throw forest_format_error("cells must be an array");
  for (const auto& jc : cells) {
    Cell c;
    try {
      c.label = parse_label(get<std::string>(jc, "label"));
    } catch (const std::invalid_argument& e) {
      throw forest_format_error(e.what());
    }
    const auto pattern = get<std::vector<std::string>>(jc, "pattern");
    if (static_cast<int>(pattern.size()) != N) throw forest_format_error("pattern length differs from N");
    for (int k = 0; k < N; ++k) c.slots.push_back(parse_slot(pattern[k], k));
    for (const auto& s : get<std::vector<std::string>>(jc, "neq")) {
      try {
        c.neq.push_back(MultiPoly::parse(s));
      } catch (const parse_error& e) {
        throw forest_format_error("bad neq '" + s + "': " + e.what());
      }
    }
    c.relaxed = get<bool>(jc, "relaxed");
    c.dim = get<int>(jc, "dim");
    int params = 0;
    for (const auto& s : c.slots) params += s.kind == SlotKind::Param;
    if (params != c.dim) throw forest_format_error("dim does not match pattern");
    if (!f.cells.empty() && !(f.cells.back().label < c.label))
      throw forest_format_error("cell labels must be distinct and sorted");
    f.cells.push_back(std::move(c));
  }

  if (j.contains("stats")) {
    const auto& s = j.at("stats");
    f.stats.cells = get<std::size_t>(s, "cells");
    f.stats.relaxed_cells = get<std::size_t>(s, "relaxed_cells");
    f.stats.max_dim = get<int>(s, "max_dim");
    f.stats.pruned = get<std::size_t>(s, "pruned");
    f.stats.budget_relaxations = get<std::size_t>(s, "budget_relaxations");
    f.stats.unresolved_conditions = get<std::size_t>(s, "unresolved_conditions");
    f.stats.critical_primes = get<std::vector<int>>(s, "critical_primes");
  }
  return f;
}

}  // namespace

Forest forest_from_json(std::string_view text) {
  try {
    return parse_forest(text);
  } catch (const nlohmann::json::exception& e) {
    throw forest_format_error(std::string("malformed forest: ") + e.what());
  } catch (const invalid_type_error& e) {
    throw forest_format_error(e.what());
  }
}

}  // namespace borelmod

#pragma once

#include <cstdint>
#include <string>

#include "borelmod/action.hpp"
#include "borelmod/cases.hpp"
#include "borelmod/count.hpp"

namespace borelmod {

// Brute-force ground truth over a prime field F_p. Every entry point checks
// that p is prime and good and that p^N does not exceed the guard
// (guard_exceeded otherwise).

// Orbits of U(p) on u(F_p) or u*(F_p), by union-find over all p^N points
// with the moves x_j(1).
std::uint64_t brute_orbits(const ModuleWithFiltration& mod, std::uint64_t p,
                           std::uint64_t guard = enumeration_guard());

// Conjugacy classes of U(p). Group elements are their adjoint matrices on
// the whole Lie algebra over F_p, which is faithful on U (u alone is not).
std::uint64_t brute_classes(const StructureConstants& sc, std::uint64_t p,
                            std::uint64_t guard = enumeration_guard());

enum class Verdict { Equal, OverCount, UnderCount };

std::string to_string(Verdict v);

struct VerifyReport {
  Verdict verdict = Verdict::Equal;
  Integer cell_total;
  std::uint64_t orbits = 0;
  bool relaxed = false;

  std::string to_string() const;  // human-readable, several lines
};

// Compares the forest's point-count sum at p with brute_orbits.
VerifyReport verify(const Forest& f, const ModuleWithFiltration& mod, std::uint64_t p,
                    std::uint64_t guard = enumeration_guard());

}  // namespace borelmod

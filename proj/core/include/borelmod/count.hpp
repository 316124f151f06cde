#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "borelmod/cases.hpp"

namespace borelmod {

class non_closed_form_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class guard_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 10^7, or the value of BM_GUARD when set to a positive integer.
std::uint64_t enumeration_guard();

struct ModalityResult {
  int mod_U = 0;
  int mod_B = 0;
  bool upper_bound_only = false;  // some cell is relaxed
};

ModalityResult modality(const Forest& f);

// q^a (q-1)^b when the cell reduces to that shape, plus what is left over.
struct CellShape {
  int q_exp = 0;
  int qm1_exp = 0;
  std::vector<Var> rest_params;       // still constrained after reduction
  std::vector<MultiPoly> rest_neq;
  bool closed() const { return rest_params.empty() && rest_neq.empty(); }
};

// Peels off free parameters (factor q) and inequations a_k + (other params)
// != 0 whose a_k occurs nowhere else (factor q - 1), repeatedly.
CellShape cell_shape(const Cell& c);

// Number of F_q points of the cell. q must be a prime that is good for the
// type and not among the forest's critical primes; the leftover part of the
// cell (if any) is enumerated, refusing more than `guard` assignments.
Integer point_count(const Cell& c, std::uint64_t q, std::uint64_t guard = enumeration_guard());

// Throws std::domain_error when q is not prime, bad, or critical.
void check_prime(const Forest& f, std::uint64_t q);

Integer class_number(const Forest& f, std::uint64_t q, std::uint64_t guard = enumeration_guard());

struct CountPolynomial {
  std::vector<Integer> coeffs;  // coeffs[i] multiplies t^i; no trailing zeros
  bool exact = true;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Integer eval(const Integer& t) const;
  std::string to_string() const;  // "t^2 + t - 1"
};

// sum over cells of t^a (t-1)^b. Throws non_closed_form_error if a cell does
// not reduce completely.
CountPolynomial class_polynomial(const Forest& f);

}  // namespace borelmod

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "borelmod/cases.hpp"

namespace borelmod {

class forest_format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Forest <-> JSON. Output is deterministic: fixed key order, cells in label
// order, two-space indent, trailing newline.
//
// Cell patterns hold one string per coordinate: "0", the coordinate's own
// parameter "a<k>", an expression in earlier parameters (eliminated slot),
// or "*" for coordinates a partial run never reached. Pivot vars are not
// serialized.
std::string forest_to_json(const Forest& f);
Forest forest_from_json(std::string_view text);

std::string slot_to_string(const Slot& s);

}  // namespace borelmod

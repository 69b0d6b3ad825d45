#ifndef SLNW_CONSTANTS_HPP
#define SLNW_CONSTANTS_HPP

#include <string>
#include <vector>

namespace slnw {

// One row of the factor-count bookkeeping behind the headline bounds.
struct ConstantRow {
  std::string name;
  long value;
  std::string derivation;
};

// The chain: 8 word values prescribe a superdiagonal, 16 capture a full
// unipotent, 5 classified factors cover the congruence subgroup, and the
// 7-fold adelic covering closes the gap to the whole group.
std::vector<ConstantRow> constant_chain();

}  // namespace slnw

#endif

#include "slnw/constants.hpp"

namespace slnw {

std::vector<ConstantRow> constant_chain() {
  return {
      {"superdiagonal capture", 8,
       "4 + 2 + 2 word values build the three offset unipotents whose "
       "product prescribes a full superdiagonal"},
      {"unipotent capture", 16,
       "8 + 8: a prescribed-superdiagonal value times its symmetric "
       "correction absorbs any U_n(Z;q) element"},
      {"classified factors", 5,
       "factor pipeline emits exactly L,Uc,Uc,Uc,U; each factor is a "
       "conjugated unipotent captured by the previous row"},
      {"congruence bound", 16 * 5,
       "16 word values per factor x 5 factors = 80 covers the level-q^2 "
       "congruence subgroup"},
      {"adelic exponent", 7,
       "3 residue-correction values + 4 values through the coset lift "
       "cover every profinite target"},
      {"global bound", 16 * 5 + 7,
       "80 + 7 = 87: congruence coverage plus the adelic correction"},
  };
}

}  // namespace slnw

#ifndef SLNW_CERTIFICATE_HPP
#define SLNW_CERTIFICATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "slnw/matrix.hpp"

namespace slnw {

enum class FactorClass { U, L, Uc, Eblock };

std::string factor_class_name(FactorClass c);
FactorClass factor_class_from_name(const std::string& s);

// One classified factor of a bounded-generation certificate.
//   U      upper unipotent, off-diagonal entries divisible by q
//   L      lower unipotent, same level
//   Uc     h k h^-1 with k of class U; carries the witness pair (h, k)
//   Eblock diag(1,...,1,g*) whose corner block g* passes the level-q
//          diagonal test (block_size records |g*|)
struct ClassifiedFactor {
  FactorClass cls;
  IntMatrix matrix;
  std::optional<IntMatrix> witness_h;
  std::optional<IntMatrix> witness_k;
  int block_size = 0;  // Eblock only

  // Checks the class predicate at level q, including the witness identity.
  bool check(long q, std::string* why = nullptr) const;
};

ClassifiedFactor make_U(IntMatrix m);
ClassifiedFactor make_L(IntMatrix m);
ClassifiedFactor make_Uc(IntMatrix h, IntMatrix k);
ClassifiedFactor make_Eblock(int n, IntMatrix corner);

struct VerifyReport {
  bool ok = true;
  std::string detail;      // empty when ok
  int failed_factor = -1;  // 1-based index of the first offending factor
};

// Ordered factor list whose exact product must reconstruct the input.
struct FactorCertificate {
  IntMatrix input;
  long q = 1;
  std::vector<ClassifiedFactor> factors;

  FactorCertificate() : input(IntMatrix::identity(1)) {}
  FactorCertificate(IntMatrix in, long level)
      : input(std::move(in)), q(level) {}

  std::string class_sequence() const;  // e.g. "L,Uc,Uc,Uc,U"

  // Bit-exact replay: multiplies the factors, compares with the input and
  // re-checks every class predicate.
  VerifyReport verify() const;

  std::string serialize() const;
  static FactorCertificate deserialize(const std::string& text);
};

uint64_t text_checksum(const std::string& body);

}  // namespace slnw

#endif

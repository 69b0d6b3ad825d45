#ifndef SLNW_MODMATRIX_HPP
#define SLNW_MODMATRIX_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slnw {

// Square matrix over Z/m, entries reduced to [0, m).  Used both for the
// finite-group tables and as a precision-K approximation of matrices over
// Z_p (with m = p^K).  Modulus up to 2^31 so products fit in 64x64->128.
class ModMatrix {
 public:
  ModMatrix(int n, uint64_t m) : n_(n), m_(m), e_(static_cast<size_t>(n) * n) {
    if (n < 1) throw std::invalid_argument("ModMatrix: dimension must be >= 1");
    if (m < 2 || m > (1ull << 31))
      throw std::invalid_argument("ModMatrix: modulus out of range");
  }

  static ModMatrix identity(int n, uint64_t m);
  static ModMatrix elementary(int n, uint64_t m, int i, int j, uint64_t x);

  int dim() const { return n_; }
  uint64_t modulus() const { return m_; }

  uint64_t entry(int i, int j) const { return e_[idx(i, j)]; }
  void set_entry(int i, int j, uint64_t v) { e_[idx(i, j)] = v % m_; }

  ModMatrix operator*(const ModMatrix& rhs) const;
  ModMatrix operator+(const ModMatrix& rhs) const;
  ModMatrix operator-(const ModMatrix& rhs) const;
  bool operator==(const ModMatrix& rhs) const = default;

  uint64_t det() const;
  uint64_t trace() const;

  // Requires det to be a unit mod m; adjugate times det^-1.
  ModMatrix inverse() const;

  ModMatrix transpose() const;
  ModMatrix conjugate_by_inverse(const ModMatrix& x) const;  // x^-1 * this * x
  ModMatrix pow(long e) const;

  bool is_identity() const;
  bool is_scalar() const;

  // Reduce mod a divisor of the modulus.
  ModMatrix reduce(uint64_t m2) const;

  // Packs the entries into a single word when the shape is small enough;
  // lets the group tables use flat hash keys.
  std::optional<uint64_t> pack() const;
  size_t hash() const;

  std::string to_text() const;
  static ModMatrix from_text(const std::string& text, uint64_t m);

  const std::vector<uint64_t>& raw() const { return e_; }

 private:
  size_t idx(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_)
      throw std::out_of_range("ModMatrix: index out of range");
    return static_cast<size_t>(i - 1) * n_ + (j - 1);
  }

  int n_;
  uint64_t m_;
  std::vector<uint64_t> e_;
};

// Modular arithmetic helpers shared by the finite and p-adic code.
uint64_t mod_inverse(uint64_t a, uint64_t m);  // throws if not a unit
uint64_t mod_pow(uint64_t a, uint64_t e, uint64_t m);
int val_p(uint64_t x, uint64_t p, int cap);  // min(cap, v_p(x)); x=0 -> cap

}  // namespace slnw

#endif

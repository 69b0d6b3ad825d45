#ifndef SLNW_MATRIX_HPP
#define SLNW_MATRIX_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace slnw {

class ModMatrix;

// Square matrix over Z with exact arbitrary-precision entries.
// Immutable by convention: all operations return fresh values, so
// certificate replay can never clobber its inputs.
//
// Public indices are 1-based, matching the e_{i,j} convention used
// throughout the factorization pipeline.
class IntMatrix {
 public:
  explicit IntMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {
    if (n < 1) throw std::invalid_argument("IntMatrix: dimension must be >= 1");
  }

  static IntMatrix identity(int n);
  // I + x at entry (i,j); requires i != j.
  static IntMatrix elementary(int n, int i, int j, const mpz_class& x);

  int dim() const { return n_; }

  const mpz_class& entry(int i, int j) const { return e_[idx(i, j)]; }
  void set_entry(int i, int j, mpz_class v) { e_[idx(i, j)] = std::move(v); }

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const = default;

  // Fraction-free Bareiss elimination; exact for any size.
  mpz_class det() const;

  // Exact inverse via the adjugate; requires det = +-1.
  IntMatrix inverse() const;

  IntMatrix transpose() const;
  IntMatrix conjugate_by(const IntMatrix& h) const;  // h * this * h^-1

  bool is_identity() const;

  ModMatrix reduce_mod(unsigned long m) const;

  // Row/column/entry text format: rows ';', entries ','.  "1,2;0,1"
  std::string to_text() const;
  static IntMatrix from_text(const std::string& text);

  // diag(1,...,1, block) with the block at the lower-right corner.
  static IntMatrix embed_corner(int n, const IntMatrix& block);
  // The lower-right m x m block.
  IntMatrix corner_block(int m) const;

 private:
  size_t idx(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_)
      throw std::out_of_range("IntMatrix: index out of range");
    return static_cast<size_t>(i - 1) * n_ + (j - 1);
  }

  int n_;
  std::vector<mpz_class> e_;
};

// g == I (mod q) entrywise.  Requires det(g) = 1.
bool in_congruence(const IntMatrix& g, long q);

// Upper (resp. lower) unipotent with all off-diagonal entries divisible by q.
bool in_upper_unipotent(const IntMatrix& g, long q);
bool in_lower_unipotent(const IntMatrix& g, long q);

// Membership in the subgroup generated by level-q elementaries, n >= 3:
// g in SL_n(Z;q) with every diagonal entry == 1 (mod q^2).
bool mennicke_in_E(const IntMatrix& g, long q);

}  // namespace slnw

#endif

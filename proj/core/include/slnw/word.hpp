#ifndef SLNW_WORD_HPP
#define SLNW_WORD_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slnw {

struct WordParseError : std::runtime_error {
  WordParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)),
        position(pos) {}
  size_t position;
};

// Reduced word in the free group F_d.  Letters are (generator, sign) with
// generators numbered from 1; the stored sequence never contains an
// adjacent cancelling pair.
class Word {
 public:
  struct Letter {
    int gen;
    int sign;  // +1 or -1
    bool operator==(const Letter&) const = default;
  };

  Word() = default;
  explicit Word(std::vector<Letter> letters) { append(letters); }

  // Grammar: letters x1..x9, inverse ^-1, integer powers ^k, commutators
  // [u,v] expanding to u^-1 v^-1 u v, concatenation by whitespace or
  // juxtaposition.  A zero power is accepted and contributes nothing.
  static Word parse(const std::string& text);

  static Word generator(int g, int sign = 1) {
    if (g < 1) throw std::invalid_argument("Word: generator index must be >= 1");
    return Word({Letter{g, sign}});
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  size_t length() const { return letters_.size(); }
  int arity() const;

  Word inverse() const;
  Word operator*(const Word& rhs) const;
  Word pow(long e) const;
  static Word commutator(const Word& u, const Word& v) {
    return u.inverse() * v.inverse() * u * v;
  }

  bool operator==(const Word&) const = default;

  // Fully expanded reduced letter sequence, e.g. "x1^-1 x2^-1 x1 x2".
  std::string to_text() const;

 private:
  void append(std::span<const Letter> ls);
  std::vector<Letter> letters_;
};

inline bool is_trivial_on_free(const Word& w) { return w.empty(); }

// Substitution product over any type with operator* and .inverse().
// The identity is passed explicitly so the empty word evaluates correctly.
template <class G>
G evaluate_word(const Word& w, std::span<const G> tuple, const G& identity) {
  if (static_cast<int>(tuple.size()) < w.arity())
    throw std::invalid_argument("evaluate_word: tuple shorter than word arity");
  std::vector<G> inv_cache;
  inv_cache.reserve(tuple.size());
  bool have_inv = false;
  G acc = identity;
  for (const auto& l : w.letters()) {
    if (l.sign > 0) {
      acc = acc * tuple[static_cast<size_t>(l.gen - 1)];
    } else {
      if (!have_inv) {
        for (const auto& t : tuple) inv_cache.push_back(t.inverse());
        have_inv = true;
      }
      acc = acc * inv_cache[static_cast<size_t>(l.gen - 1)];
    }
  }
  return acc;
}

}  // namespace slnw

#endif

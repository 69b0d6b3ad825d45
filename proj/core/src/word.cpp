#include "slnw/word.hpp"

#include <cctype>
#include <sstream>

namespace slnw {

int Word::arity() const {
  int d = 0;
  for (const auto& l : letters_)
    if (l.gen > d) d = l.gen;
  return d;
}

void Word::append(std::span<const Letter> ls) {
  for (const auto& l : ls) {
    if (!letters_.empty() && letters_.back().gen == l.gen &&
        letters_.back().sign == -l.sign) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push_back(Letter{it->gen, -it->sign});
  Word w;
  w.letters_ = std::move(out);  // reversal of a reduced word is reduced
  return w;
}

Word Word::operator*(const Word& rhs) const {
  Word w = *this;
  w.append(rhs.letters_);
  return w;
}

Word Word::pow(long e) const {
  Word base = e < 0 ? inverse() : *this;
  Word acc;
  for (long i = 0, k = e < 0 ? -e : e; i < k; ++i) acc = acc * base;
  return acc;
}

std::string Word::to_text() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& l : letters_) {
    if (!first) os << ' ';
    first = false;
    os << 'x' << l.gen;
    if (l.sign < 0) os << "^-1";
  }
  return os.str();
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() { return s[pos]; }

  long parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) throw WordParseError("expected integer", start);
    return std::stol(s.substr(start, pos - start));
  }

  // atom := x<digit> | '[' word ',' word ']' | '(' word ')'
  Word parse_atom() {
    skip_ws();
    if (pos >= s.size()) throw WordParseError("expected atom", pos);
    char c = s[pos];
    if (c == 'x' || c == 'X') {
      ++pos;
      if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        throw WordParseError("expected generator index after 'x'", pos);
      int g = s[pos] - '0';
      ++pos;
      if (g < 1) throw WordParseError("generator index must be 1..9", pos - 1);
      return Word::generator(g);
    }
    if (c == '[') {
      ++pos;
      Word u = parse_word(',');
      skip_ws();
      if (pos >= s.size() || s[pos] != ',')
        throw WordParseError("expected ',' in commutator", pos);
      ++pos;
      Word v = parse_word(']');
      skip_ws();
      if (pos >= s.size() || s[pos] != ']')
        throw WordParseError("expected ']' closing commutator", pos);
      ++pos;
      return Word::commutator(u, v);
    }
    if (c == '(') {
      ++pos;
      Word u = parse_word(')');
      skip_ws();
      if (pos >= s.size() || s[pos] != ')')
        throw WordParseError("expected ')'", pos);
      ++pos;
      return u;
    }
    throw WordParseError(std::string("unexpected character '") + c + "'", pos);
  }

  Word parse_term() {
    Word atom = parse_atom();
    skip_ws();
    while (pos < s.size() && s[pos] == '^') {
      ++pos;
      long e = parse_int();
      atom = atom.pow(e);
      skip_ws();
    }
    return atom;
  }

  Word parse_word(char stop = '\0') {
    Word acc;
    while (!done()) {
      char c = peek();
      if (c == stop || c == ',' || c == ']' || c == ')') break;
      acc = acc * parse_term();
    }
    return acc;
  }
};

}  // namespace

Word Word::parse(const std::string& text) {
  Parser p(text);
  Word w = p.parse_word();
  p.skip_ws();
  if (p.pos != text.size())
    throw WordParseError("trailing input", p.pos);
  return w;
}

}  // namespace slnw

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tb {

// A letter of the free group F_k, packed into one byte:
//   code = (generator_index << 1) | (1 if inverse else 0)
// so the natural byte order is a < a^-1 < b < b^-1 < ..., which is the
// enumeration tie-break used everywhere (generator index, then +1 before -1).
using LetterCode = std::uint8_t;

constexpr LetterCode makeLetter(int gen, int sign) {
  return static_cast<LetterCode>((gen << 1) | (sign < 0 ? 1 : 0));
}
constexpr LetterCode inverseLetter(LetterCode c) { return c ^ 1; }
constexpr int letterGen(LetterCode c) { return c >> 1; }
constexpr int letterSign(LetterCode c) { return (c & 1) ? -1 : +1; }

char letterChar(LetterCode c);
LetterCode letterFromChar(char ch, int rank);

// Freely reduced word over +-k generators. Immutable after construction.
// The empty word is the identity; |w| is the word-metric distance d(o, w.o)
// in the Cayley tree.
class Word {
 public:
  Word() = default;

  // Reduces the input letter sequence (stack reduction; reduction in a free
  // group is confluent, so the result does not depend on deletion order).
  static Word reduce(const std::vector<LetterCode>& letters);

  // ASCII form: 'a'..'z' generators, 'A'..'Z' their inverses.
  static Word parse(std::string_view s, int rank);
  std::string str() const;

  int size() const { return static_cast<int>(ls_.size()); }
  bool empty() const { return ls_.empty(); }
  LetterCode at(int i) const { return ls_[static_cast<std::size_t>(i)]; }
  LetterCode front() const { return ls_.front(); }
  LetterCode back() const { return ls_.back(); }
  const std::vector<LetterCode>& letters() const { return ls_; }

  Word inverse() const;
  Word prefix(int n) const;
  Word suffix(int n) const;
  Word pow(int e) const;

  friend Word operator*(const Word& u, const Word& v);
  bool operator==(const Word& o) const { return ls_ == o.ls_; }
  bool operator!=(const Word& o) const { return ls_ != o.ls_; }
  // Length-lexicographic order (the canonical enumeration order).
  bool operator<(const Word& o) const;

  // Appends a single letter with reduction.
  Word push(LetterCode c) const;

  struct Hash {
    std::size_t operator()(const Word& w) const;
  };

 private:
  explicit Word(std::vector<LetterCode> ls) : ls_(std::move(ls)) {}
  std::vector<LetterCode> ls_;
};

// Number of letters cancelled on each side when reducing u * v,
// i.e. (|u| + |v| - |uv|) / 2.
int cancellation(const Word& u, const Word& v);

// Gromov product <u, v>_o in the Cayley tree = length of the longest common
// prefix of u and v; equals (|u| + |v| - |u^-1 v|)/2.
int gromovProduct(const Word& u, const Word& v);

// Word metric d(u.o, v.o) = |u^-1 v|.
int distance(const Word& u, const Word& v);

// Axis decomposition w = conjugator * core * conjugator^-1 with the core
// cyclically reduced and nonempty.
struct Axis {
  Word conjugator;
  Word core;
  // The axis line is conjugator * {bi-infinite core line through o}.
};

// Throws std::invalid_argument("identity has no axis") on the empty word.
Axis axisOf(const Word& w);

bool cyclicallyReduced(const Word& w);

// Smallest period root of a cyclically reduced word (w = root^m).
Word primitiveRoot(const Word& w);

// Loxodromic independence at the level of conjugacy: true iff the cyclic
// cores generate non-commensurable cyclic subgroups, i.e. no cyclic rotation
// of a core power equals the other core power or its inverse.
bool independent(const Word& w1, const Word& w2);

// Nearest-point projection of the point x.o onto the axis line, returned as
// the word of the projection point.
Word axisProject(const Axis& ax, const Word& x);

// Diameter of the nearest-point projection of the segment [x.o, y.o] onto
// the axis line. Exact in the tree; 0 when the segment projects to a point.
long projectionDiameter(const Axis& ax, const Word& x, const Word& y);

}  // namespace tb

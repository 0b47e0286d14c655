#include "treebound/word.hpp"

#include <algorithm>
#include <cstring>

namespace tb {

char letterChar(LetterCode c) {
  const int g = letterGen(c);
  if (g > 25) throw std::invalid_argument("rank too large for ASCII form");
  return static_cast<char>((letterSign(c) > 0 ? 'a' : 'A') + g);
}

LetterCode letterFromChar(char ch, int rank) {
  int gen;
  int sign;
  if (ch >= 'a' && ch <= 'z') {
    gen = ch - 'a';
    sign = +1;
  } else if (ch >= 'A' && ch <= 'Z') {
    gen = ch - 'A';
    sign = -1;
  } else {
    throw std::invalid_argument(std::string("bad letter: ") + ch);
  }
  if (gen >= rank) throw std::invalid_argument(std::string("letter outside rank: ") + ch);
  return makeLetter(gen, sign);
}

Word Word::reduce(const std::vector<LetterCode>& letters) {
  std::vector<LetterCode> out;
  out.reserve(letters.size());
  for (LetterCode c : letters) {
    if (!out.empty() && out.back() == inverseLetter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return Word(std::move(out));
}

Word Word::parse(std::string_view s, int rank) {
  std::vector<LetterCode> ls;
  ls.reserve(s.size());
  for (char ch : s) {
    if (ch == ' ' || ch == '\t') continue;
    ls.push_back(letterFromChar(ch, rank));
  }
  Word w = reduce(ls);
  if (w.ls_ != ls) {
    // Accept unreduced input but normalize; parsing is used on config data
    // where silent reduction would hide typos, so keep it strict.
    throw std::invalid_argument("word not freely reduced: " + std::string(s));
  }
  return w;
}

std::string Word::str() const {
  std::string s;
  s.reserve(ls_.size());
  for (LetterCode c : ls_) s.push_back(letterChar(c));
  return s;
}

Word Word::inverse() const {
  std::vector<LetterCode> ls(ls_.size());
  for (std::size_t i = 0; i < ls_.size(); ++i) {
    ls[ls_.size() - 1 - i] = inverseLetter(ls_[i]);
  }
  return Word(std::move(ls));
}

Word Word::prefix(int n) const {
  return Word(std::vector<LetterCode>(ls_.begin(), ls_.begin() + n));
}

Word Word::suffix(int n) const {
  return Word(std::vector<LetterCode>(ls_.end() - n, ls_.end()));
}

Word Word::pow(int e) const {
  Word base = e < 0 ? inverse() : *this;
  int n = e < 0 ? -e : e;
  Word acc;
  for (int i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

Word operator*(const Word& u, const Word& v) {
  std::size_t i = u.ls_.size();
  std::size_t j = 0;
  while (i > 0 && j < v.ls_.size() && u.ls_[i - 1] == inverseLetter(v.ls_[j])) {
    --i;
    ++j;
  }
  std::vector<LetterCode> ls;
  ls.reserve(i + v.ls_.size() - j);
  ls.insert(ls.end(), u.ls_.begin(), u.ls_.begin() + i);
  ls.insert(ls.end(), v.ls_.begin() + j, v.ls_.end());
  return Word(std::move(ls));
}

bool Word::operator<(const Word& o) const {
  if (ls_.size() != o.ls_.size()) return ls_.size() < o.ls_.size();
  return ls_ < o.ls_;
}

Word Word::push(LetterCode c) const {
  std::vector<LetterCode> ls = ls_;
  if (!ls.empty() && ls.back() == inverseLetter(c)) {
    ls.pop_back();
  } else {
    ls.push_back(c);
  }
  return Word(std::move(ls));
}

std::size_t Word::Hash::operator()(const Word& w) const {
  // FNV-1a over the letter bytes.
  std::uint64_t h = 1469598103934665603ull;
  for (LetterCode c : w.letters()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

int cancellation(const Word& u, const Word& v) {
  int i = u.size();
  int j = 0;
  int n = 0;
  while (i > 0 && j < v.size() && u.at(i - 1) == inverseLetter(v.at(j))) {
    --i;
    ++j;
    ++n;
  }
  return n;
}

int gromovProduct(const Word& u, const Word& v) {
  const int m = std::min(u.size(), v.size());
  int i = 0;
  while (i < m && u.at(i) == v.at(i)) ++i;
  return i;
}

int distance(const Word& u, const Word& v) {
  return (u.inverse() * v).size();
}

Axis axisOf(const Word& w) {
  if (w.empty()) throw std::invalid_argument("identity has no axis");
  int lo = 0;
  int hi = w.size();
  while (hi - lo >= 2 && w.at(lo) == inverseLetter(w.at(hi - 1))) {
    ++lo;
    --hi;
  }
  std::vector<LetterCode> conj(w.letters().begin(), w.letters().begin() + lo);
  std::vector<LetterCode> core(w.letters().begin() + lo, w.letters().begin() + hi);
  Axis ax;
  ax.conjugator = Word::reduce(conj);
  ax.core = Word::reduce(core);
  return ax;
}

bool cyclicallyReduced(const Word& w) {
  if (w.size() <= 1) return true;
  return w.front() != inverseLetter(w.back());
}

Word primitiveRoot(const Word& w) {
  const int n = w.size();
  for (int p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) {
      if (w.at(i) != w.at(i - p)) ok = false;
    }
    if (ok) return w.prefix(p);
  }
  return w;
}

namespace {

Word leastRotation(const Word& w) {
  Word best = w;
  std::vector<LetterCode> buf = w.letters();
  for (int r = 1; r < w.size(); ++r) {
    std::rotate(buf.begin(), buf.begin() + 1, buf.end());
    Word cand = Word::reduce(buf);
    if (cand < best) best = cand;
  }
  return best;
}

}  // namespace

bool independent(const Word& w1, const Word& w2) {
  if (w1.empty() || w2.empty()) throw std::invalid_argument("identity is not loxodromic");
  const Word r1 = primitiveRoot(axisOf(w1).core);
  const Word r2 = primitiveRoot(axisOf(w2).core);
  if (r1.size() != r2.size()) return true;
  const Word c1 = leastRotation(r1);
  return c1 != leastRotation(r2) && c1 != leastRotation(r2.inverse());
}

namespace {

// Distance from the point x.o to the axis line of a cyclically reduced core
// through o, together with the projection point. The line's vertices are the
// prefixes of core^inf and of core^-inf; the projection of x is its longest
// prefix that stays on the line.
Word projectOntoCoreLine(const Word& core, const Word& x) {
  // Walk x's letters along the positive and negative core rays.
  int fwd = 0;
  {
    const int p = core.size();
    while (fwd < x.size() && x.at(fwd) == core.at(fwd % p)) ++fwd;
  }
  int bwd = 0;
  {
    const Word icore = core.inverse();
    const int p = icore.size();
    while (bwd < x.size() && x.at(bwd) == icore.at(bwd % p)) ++bwd;
  }
  return x.prefix(std::max(fwd, bwd));
}

}  // namespace

Word axisProject(const Axis& ax, const Word& x) {
  // Translate to the frame where the line is the core line through o.
  const Word local = ax.conjugator.inverse() * x;
  const Word proj = projectOntoCoreLine(ax.core, local);
  return ax.conjugator * proj;
}

long projectionDiameter(const Axis& ax, const Word& x, const Word& y) {
  const Word px = axisProject(ax, x);
  const Word py = axisProject(ax, y);
  return distance(px, py);
}

}  // namespace tb

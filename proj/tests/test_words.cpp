#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "treebound/annulus.hpp"
#include "treebound/word.hpp"

using namespace tb;

namespace {

// Oracle: repeated adjacent-pair deletion until fixpoint, scanning from the
// left each pass. Independent of the stack reducer.
std::vector<LetterCode> naiveReduce(std::vector<LetterCode> ls) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
      if (ls[i] == inverseLetter(ls[i + 1])) {
        ls.erase(ls.begin() + static_cast<long>(i), ls.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return ls;
}

std::vector<LetterCode> randomLetters(std::mt19937_64& rng, int rank, int n) {
  std::uniform_int_distribution<int> d(0, 2 * rank - 1);
  std::vector<LetterCode> ls;
  ls.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ls.push_back(static_cast<LetterCode>(d(rng)));
  return ls;
}

Word randomReduced(std::mt19937_64& rng, int rank, int n) {
  std::uniform_int_distribution<int> d(0, 2 * rank - 2);
  std::vector<LetterCode> ls;
  while (static_cast<int>(ls.size()) < n) {
    int c = d(rng);
    if (!ls.empty()) {
      // skip the inverse of the previous letter
      if (c >= inverseLetter(ls.back())) ++c;
    } else {
      std::uniform_int_distribution<int> d0(0, 2 * rank - 1);
      c = d0(rng);
    }
    ls.push_back(static_cast<LetterCode>(c));
  }
  return Word::reduce(ls);
}

void enumerateReduced(int rank, int n, std::vector<LetterCode>& stack,
                      const std::function<void(const Word&)>& fn) {
  if (static_cast<int>(stack.size()) == n) {
    fn(Word::reduce(stack));
    return;
  }
  for (int c = 0; c < 2 * rank; ++c) {
    if (!stack.empty() && inverseLetter(stack.back()) == static_cast<LetterCode>(c)) continue;
    stack.push_back(static_cast<LetterCode>(c));
    enumerateReduced(rank, n, stack, fn);
    stack.pop_back();
  }
}

}  // namespace

TEST_CASE("free reduction basics and ASCII round trip") {
  const Word e = Word::reduce({makeLetter(0, +1), makeLetter(0, -1)});
  CHECK(e.empty());

  // a b b^-1 a -> a a
  const Word w = Word::reduce(
      {makeLetter(0, +1), makeLetter(1, +1), makeLetter(1, -1), makeLetter(0, +1)});
  CHECK(w.str() == "aa");

  CHECK(Word::parse("abA", 2).str() == "abA");
  CHECK_THROWS(Word::parse("aA", 2));
  CHECK_THROWS(Word::parse("ac", 2));
}

TEST_CASE("reduction agrees with naive fixpoint oracle on random input") {
  std::mt19937_64 rng(20240801);
  for (int trial = 0; trial < 200; ++trial) {
    auto ls = randomLetters(rng, 2, 200);
    CHECK(Word::reduce(ls).letters() == naiveReduce(ls));
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto ls = randomLetters(rng, 3, 120);
    CHECK(Word::reduce(ls).letters() == naiveReduce(ls));
  }
}

TEST_CASE("word metric: triangle inequality and concatenation") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Word u = randomReduced(rng, 2, 12);
    const Word v = randomReduced(rng, 2, 9);
    const Word w = randomReduced(rng, 2, 15);
    CHECK(distance(u, w) <= distance(u, v) + distance(v, w));
    CHECK(distance(u, v) == (u.inverse() * v).size());
    CHECK(distance(u, u) == 0);
  }
}

TEST_CASE("gromov product: prefix scan equals metric formula") {
  // (ab, ac): in rank 2 take (ab, aB)
  CHECK(gromovProduct(Word::parse("ab", 2), Word::parse("aB", 2)) == 1);
  const Word u = Word::parse("abaB", 2);
  CHECK(gromovProduct(u, u) == u.size());

  auto metricFormula = [](const Word& x, const Word& y) {
    return (x.size() + y.size() - distance(x, y)) / 2;
  };

  // Exhaustive for k=2 up to length 6 against the metric formula.
  std::vector<Word> all;
  for (int n = 0; n <= 6; ++n) {
    std::vector<LetterCode> stack;
    enumerateReduced(2, n, stack, [&](const Word& w) { all.push_back(w); });
  }
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int trial = 0; trial < 4000; ++trial) {
    const Word& x = all[pick(rng)];
    const Word& y = all[pick(rng)];
    CHECK(gromovProduct(x, y) == metricFormula(x, y));
  }
  // Longer random pairs.
  for (int trial = 0; trial < 300; ++trial) {
    const Word x = randomReduced(rng, 3, 11);
    const Word y = randomReduced(rng, 3, 12);
    CHECK(gromovProduct(x, y) == metricFormula(x, y));
  }
}

TEST_CASE("axis decomposition") {
  CHECK_THROWS_AS(axisOf(Word()), std::invalid_argument);

  const Axis ab = axisOf(Word::parse("ab", 2));
  CHECK(ab.conjugator.empty());
  CHECK(ab.core.str() == "ab");

  const Axis conj = axisOf(Word::parse("abA", 2));
  CHECK(conj.conjugator.str() == "a");
  CHECK(conj.core.str() == "b");

  // Reconstruction invariant, exhaustive for all words up to length 10 would
  // be ~470k words; cover lengths <= 7 exhaustively plus random length <= 10.
  for (int n = 1; n <= 7; ++n) {
    std::vector<LetterCode> stack;
    enumerateReduced(2, n, stack, [&](const Word& w) {
      const Axis ax = axisOf(w);
      CHECK(cyclicallyReduced(ax.core));
      CHECK(!ax.core.empty());
      CHECK(ax.conjugator * ax.core * ax.conjugator.inverse() == w);
    });
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Word w = randomReduced(rng, 2, 10);
    if (w.empty()) continue;
    const Axis ax = axisOf(w);
    CHECK(ax.conjugator * ax.core * ax.conjugator.inverse() == w);
    // w translates its own axis line: w * (axis point) stays on the line.
    const Word p = axisProject(ax, ax.conjugator);  // a point on the line
    const Word wp = w * p;
    CHECK(axisProject(ax, wp) == wp);
  }
}

TEST_CASE("independence") {
  const Word ab = Word::parse("ab", 2);
  CHECK_FALSE(independent(ab, ab));
  CHECK(independent(Word::parse("a", 2), Word::parse("b", 2)));
  CHECK_FALSE(independent(ab, ab * ab * ab));
  // rotations and inverses are dependent
  CHECK_FALSE(independent(ab, Word::parse("ba", 2)));
  CHECK_FALSE(independent(ab, Word::parse("BA", 2)));
  CHECK(independent(ab, Word::parse("aB", 2)));
  CHECK(independent(ab, Word::parse("aab", 2)));
  CHECK(independent(Word::parse("aB", 2), Word::parse("aab", 2)));

  // Oracle: cyclic-rotation scan over capped powers.
  auto dependentByPowerScan = [](const Word& w1, const Word& w2) {
    const Word c1 = axisOf(w1).core;
    const Word c2 = axisOf(w2).core;
    const int cap = 2 * std::max(c1.size(), c2.size());
    for (int p = 1; p * c1.size() <= cap; ++p) {
      for (int q = 1; q * c2.size() <= cap; ++q) {
        if (p * c1.size() != q * c2.size()) continue;
        const Word u = c1.pow(p);
        const Word v = c2.pow(q);
        const Word vi = v.inverse();
        std::vector<LetterCode> rot = u.letters();
        for (int r = 0; r < u.size(); ++r) {
          if (Word::reduce(rot) == v || Word::reduce(rot) == vi) return true;
          std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        }
      }
    }
    return false;
  };
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    Word u = randomReduced(rng, 2, 1 + static_cast<int>(rng() % 6));
    Word v = randomReduced(rng, 2, 1 + static_cast<int>(rng() % 6));
    if (u.empty() || v.empty()) continue;
    CHECK(independent(u, v) == !dependentByPowerScan(u, v));
  }
}

TEST_CASE("projection diameter") {
  const Axis axA = axisOf(Word::parse("a", 2));
  // segment [b.o, b^2.o] projects to o
  CHECK(projectionDiameter(axA, Word::parse("b", 2), Word::parse("bb", 2)) == 0);
  // segment [o, a^3.o] lies on the axis
  CHECK(projectionDiameter(axA, Word(), Word::parse("aaa", 2)) == 3);

  // Oracle: brute-force nearest point over all axis vertices in a ball.
  auto bruteProject = [](const Axis& ax, const Word& x) {
    const int n = x.size() + ax.core.size() + ax.conjugator.size() + 2;
    Word best;
    long bestD = -1;
    for (int e = -n; e <= n; ++e) {
      const Word corePow = ax.core.pow(e);
      // all vertices along the core power: prefixes of corePow beyond e-1 powers
      for (int cut = 0; cut <= ax.core.size(); ++cut) {
        Word pt = ax.conjugator * ax.core.pow(e) *
                  (cut > 0 ? ax.core.prefix(cut) : Word());
        const long d = distance(pt, x);
        if (bestD < 0 || d < bestD || (d == bestD && pt < best)) {
          bestD = d;
          best = pt;
        }
      }
    }
    return best;
  };
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const Word w = randomReduced(rng, 2, 1 + static_cast<int>(rng() % 5));
    if (w.empty()) continue;
    const Axis ax = axisOf(w);
    const Word x = randomReduced(rng, 2, static_cast<int>(rng() % 8));
    const Word y = randomReduced(rng, 2, static_cast<int>(rng() % 8));
    const Word px = bruteProject(ax, x);
    const Word py = bruteProject(ax, y);
    CHECK(distance(px, py) == projectionDiameter(ax, x, y));
    CHECK(axisProject(ax, x) == px);
  }
}

TEST_CASE("annulus enumeration") {
  CHECK(annulusCardinality({2, 3, 0}) == 36);  // 4 * 3^2

  AnnulusSet a1 = annulusSet({2, 1, 0}, UINT64_MAX);
  REQUIRE(a1.elements.size() == 4);
  CHECK(a1.elements[0].str() == "a");
  CHECK(a1.elements[1].str() == "A");
  CHECK(a1.elements[2].str() == "b");
  CHECK(a1.elements[3].str() == "B");

  // k=3, L=4, Delta=1: formula matches brute-force DFS
  AnnulusSet big = annulusSet({3, 4, 1}, UINT64_MAX);
  CHECK_FALSE(big.truncated);
  CHECK(big.elements.size() == annulusCardinality({3, 4, 1}));
  std::set<std::string> uniq;
  for (const Word& w : big.elements) {
    CHECK(w.size() >= 3);
    CHECK(w.size() <= 5);
    uniq.insert(w.str());
  }
  CHECK(uniq.size() == big.elements.size());

  // budget exceeded -> truncated
  AnnulusSet cut = annulusSet({2, 5, 0}, 10);
  CHECK(cut.truncated);
  CHECK(cut.elements.size() == 10);

  // enumeration is length-lexicographic and deterministic
  AnnulusSet ordered = annulusSet({2, 3, 1}, UINT64_MAX);
  for (std::size_t i = 1; i < ordered.elements.size(); ++i) {
    CHECK(ordered.elements[i - 1] < ordered.elements[i]);
  }
}

TEST_CASE("separated selection") {
  AnnulusSet sphere3 = annulusSet({2, 3, 0}, UINT64_MAX);

  SUBCASE("sep 0 keeps everything") {
    CHECK(selectSeparated(sphere3.elements, 0, 2).size() == sphere3.elements.size());
  }
  SUBCASE("singleton") {
    std::vector<Word> one = {Word::parse("aba", 2)};
    CHECK(selectSeparated(one, 5, 2) == one);
  }
  SUBCASE("pairwise distance and cardinality bound on sphere 3, sep 2") {
    const auto sel = selectSeparated(sphere3.elements, 2, 2);
    for (std::size_t i = 0; i < sel.size(); ++i) {
      for (std::size_t j = i + 1; j < sel.size(); ++j) {
        CHECK(distance(sel[i], sel[j]) > 2);
      }
    }
    CHECK(sel.size() * ballSize(2, 2) >= sphere3.elements.size());
    // no two share a prefix of length >= 2
    for (std::size_t i = 0; i < sel.size(); ++i) {
      for (std::size_t j = i + 1; j < sel.size(); ++j) {
        CHECK(gromovProduct(sel[i], sel[j]) < 2);
      }
    }
    // greedy maximality: every dropped word is close to some kept word
    for (const Word& w : sphere3.elements) {
      bool coveredOrKept = false;
      for (const Word& v : sel) {
        if (w == v || distance(w, v) <= 2) coveredOrKept = true;
      }
      CHECK(coveredOrKept);
    }
  }
  SUBCASE("mixed-length annulus agrees with quadratic oracle") {
    AnnulusSet ann = annulusSet({2, 4, 1}, UINT64_MAX);
    for (int sep : {1, 2, 3, 4, 5}) {
      const auto fast = selectSeparated(ann.elements, sep, 2);
      // quadratic greedy oracle
      std::vector<Word> slow;
      for (const Word& w : ann.elements) {
        bool ok = true;
        for (const Word& v : slow) {
          if (distance(w, v) <= sep) ok = false;
        }
        if (ok) slow.push_back(w);
      }
      CHECK(fast == slow);
    }
  }
}

TEST_CASE("parallel annulus count equals serial") {
  for (AnnulusSpec spec : {AnnulusSpec{2, 6, 1}, AnnulusSpec{3, 4, 0}}) {
    const auto serial = annulusCountSerial(spec);
    CHECK(serial == annulusCountParallel(spec));
    CHECK(serial == annulusCardinality(spec));
  }
}

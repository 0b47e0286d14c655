#include "treebound/annulus.hpp"

#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tb {

std::uint64_t sphereSize(int rank, int n) {
  if (n == 0) return 1;
  std::uint64_t s = 2ull * rank;
  for (int i = 1; i < n; ++i) s *= (2ull * rank - 1);
  return s;
}

std::uint64_t ballSize(int rank, int r) {
  std::uint64_t b = 0;
  for (int n = 0; n <= r; ++n) b += sphereSize(rank, n);
  return b;
}

std::uint64_t annulusCardinality(const AnnulusSpec& spec) {
  std::uint64_t c = 0;
  for (int n = std::max(1, spec.L - spec.Delta); n <= spec.L + spec.Delta; ++n) {
    c += sphereSize(spec.rank, n);
  }
  if (spec.L - spec.Delta <= 0) c += 1;
  return c;
}

namespace {

// Depth-first enumeration of reduced words of length exactly n with a fixed
// first letter, in lexicographic order.
template <class Fn>
bool dfsWords(int rank, int n, std::vector<LetterCode>& stack, std::uint64_t& budget,
              Fn&& fn) {
  if (static_cast<int>(stack.size()) == n) {
    if (budget == 0) return false;
    --budget;
    fn(stack);
    return true;
  }
  const int letters = 2 * rank;
  for (int c = 0; c < letters; ++c) {
    const LetterCode lc = static_cast<LetterCode>(c);
    if (!stack.empty() && inverseLetter(stack.back()) == lc) continue;
    stack.push_back(lc);
    if (!dfsWords(rank, n, stack, budget, fn)) return false;
    stack.pop_back();
  }
  return true;
}

}  // namespace

bool forEachInAnnulus(const AnnulusSpec& spec, std::uint64_t budget,
                      const std::function<void(const Word&)>& fn) {
  if (!spec.valid()) throw std::invalid_argument("bad annulus spec");
  for (int n = std::max(1, spec.L - spec.Delta); n <= spec.L + spec.Delta; ++n) {
    std::vector<LetterCode> stack;
    stack.reserve(n);
    const bool done = dfsWords(spec.rank, n, stack, budget,
                               [&](const std::vector<LetterCode>& ls) { fn(Word::reduce(ls)); });
    if (!done) return false;
  }
  return true;
}

AnnulusSet annulusSet(const AnnulusSpec& spec, std::uint64_t budget) {
  AnnulusSet out;
  out.spec = spec;
  out.truncated = !forEachInAnnulus(spec, budget,
                                    [&](const Word& w) { out.elements.push_back(w); });
  return out;
}

std::vector<Word> sphereWhere(int rank, int L, const std::function<bool(const Word&)>& keep,
                              std::uint64_t budget, bool* truncated) {
  std::vector<Word> out;
  std::vector<LetterCode> stack;
  stack.reserve(L);
  const bool done = dfsWords(rank, L, stack, budget, [&](const std::vector<LetterCode>& ls) {
    Word w = Word::reduce(ls);
    if (keep(w)) out.push_back(std::move(w));
  });
  if (truncated) *truncated = !done;
  return out;
}

std::vector<Word> selectSeparated(const std::vector<Word>& in, int sep, int rank) {
  (void)rank;
  if (sep <= 0) return in;

  // Length classes present in the input; an annulus has at most 2 Delta + 1.
  std::vector<int> classes;
  for (const Word& w : in) {
    bool seen = false;
    for (int c : classes) seen |= (c == w.size());
    if (!seen) classes.push_back(w.size());
  }

  // d(w, v) <= sep  <=>  commonPrefix(w, v) >= thr(|w|, |v|) with
  // thr = ceil((|w| + |v| - sep) / 2). Keep, per (kept length, thr), the set
  // of thr-prefixes of kept words of that length; each candidate then costs
  // O(#classes) hash probes.
  auto thrOf = [sep](int lw, int lv) { return (lw + lv - sep + 1) / 2; };
  auto prefixKey = [](const Word& w, int n) {
    return std::string(reinterpret_cast<const char*>(w.letters().data()),
                       static_cast<std::size_t>(n));
  };

  struct ClassSets {
    int length = 0;
    bool any = false;  // some kept word of this length exists
    // thr -> prefixes at that thr (thr values: one per candidate class)
    std::vector<std::pair<int, std::unordered_set<std::string>>> sets;
    std::unordered_set<std::string>& at(int thr) {
      for (auto& kv : sets) {
        if (kv.first == thr) return kv.second;
      }
      sets.emplace_back(thr, std::unordered_set<std::string>{});
      return sets.back().second;
    }
  };
  std::vector<ClassSets> byClass(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) byClass[i].length = classes[i];

  std::vector<Word> kept;
  for (const Word& w : in) {
    bool ok = true;
    for (auto& cls : byClass) {
      if (!cls.any) continue;
      const int thr = thrOf(w.size(), cls.length);
      if (thr > std::min(w.size(), cls.length)) continue;  // distance > sep automatic
      if (thr <= 0) { ok = false; break; }                 // whole class too close
      if (cls.at(thr).count(prefixKey(w, thr))) { ok = false; break; }
    }
    if (!ok) continue;
    kept.push_back(w);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i] != w.size()) continue;
      byClass[i].any = true;
      for (int lc : classes) {
        const int thr = thrOf(lc, w.size());
        if (thr >= 1 && thr <= std::min(lc, w.size())) {
          byClass[i].at(thr).insert(prefixKey(w, thr));
        }
      }
    }
  }
  return kept;
}

std::uint64_t annulusCountSerial(const AnnulusSpec& spec) {
  std::uint64_t n = 0;
  forEachInAnnulus(spec, UINT64_MAX, [&](const Word&) { ++n; });
  return n;
}

std::uint64_t annulusCountParallel(const AnnulusSpec& spec) {
  if (!spec.valid()) throw std::invalid_argument("bad annulus spec");
  const int parts = 2 * spec.rank;
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(parts), 0);
#pragma omp parallel for schedule(dynamic)
  for (int first = 0; first < parts; ++first) {
    std::uint64_t n = 0;
    for (int len = std::max(1, spec.L - spec.Delta); len <= spec.L + spec.Delta; ++len) {
      std::vector<LetterCode> stack;
      stack.push_back(static_cast<LetterCode>(first));
      std::uint64_t budget = UINT64_MAX;
      dfsWords(spec.rank, len, stack, budget, [&](const std::vector<LetterCode>&) { ++n; });
    }
    partial[static_cast<std::size_t>(first)] = n;
  }
  std::uint64_t total = 0;
  for (std::uint64_t p : partial) total += p;
  return total;
}

}  // namespace tb

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "treebound/word.hpp"

namespace tb {

// Annular set A(L, Delta, o) = reduced words with | |w| - L | <= Delta.
struct AnnulusSpec {
  int rank = 2;
  int L = 1;
  int Delta = 0;
  bool valid() const { return rank >= 1 && L >= 1 && Delta >= 0 && Delta < L; }
};

// Exact counts in the 2k-regular tree.
std::uint64_t sphereSize(int rank, int n);           // 2k (2k-1)^(n-1), 1 at n=0
std::uint64_t ballSize(int rank, int r);             // sum of spheres
std::uint64_t annulusCardinality(const AnnulusSpec& spec);

// Enumerates the annulus in length-lexicographic order (letters ordered
// a < a^-1 < b < b^-1 < ...). Returns false if the budget ran out before the
// enumeration finished, in which case the visited set is a proper prefix.
bool forEachInAnnulus(const AnnulusSpec& spec, std::uint64_t budget,
                      const std::function<void(const Word&)>& fn);

struct AnnulusSet {
  AnnulusSpec spec;
  std::vector<Word> elements;
  bool truncated = false;
};

AnnulusSet annulusSet(const AnnulusSpec& spec, std::uint64_t budget);

// Sphere of radius L restricted by an admissibility filter on first/last
// letters plus an arbitrary predicate; used by schedule construction.
// Enumerated in the same deterministic order.
std::vector<Word> sphereWhere(int rank, int L,
                              const std::function<bool(const Word&)>& keep,
                              std::uint64_t budget, bool* truncated);

// Greedy maximal subset with pairwise tree distance > sep, scanning in the
// given order. Guarantees |out| >= |in| / ballSize(rank, sep).
std::vector<Word> selectSeparated(const std::vector<Word>& in, int sep, int rank);

// Parallel count of the annulus partitioned by first letter; exact equality
// with the serial enumeration is asserted in tests.
std::uint64_t annulusCountParallel(const AnnulusSpec& spec);
std::uint64_t annulusCountSerial(const AnnulusSpec& spec);

}  // namespace tb

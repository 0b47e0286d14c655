#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "treebound/schreier.hpp"

namespace tb {

using BigInt = boost::multiprecision::cpp_int;

// Finite connected d-regular graph core, stored as directed arcs with a
// reversal involution. A loop contributes two arcs at its vertex, so loops
// count twice towards the degree.
struct FiniteGraphCore {
  std::string id;
  int vertexCount = 0;
  std::vector<int> tail;  // per arc
  std::vector<int> head;  // per arc
  std::vector<int> rev;   // arc involution

  int arcCount() const { return static_cast<int>(tail.size()); }
  int degree() const;                 // uniform vertex degree; throws if not regular
  int betti() const;                  // |E| - |V| + 1
  bool connected() const;
  void validate() const;              // regularity, involution, connectivity

  // Adds the edge {u, v} as a pair of mutually reverse arcs.
  void addEdge(int u, int v);

  static FiniteGraphCore bouquet(int k);                    // d = 2k
  static FiniteGraphCore theta();                           // 2 vertices, 3 parallel edges
  static FiniteGraphCore barbell();                         // two looped vertices + bridge
  static FiniteGraphCore cycle(int n);                      // d = 2
  static FiniteGraphCore randomRegular(int n, int d, std::uint64_t seed);
  static FiniteGraphCore fromEdgeList(std::istream& in);    // "u v" per line
};

struct SpectralEstimate {
  double value = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
};

// One application of the non-backtracking (Hashimoto) edge-adjacency operator:
// y[f] = sum over arcs e with head(e) = tail(f), e != rev(f) of x[e].
void nbMatvec(const FiniteGraphCore& core, const std::vector<double>& x,
              std::vector<double>& y);
void nbMatvecSerial(const FiniteGraphCore& core, const std::vector<double>& x,
                    std::vector<double>& y);

// Exact counts of non-backtracking paths by length: totals[n] = 1^T B^n 1.
std::vector<BigInt> nbPathTotals(const FiniteGraphCore& core, int maxLen);

// Spectral radius of the Hashimoto operator via deterministic power iteration
// (all-ones start, Rayleigh-quotient stopping). log(value) is the co-growth
// exponent of the core's tree completion. Throws on a disconnected core.
SpectralEstimate hashimotoRadius(const FiniteGraphCore& core, double tol);

// Grigorchuk's co-growth formula: spectral radius of the SRW on X/H from the
// growth exponent omega of H acting on the d-regular tree X.
double grigorchukRadius(double omega, int d);

// Certified lower bound sup_n p_2n(base, base)^(1/2n) for the simple random
// walk. Return probabilities are exact integer numerators over d^steps up to
// step 2^8, scaled doubles beyond; the running sup is monotone in max_steps.
SpectralEstimate srwRadius(SchreierGraph& g, int maxSteps);

// Same walk on the d-regular tree, collapsed to the exact radial birth-death
// chain (all vertices at a given distance are equivalent).
SpectralEstimate srwRadiusTree(int d, int maxSteps);

// Trajectory of estimates p_2n^(1/2n) (running sup), used by monotonicity
// tests and plots.
std::vector<double> srwEstimateTrajectory(SchreierGraph& g, int maxSteps);

struct AmenabilityReport {
  std::string graphId;
  int degree = 0;
  double folnerBestRatio = -1.0;  // best isoperimetric ratio found
  double srwLowerBound = 0.0;     // certified SRW spectral-radius bound
  double grigorchukValue = -1.0;  // formula value when a co-growth is supplied
  bool consistent = false;        // ratios small <=> srw bound near 1
  std::string note;
};

AmenabilityReport amenabilityReport(SchreierGraph& g, int radius, int srwSteps,
                                    double cogrowthOmega = -1.0);

std::string toJson(const AmenabilityReport& r);

}  // namespace tb

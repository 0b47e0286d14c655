#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treebound/word.hpp"

namespace tb {

// Subgroups G < F_k described by how cosets are tracked. The kernel variants
// take a homomorphism to Z^d (one integer tuple per generator) or to Z/m; the
// fg variant folds the generators into a Stallings core.
struct SubgroupSpec {
  enum class Kind { KernelToLattice, KernelToFiniteCyclic, FinitelyGenerated };
  Kind kind = Kind::KernelToLattice;
  int rank = 2;
  // KernelToLattice: weights[g] is the image of generator g in Z^d.
  std::vector<std::vector<long>> weights;
  // KernelToFiniteCyclic: scalar weights mod modulus.
  long modulus = 0;
  std::vector<long> scalarWeights;
  // FinitelyGenerated:
  std::vector<Word> generators;

  static SubgroupSpec kernelToZ(int rank, std::vector<long> w);
  static SubgroupSpec kernelToLattice(int rank, std::vector<std::vector<long>> w);
  static SubgroupSpec kernelToZm(int rank, long modulus, std::vector<long> w);
  static SubgroupSpec finitelyGenerated(int rank, std::vector<Word> gens);

  bool normal() const { return kind != Kind::FinitelyGenerated; }
  void validate() const;  // throws std::invalid_argument
};

// Lazily expanded coset graph. Vertex 0 is the trivial coset; vertices are
// numbered in discovery order (BFS order when built via exploreToRadius).
// Every interior vertex has 2k half-edges; a loop consumes the two half-edges
// (v, g) and (v, g^-1).
class SchreierGraph {
 public:
  explicit SchreierGraph(SubgroupSpec spec);

  int base() const { return 0; }
  int rank() const { return spec_.rank; }
  int degree() const { return 2 * spec_.rank; }
  const SubgroupSpec& spec() const { return spec_; }

  std::size_t vertexCount() const { return verts_.size(); }

  // Follows the half-edge labelled c, materializing the target if needed.
  int step(int v, LetterCode c);
  // Read-only variant: -1 if the target has not been materialized.
  int stepIfPresent(int v, LetterCode c) const;

  // Exact graph distance from the base coset (variant-specific oracle; equals
  // the BFS level, asserted in tests).
  long distToBase(int v);

  struct BuildResult {
    bool truncated = false;
    int radius = 0;
  };
  // Materializes all cosets within `radius` of base, up to the vertex budget.
  BuildResult exploreToRadius(int radius, std::size_t vertexBudget);
  int exploredRadius() const { return exploredRadius_; }

  // Canonical name of the coset (lattice point, residue, or folded key).
  std::string vertexName(int v) const;

  // Edge list `src,dst,generator,sign`, one row per half-edge with sign +1.
  void exportCsv(std::ostream& os) const;

 private:
  struct Vertex {
    std::vector<long> point;       // kernel variants (residue in point[0])
    int state = -1;                // fg: core state
    std::vector<LetterCode> tail;  // fg: hanging-tree path
    std::vector<int> next;         // per letter code; -1 unexplored
    long dist = -1;                // BFS level at discovery
  };

  std::string keyOf(const Vertex& v) const;
  Vertex neighborOf(const Vertex& v, LetterCode c) const;
  int intern(Vertex v, long dist);
  long oracleDist(const Vertex& v);

  SubgroupSpec spec_;
  std::vector<Vertex> verts_;
  std::unordered_map<std::string, int> index_;
  int exploredRadius_ = -1;

  // fg variant: folded Stallings core.
  struct Core {
    std::vector<std::vector<int>> next;  // state x letter -> state or -1
    std::vector<long> distToBase;        // BFS over core edges
  };
  Core core_;

  // lattice-variant distance oracle: BFS over the jump lattice, cached.
  std::map<std::vector<long>, long> latticeDist_;
  std::deque<std::vector<long>> latticeFrontier_;
  long latticeWave_ = 0;
};

// Projection of a ray (a stream of letters, freely reduced as consumed) to
// the quotient graph.
struct RayProjection {
  std::vector<int> vertices;   // vertices.size() == letters consumed + 1
  std::vector<long> distance;  // distance[i] = d(base, vertices[i])
};

RayProjection projectRay(const std::vector<LetterCode>& letters, SchreierGraph& g);

struct RayClassification {
  bool escaped = false;
  // escape: first index past which the profile stays above the bound.
  long certifiedIndex = -1;
  // recurrence: indices with distance <= bound.
  std::vector<long> returns;
};

// Throws std::invalid_argument("insufficient horizon") if the profile is not
// longer than `window`.
RayClassification classifyRay(const RayProjection& proj, int window, long bound);

enum class FolnerStrategy { Balls, Intervals, Greedy };

struct FolnerCandidate {
  std::vector<int> vertices;
  long boundaryEdges = 0;  // outgoing half-edges, counted with multiplicity
  double ratio = 0.0;      // (1/d) |boundary| / |A|
};

// Candidates must stay strictly inside the explored radius so that all their
// neighbours are materialized.
std::vector<FolnerCandidate> folnerCandidates(SchreierGraph& g, FolnerStrategy strategy,
                                              int maxSize);

}  // namespace tb

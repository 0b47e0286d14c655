#include "treebound/schreier.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>

namespace tb {

SubgroupSpec SubgroupSpec::kernelToZ(int rank, std::vector<long> w) {
  std::vector<std::vector<long>> ws;
  ws.reserve(w.size());
  for (long x : w) ws.push_back({x});
  return kernelToLattice(rank, std::move(ws));
}

SubgroupSpec SubgroupSpec::kernelToLattice(int rank, std::vector<std::vector<long>> w) {
  SubgroupSpec s;
  s.kind = Kind::KernelToLattice;
  s.rank = rank;
  s.weights = std::move(w);
  s.validate();
  return s;
}

SubgroupSpec SubgroupSpec::kernelToZm(int rank, long modulus, std::vector<long> w) {
  SubgroupSpec s;
  s.kind = Kind::KernelToFiniteCyclic;
  s.rank = rank;
  s.modulus = modulus;
  s.scalarWeights = std::move(w);
  s.validate();
  return s;
}

SubgroupSpec SubgroupSpec::finitelyGenerated(int rank, std::vector<Word> gens) {
  SubgroupSpec s;
  s.kind = Kind::FinitelyGenerated;
  s.rank = rank;
  s.generators = std::move(gens);
  s.validate();
  return s;
}

void SubgroupSpec::validate() const {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  switch (kind) {
    case Kind::KernelToLattice: {
      if (static_cast<int>(weights.size()) != rank) {
        throw std::invalid_argument("need one weight tuple per generator");
      }
      const std::size_t d = weights.front().size();
      bool allZero = true;
      for (const auto& w : weights) {
        if (w.size() != d) throw std::invalid_argument("weight tuples must share dimension");
        for (long x : w) allZero &= (x == 0);
      }
      if (allZero) throw std::invalid_argument("weights must not all be zero");
      break;
    }
    case Kind::KernelToFiniteCyclic: {
      if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
      if (static_cast<int>(scalarWeights.size()) != rank) {
        throw std::invalid_argument("need one weight per generator");
      }
      bool allZero = true;
      for (long x : scalarWeights) allZero &= (x % modulus == 0);
      if (allZero) throw std::invalid_argument("weights must not all be zero mod m");
      break;
    }
    case Kind::FinitelyGenerated: {
      // An empty list is the trivial subgroup (quotient = the whole tree);
      // that degenerate case is used as the free-group testbed.
      for (const Word& g : generators) {
        if (g.size() > 0 && letterGen(g.front()) >= rank) {
          throw std::invalid_argument("generator outside rank");
        }
      }
      break;
    }
  }
}

namespace {

// Stallings folding: trace each subgroup generator as a loop at the base
// state, then merge states until the transition relation is deterministic.
struct FoldedCore {
  std::vector<std::vector<int>> next;
};

FoldedCore foldCore(const SubgroupSpec& spec) {
  const int letters = 2 * spec.rank;
  // Parallel edge lists (src, letter) -> multiset of targets.
  std::vector<std::vector<std::vector<int>>> out;  // state -> letter -> targets
  auto addState = [&]() {
    out.emplace_back(letters);
    return static_cast<int>(out.size()) - 1;
  };
  const int base = addState();
  auto addEdge = [&](int s, LetterCode c, int t) {
    out[s][c].push_back(t);
    out[t][inverseLetter(c)].push_back(s);
  };
  for (const Word& g : spec.generators) {
    int cur = base;
    for (int i = 0; i < g.size(); ++i) {
      const int nxt = (i + 1 == g.size()) ? base : addState();
      addEdge(cur, g.at(i), nxt);
      cur = nxt;
    }
  }

  // Union-find over states.
  std::vector<int> parent(out.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < out.size(); ++s) {
      if (find(static_cast<int>(s)) != static_cast<int>(s)) continue;
      for (int c = 0; c < letters; ++c) {
        // Gather current targets of the class representative.
        std::set<int> targets;
        for (std::size_t s2 = 0; s2 < out.size(); ++s2) {
          if (find(static_cast<int>(s2)) != static_cast<int>(s)) continue;
          for (int t : out[s2][c]) targets.insert(find(t));
        }
        if (targets.size() > 1) {
          auto it = targets.begin();
          const int keep = *it;
          for (++it; it != targets.end(); ++it) parent[find(*it)] = find(keep);
          changed = true;
        }
      }
    }
  }

  // Compact to representative states, base first.
  std::vector<int> id(out.size(), -1);
  std::vector<int> reps;
  id[static_cast<std::size_t>(find(base))] = 0;
  reps.push_back(find(base));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const int r = find(static_cast<int>(s));
    if (id[static_cast<std::size_t>(r)] < 0) {
      id[static_cast<std::size_t>(r)] = static_cast<int>(reps.size());
      reps.push_back(r);
    }
  }
  FoldedCore core;
  core.next.assign(reps.size(), std::vector<int>(letters, -1));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const int rs = id[static_cast<std::size_t>(find(static_cast<int>(s)))];
    for (int c = 0; c < letters; ++c) {
      for (int t : out[s][c]) {
        core.next[static_cast<std::size_t>(rs)][static_cast<std::size_t>(c)] =
            id[static_cast<std::size_t>(find(t))];
      }
    }
  }
  return core;
}

}  // namespace

SchreierGraph::SchreierGraph(SubgroupSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind == SubgroupSpec::Kind::FinitelyGenerated) {
    FoldedCore fc = foldCore(spec_);
    core_.next = std::move(fc.next);
    // BFS over core edges; shortest paths in the tree-completed graph stay in
    // the core because hanging trees are attached at cut vertices.
    core_.distToBase.assign(core_.next.size(), -1);
    std::queue<int> q;
    core_.distToBase[0] = 0;
    q.push(0);
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (int c = 0; c < 2 * spec_.rank; ++c) {
        const int t = core_.next[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
        if (t >= 0 && core_.distToBase[static_cast<std::size_t>(t)] < 0) {
          core_.distToBase[static_cast<std::size_t>(t)] =
              core_.distToBase[static_cast<std::size_t>(s)] + 1;
          q.push(t);
        }
      }
    }
  }
  // Base vertex.
  Vertex v0;
  v0.next.assign(static_cast<std::size_t>(2 * spec_.rank), -1);
  switch (spec_.kind) {
    case SubgroupSpec::Kind::KernelToLattice:
      v0.point.assign(spec_.weights.front().size(), 0);
      break;
    case SubgroupSpec::Kind::KernelToFiniteCyclic:
      v0.point.assign(1, 0);
      break;
    case SubgroupSpec::Kind::FinitelyGenerated:
      v0.state = 0;
      break;
  }
  intern(std::move(v0), 0);
  if (spec_.kind == SubgroupSpec::Kind::KernelToLattice) {
    latticeDist_[verts_[0].point] = 0;
    latticeFrontier_.push_back(verts_[0].point);
  }
}

std::string SchreierGraph::keyOf(const Vertex& v) const {
  std::string key;
  switch (spec_.kind) {
    case SubgroupSpec::Kind::KernelToLattice:
    case SubgroupSpec::Kind::KernelToFiniteCyclic:
      key.assign(reinterpret_cast<const char*>(v.point.data()), v.point.size() * sizeof(long));
      break;
    case SubgroupSpec::Kind::FinitelyGenerated:
      key.assign(reinterpret_cast<const char*>(&v.state), sizeof(v.state));
      key.append(reinterpret_cast<const char*>(v.tail.data()), v.tail.size());
      break;
  }
  return key;
}

SchreierGraph::Vertex SchreierGraph::neighborOf(const Vertex& v, LetterCode c) const {
  Vertex n;
  n.next.assign(static_cast<std::size_t>(2 * spec_.rank), -1);
  switch (spec_.kind) {
    case SubgroupSpec::Kind::KernelToLattice: {
      n.point = v.point;
      const auto& w = spec_.weights[static_cast<std::size_t>(letterGen(c))];
      for (std::size_t i = 0; i < w.size(); ++i) n.point[i] += letterSign(c) * w[i];
      break;
    }
    case SubgroupSpec::Kind::KernelToFiniteCyclic: {
      const long w = spec_.scalarWeights[static_cast<std::size_t>(letterGen(c))];
      long r = (v.point[0] + letterSign(c) * w) % spec_.modulus;
      if (r < 0) r += spec_.modulus;
      n.point.assign(1, r);
      break;
    }
    case SubgroupSpec::Kind::FinitelyGenerated: {
      n.state = v.state;
      n.tail = v.tail;
      if (!n.tail.empty()) {
        if (n.tail.back() == inverseLetter(c)) {
          n.tail.pop_back();
        } else {
          n.tail.push_back(c);
        }
      } else {
        const int t = core_.next[static_cast<std::size_t>(n.state)][c];
        if (t >= 0) {
          n.state = t;
        } else {
          n.tail.push_back(c);
        }
      }
      break;
    }
  }
  return n;
}

int SchreierGraph::intern(Vertex v, long dist) {
  const std::string key = keyOf(v);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  v.dist = dist;
  const int id = static_cast<int>(verts_.size());
  verts_.push_back(std::move(v));
  index_.emplace(key, id);
  return id;
}

int SchreierGraph::step(int v, LetterCode c) {
  Vertex& src = verts_[static_cast<std::size_t>(v)];
  if (src.next[c] >= 0) return src.next[c];
  Vertex n = neighborOf(src, c);
  const long d = oracleDist(n);
  const int id = intern(std::move(n), d);
  verts_[static_cast<std::size_t>(v)].next[c] = id;
  verts_[static_cast<std::size_t>(id)].next[inverseLetter(c)] = v;
  return id;
}

int SchreierGraph::stepIfPresent(int v, LetterCode c) const {
  return verts_[static_cast<std::size_t>(v)].next[c];
}

long SchreierGraph::oracleDist(const Vertex& v) {
  switch (spec_.kind) {
    case SubgroupSpec::Kind::KernelToLattice: {
      auto it = latticeDist_.find(v.point);
      if (it != latticeDist_.end()) return it->second;
      // Expand BFS waves over the jump lattice until the point appears. The
      // point is a Z-combination of the jumps, so the search terminates.
      while (true) {
        std::deque<std::vector<long>> next;
        ++latticeWave_;
        for (const auto& p : latticeFrontier_) {
          for (int g = 0; g < spec_.rank; ++g) {
            for (int sgn : {+1, -1}) {
              std::vector<long> q = p;
              const auto& w = spec_.weights[static_cast<std::size_t>(g)];
              for (std::size_t i = 0; i < w.size(); ++i) q[i] += sgn * w[i];
              if (latticeDist_.emplace(q, latticeWave_).second) next.push_back(std::move(q));
            }
          }
        }
        latticeFrontier_ = std::move(next);
        auto found = latticeDist_.find(v.point);
        if (found != latticeDist_.end()) return found->second;
        if (latticeFrontier_.empty()) {
          throw std::logic_error("coset not reachable in jump lattice");
        }
      }
    }
    case SubgroupSpec::Kind::KernelToFiniteCyclic: {
      // Finite graph: BFS once over residues.
      std::vector<long> dist(static_cast<std::size_t>(spec_.modulus), -1);
      std::queue<long> q;
      dist[0] = 0;
      q.push(0);
      while (!q.empty()) {
        const long r = q.front();
        q.pop();
        for (int g = 0; g < spec_.rank; ++g) {
          for (int sgn : {+1, -1}) {
            long r2 = (r + sgn * spec_.scalarWeights[static_cast<std::size_t>(g)]) %
                      spec_.modulus;
            if (r2 < 0) r2 += spec_.modulus;
            if (dist[static_cast<std::size_t>(r2)] < 0) {
              dist[static_cast<std::size_t>(r2)] = dist[static_cast<std::size_t>(r)] + 1;
              q.push(r2);
            }
          }
        }
      }
      return dist[static_cast<std::size_t>(v.point[0])];
    }
    case SubgroupSpec::Kind::FinitelyGenerated:
      return core_.distToBase[static_cast<std::size_t>(v.state)] +
             static_cast<long>(v.tail.size());
  }
  return -1;
}

long SchreierGraph::distToBase(int v) {
  Vertex& vx = verts_[static_cast<std::size_t>(v)];
  if (vx.dist < 0) vx.dist = oracleDist(vx);
  return vx.dist;
}

SchreierGraph::BuildResult SchreierGraph::exploreToRadius(int radius,
                                                          std::size_t vertexBudget) {
  BuildResult res;
  std::queue<int> q;
  q.push(base());
  std::vector<char> seen(verts_.size(), 0);
  auto markSeen = [&](int id) {
    if (static_cast<std::size_t>(id) >= seen.size()) seen.resize(id + 1, 0);
    seen[static_cast<std::size_t>(id)] = 1;
  };
  markSeen(base());
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (distToBase(v) >= radius) continue;
    for (int c = 0; c < 2 * spec_.rank; ++c) {
      if (verts_.size() >= vertexBudget && stepIfPresent(v, static_cast<LetterCode>(c)) < 0) {
        res.truncated = true;
        continue;
      }
      const int t = step(v, static_cast<LetterCode>(c));
      if (static_cast<std::size_t>(t) >= seen.size() || !seen[static_cast<std::size_t>(t)]) {
        markSeen(t);
        q.push(t);
      }
    }
  }
  res.radius = radius;
  if (!res.truncated) exploredRadius_ = std::max(exploredRadius_, radius);
  return res;
}

std::string SchreierGraph::vertexName(int v) const {
  const Vertex& vx = verts_[static_cast<std::size_t>(v)];
  switch (spec_.kind) {
    case SubgroupSpec::Kind::KernelToLattice: {
      std::string s = "(";
      for (std::size_t i = 0; i < vx.point.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(vx.point[i]);
      }
      return s + ")";
    }
    case SubgroupSpec::Kind::KernelToFiniteCyclic:
      return std::to_string(vx.point[0]) + " mod " + std::to_string(spec_.modulus);
    case SubgroupSpec::Kind::FinitelyGenerated: {
      std::string s = "s" + std::to_string(vx.state);
      if (!vx.tail.empty()) {
        s += ":";
        for (LetterCode c : vx.tail) s += letterChar(c);
      }
      return s;
    }
  }
  return {};
}

void SchreierGraph::exportCsv(std::ostream& os) const {
  os << "src,dst,generator,sign\n";
  for (std::size_t v = 0; v < verts_.size(); ++v) {
    for (int g = 0; g < spec_.rank; ++g) {
      const LetterCode c = makeLetter(g, +1);
      const int t = verts_[v].next[c];
      if (t >= 0) os << v << "," << t << "," << g << ",+1\n";
    }
  }
}

RayProjection projectRay(const std::vector<LetterCode>& letters, SchreierGraph& g) {
  RayProjection proj;
  int v = g.base();
  proj.vertices.push_back(v);
  proj.distance.push_back(g.distToBase(v));
  for (LetterCode c : letters) {
    v = g.step(v, c);
    proj.vertices.push_back(v);
    proj.distance.push_back(g.distToBase(v));
  }
  return proj;
}

RayClassification classifyRay(const RayProjection& proj, int window, long bound) {
  const long n = static_cast<long>(proj.distance.size());
  if (n <= window) throw std::invalid_argument("insufficient horizon");
  RayClassification out;
  long lastReturn = -1;
  for (long i = 0; i < n; ++i) {
    if (proj.distance[static_cast<std::size_t>(i)] <= bound) {
      lastReturn = i;
      out.returns.push_back(i);
    }
  }
  const long certified = lastReturn + 1;
  if (n - certified >= window) {
    out.escaped = true;
    out.certifiedIndex = certified;
    out.returns.clear();
  }
  return out;
}

namespace {

long boundaryCount(SchreierGraph& g, const std::vector<int>& set) {
  std::set<int> inSet(set.begin(), set.end());
  long edges = 0;
  for (int v : set) {
    for (int c = 0; c < g.degree(); ++c) {
      const int t = g.stepIfPresent(v, static_cast<LetterCode>(c));
      if (t < 0) throw std::logic_error("folner candidate touches unexplored frontier");
      if (!inSet.count(t)) ++edges;
    }
  }
  return edges;
}

}  // namespace

std::vector<FolnerCandidate> folnerCandidates(SchreierGraph& g, FolnerStrategy strategy,
                                              int maxSize) {
  std::vector<FolnerCandidate> out;
  auto push = [&](std::vector<int> set) {
    if (set.empty()) return;
    FolnerCandidate c;
    c.boundaryEdges = boundaryCount(g, set);
    c.ratio = static_cast<double>(c.boundaryEdges) /
              (static_cast<double>(g.degree()) * static_cast<double>(set.size()));
    c.vertices = std::move(set);
    out.push_back(std::move(c));
  };

  switch (strategy) {
    case FolnerStrategy::Balls: {
      for (int r = 0; r <= g.exploredRadius() - 1; ++r) {
        std::vector<int> set;
        for (std::size_t v = 0; v < g.vertexCount(); ++v) {
          if (g.distToBase(static_cast<int>(v)) <= r) set.push_back(static_cast<int>(v));
        }
        if (static_cast<int>(set.size()) > maxSize) break;
        push(std::move(set));
      }
      break;
    }
    case FolnerStrategy::Intervals: {
      if (g.spec().kind != SubgroupSpec::Kind::KernelToLattice ||
          g.spec().weights.front().size() != 1) {
        throw std::invalid_argument("interval strategy needs a rank-1 lattice kernel");
      }
      // Consecutive integer cosets 0..n-1; materialize by walking a positively
      // weighted generator.
      std::map<long, int> byKey;
      for (std::size_t v = 0; v < g.vertexCount(); ++v) {
        // key = the lattice coordinate; reuse vertexName to avoid widening the
        // interface for a test-only accessor.
        const std::string name = g.vertexName(static_cast<int>(v));
        byKey[std::stol(name.substr(1, name.size() - 2))] = static_cast<int>(v);
      }
      std::vector<int> set;
      for (int n = 0; n < maxSize; ++n) {
        auto it = byKey.find(n);
        if (it == byKey.end()) break;
        set.push_back(it->second);
        push(set);
      }
      break;
    }
    case FolnerStrategy::Greedy: {
      std::vector<int> set = {g.base()};
      std::set<int> inSet(set.begin(), set.end());
      push(set);
      while (static_cast<int>(set.size()) < maxSize) {
        // Frontier vertices adjacent to the set.
        std::set<int> frontier;
        for (int v : set) {
          for (int c = 0; c < g.degree(); ++c) {
            const int t = g.stepIfPresent(v, static_cast<LetterCode>(c));
            if (t >= 0 && !inSet.count(t)) frontier.insert(t);
          }
        }
        int best = -1;
        long bestBoundary = -1;
        for (int f : frontier) {
          std::vector<int> trial = set;
          trial.push_back(f);
          long b;
          try {
            b = boundaryCount(g, trial);
          } catch (const std::logic_error&) {
            continue;  // would touch unexplored frontier
          }
          if (best < 0 || b < bestBoundary || (b == bestBoundary && f < best)) {
            best = f;
            bestBoundary = b;
          }
        }
        if (best < 0) break;
        set.push_back(best);
        inSet.insert(best);
        push(set);
      }
      break;
    }
  }
  return out;
}

}  // namespace tb

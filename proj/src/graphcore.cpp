#include "treebound/graphcore.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <queue>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tb {

int FiniteGraphCore::degree() const {
  std::vector<int> deg(static_cast<std::size_t>(vertexCount), 0);
  for (int t : tail) deg[static_cast<std::size_t>(t)]++;
  for (int v = 1; v < vertexCount; ++v) {
    if (deg[static_cast<std::size_t>(v)] != deg[0]) {
      throw std::invalid_argument("core is not regular");
    }
  }
  return deg.empty() ? 0 : deg[0];
}

int FiniteGraphCore::betti() const {
  return arcCount() / 2 - vertexCount + 1;
}

bool FiniteGraphCore::connected() const {
  if (vertexCount == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(vertexCount), 0);
  std::queue<int> q;
  seen[0] = 1;
  q.push(0);
  int n = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int e = 0; e < arcCount(); ++e) {
      if (tail[static_cast<std::size_t>(e)] == v) {
        const int h = head[static_cast<std::size_t>(e)];
        if (!seen[static_cast<std::size_t>(h)]) {
          seen[static_cast<std::size_t>(h)] = 1;
          ++n;
          q.push(h);
        }
      }
    }
  }
  return n == vertexCount;
}

void FiniteGraphCore::validate() const {
  if (vertexCount <= 0) throw std::invalid_argument("empty core");
  if (tail.size() != head.size() || tail.size() != rev.size()) {
    throw std::invalid_argument("inconsistent arc arrays");
  }
  for (int e = 0; e < arcCount(); ++e) {
    const int r = rev[static_cast<std::size_t>(e)];
    if (r < 0 || r >= arcCount() || rev[static_cast<std::size_t>(r)] != e || r == e) {
      throw std::invalid_argument("arc reversal is not a fixpoint-free involution");
    }
    if (tail[static_cast<std::size_t>(e)] != head[static_cast<std::size_t>(r)]) {
      throw std::invalid_argument("reversal endpoints mismatch");
    }
  }
  degree();  // throws if not regular
  if (!connected()) throw std::invalid_argument("core is disconnected");
  if (betti() < 1) throw std::invalid_argument("core must have a cycle");
}

void FiniteGraphCore::addEdge(int u, int v) {
  const int e = arcCount();
  tail.push_back(u);
  head.push_back(v);
  tail.push_back(v);
  head.push_back(u);
  rev.push_back(e + 1);
  rev.push_back(e);
}

FiniteGraphCore FiniteGraphCore::bouquet(int k) {
  FiniteGraphCore g;
  g.id = "bouquet" + std::to_string(k);
  g.vertexCount = 1;
  for (int i = 0; i < k; ++i) g.addEdge(0, 0);
  return g;
}

FiniteGraphCore FiniteGraphCore::theta() {
  FiniteGraphCore g;
  g.id = "theta";
  g.vertexCount = 2;
  g.addEdge(0, 1);
  g.addEdge(0, 1);
  g.addEdge(0, 1);
  return g;
}

FiniteGraphCore FiniteGraphCore::barbell() {
  FiniteGraphCore g;
  g.id = "barbell";
  g.vertexCount = 2;
  g.addEdge(0, 0);
  g.addEdge(0, 1);
  g.addEdge(1, 1);
  return g;
}

FiniteGraphCore FiniteGraphCore::cycle(int n) {
  FiniteGraphCore g;
  g.id = "cycle" + std::to_string(n);
  g.vertexCount = n;
  for (int i = 0; i < n; ++i) g.addEdge(i, (i + 1) % n);
  return g;
}

FiniteGraphCore FiniteGraphCore::randomRegular(int n, int d, std::uint64_t seed) {
  // Seeded pairing model, retried until simple-enough (no self-pair stubs)
  // and connected. Deterministic for a fixed seed.
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    }
    std::shuffle(stubs.begin(), stubs.end(), rng);
    FiniteGraphCore g;
    g.id = "random" + std::to_string(d) + "reg" + std::to_string(n);
    g.vertexCount = n;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      if (stubs[i] == stubs[i + 1]) {  // keep loop-free for variety vs barbell
        ok = false;
        break;
      }
      g.addEdge(stubs[i], stubs[i + 1]);
    }
    if (!ok || !g.connected()) continue;
    try {
      g.validate();
    } catch (const std::invalid_argument&) {
      continue;
    }
    return g;
  }
  throw std::runtime_error("failed to sample a regular core");
}

FiniteGraphCore FiniteGraphCore::fromEdgeList(std::istream& in) {
  FiniteGraphCore g;
  g.id = "file";
  int u, v;
  int maxV = -1;
  while (in >> u >> v) {
    g.addEdge(u, v);
    maxV = std::max({maxV, u, v});
  }
  g.vertexCount = maxV + 1;
  g.validate();
  return g;
}

namespace {

// Incoming sums per vertex, then subtract the reversed arc; both loops are
// data-parallel over fixed index ranges, so the parallel kernel is bit-equal
// to the serial one.
void nbMatvecImpl(const FiniteGraphCore& core, const std::vector<double>& x,
                  std::vector<double>& y, bool parallel) {
  const int V = core.vertexCount;
  const int E = core.arcCount();
  static thread_local std::vector<double> incoming;
  incoming.assign(static_cast<std::size_t>(V), 0.0);
  for (int e = 0; e < E; ++e) {
    incoming[static_cast<std::size_t>(core.head[static_cast<std::size_t>(e)])] +=
        x[static_cast<std::size_t>(e)];
  }
  y.resize(static_cast<std::size_t>(E));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int f = 0; f < E; ++f) {
      y[static_cast<std::size_t>(f)] =
          incoming[static_cast<std::size_t>(core.tail[static_cast<std::size_t>(f)])] -
          x[static_cast<std::size_t>(core.rev[static_cast<std::size_t>(f)])];
    }
  } else {
    for (int f = 0; f < E; ++f) {
      y[static_cast<std::size_t>(f)] =
          incoming[static_cast<std::size_t>(core.tail[static_cast<std::size_t>(f)])] -
          x[static_cast<std::size_t>(core.rev[static_cast<std::size_t>(f)])];
    }
  }
}

}  // namespace

void nbMatvec(const FiniteGraphCore& core, const std::vector<double>& x,
              std::vector<double>& y) {
  nbMatvecImpl(core, x, y, true);
}

void nbMatvecSerial(const FiniteGraphCore& core, const std::vector<double>& x,
                    std::vector<double>& y) {
  nbMatvecImpl(core, x, y, false);
}

std::vector<BigInt> nbPathTotals(const FiniteGraphCore& core, int maxLen) {
  const int E = core.arcCount();
  const int V = core.vertexCount;
  std::vector<BigInt> x(static_cast<std::size_t>(E), 1);
  std::vector<BigInt> totals;
  totals.reserve(static_cast<std::size_t>(maxLen) + 1);
  totals.push_back(E);
  std::vector<BigInt> incoming(static_cast<std::size_t>(V));
  std::vector<BigInt> y(static_cast<std::size_t>(E));
  for (int n = 1; n <= maxLen; ++n) {
    for (auto& b : incoming) b = 0;
    for (int e = 0; e < E; ++e) {
      incoming[static_cast<std::size_t>(core.head[static_cast<std::size_t>(e)])] +=
          x[static_cast<std::size_t>(e)];
    }
    BigInt total = 0;
    for (int f = 0; f < E; ++f) {
      y[static_cast<std::size_t>(f)] =
          incoming[static_cast<std::size_t>(core.tail[static_cast<std::size_t>(f)])] -
          x[static_cast<std::size_t>(core.rev[static_cast<std::size_t>(f)])];
      total += y[static_cast<std::size_t>(f)];
    }
    x.swap(y);
    totals.push_back(std::move(total));
  }
  return totals;
}

SpectralEstimate hashimotoRadius(const FiniteGraphCore& core, double tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  if (!core.connected()) throw std::invalid_argument("core is disconnected");
  const int E = core.arcCount();
  // Power iteration on B^2 (the square washes out period-2 oscillation of
  // bipartite cores); value = sqrt of the ell-1 growth ratio at a fixpoint.
  std::vector<double> x(static_cast<std::size_t>(E), 1.0);
  std::vector<double> y, z;
  double prev = -1.0;
  int it = 0;
  for (; it < 20000; ++it) {
    nbMatvec(core, x, y);
    nbMatvec(core, y, z);
    double num = 0.0;
    double den = 0.0;
    for (int e = 0; e < E; ++e) {
      num += z[static_cast<std::size_t>(e)];
      den += x[static_cast<std::size_t>(e)];
    }
    if (den == 0.0) throw std::runtime_error("operator annihilated the positive cone");
    const double lambda2 = num / den;
    const double lambda = std::sqrt(std::max(0.0, lambda2));
    // Normalize to keep the iterate bounded.
    const double scale = *std::max_element(z.begin(), z.end());
    for (auto& v : z) v /= scale;
    x.swap(z);
    if (prev >= 0.0 && std::abs(lambda - prev) <= tol * 0.5) {
      prev = lambda;
      break;
    }
    prev = lambda;
  }
  SpectralEstimate est;
  est.value = prev;
  est.tolerance = tol;
  est.iterations = it + 1;
  return est;
}

double grigorchukRadius(double omega, int d) {
  if (d < 3) throw std::invalid_argument("degree must be >= 3");
  if (omega < 0) throw std::invalid_argument("growth exponent must be >= 0");
  const double s = std::sqrt(static_cast<double>(d) - 1.0);
  const double g = std::exp(omega);
  if (g >= s) {
    return (s / d) * (s / g + g / s);
  }
  return 2.0 * s / d;
}

namespace {

double logOfBigInt(const BigInt& n) {
  if (n <= 0) throw std::domain_error("log of non-positive integer");
  const std::size_t bits = boost::multiprecision::msb(n);
  if (bits <= 52) return std::log(n.convert_to<double>());
  const BigInt shifted = n >> static_cast<unsigned>(bits - 52);
  return std::log(shifted.convert_to<double>()) +
         static_cast<double>(bits - 52) * std::log(2.0);
}

constexpr int kExactSteps = 256;  // exact integer numerators up to here

struct WalkAccumulator {
  double best = 0.0;
  std::vector<double> trajectory;  // running sup at even steps

  void record(int step, double logP) {
    const double est = std::exp(logP / static_cast<double>(step));
    best = std::max(best, est);
    trajectory.push_back(best);
  }
};

}  // namespace

std::vector<double> srwEstimateTrajectory(SchreierGraph& g, int maxSteps) {
  if (maxSteps < 2 || maxSteps % 2 != 0) {
    throw std::invalid_argument("max_steps must be even and >= 2");
  }
  const int d = g.degree();
  const double logD = std::log(static_cast<double>(d));
  // A walk of n steps stays within distance n/2 of base when measuring
  // p_2n at even times; materialize the half-radius ball.
  g.exploreToRadius(maxSteps / 2 + 1, SIZE_MAX);
  const std::size_t V = g.vertexCount();

  WalkAccumulator acc;

  // Exact phase: numerators over the implicit denominator d^step.
  std::vector<BigInt> num(V, 0), numNext(V);
  num[static_cast<std::size_t>(g.base())] = 1;
  int step = 0;
  for (; step < std::min(maxSteps, kExactSteps); ++step) {
    for (auto& b : numNext) b = 0;
    for (std::size_t v = 0; v < V; ++v) {
      if (num[v] == 0) continue;
      for (int c = 0; c < d; ++c) {
        const int t = g.stepIfPresent(static_cast<int>(v), static_cast<LetterCode>(c));
        if (t >= 0) numNext[static_cast<std::size_t>(t)] += num[v];
      }
    }
    num.swap(numNext);
    if ((step + 1) % 2 == 0) {
      const BigInt& p = num[static_cast<std::size_t>(g.base())];
      if (p > 0) acc.record(step + 1, logOfBigInt(p) - (step + 1) * logD);
    }
  }

  // Floating phase with deterministic renormalization.
  if (step < maxSteps) {
    std::vector<double> x(V, 0.0), y(V);
    double maxLog = -1e300;
    for (std::size_t v = 0; v < V; ++v) {
      if (num[v] != 0) maxLog = std::max(maxLog, logOfBigInt(num[v]));
    }
    for (std::size_t v = 0; v < V; ++v) {
      if (num[v] != 0) x[v] = std::exp(logOfBigInt(num[v]) - maxLog);
    }
    double logAcc = maxLog - step * logD;
    const int n = static_cast<int>(V);
    for (; step < maxSteps; ++step) {
#pragma omp parallel for schedule(static)
      for (int v = 0; v < n; ++v) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
          const int t = g.stepIfPresent(v, static_cast<LetterCode>(c));
          if (t >= 0) s += x[static_cast<std::size_t>(t)];
        }
        y[static_cast<std::size_t>(v)] = s;
      }
      x.swap(y);
      double scale = 0.0;
      for (double v : x) scale = std::max(scale, v);
      for (auto& v : x) v /= scale;
      logAcc += std::log(scale) - logD;
      if ((step + 1) % 2 == 0) {
        const double xb = x[static_cast<std::size_t>(g.base())];
        if (xb > 0) acc.record(step + 1, std::log(xb) + logAcc);
      }
    }
  }
  return acc.trajectory;
}

SpectralEstimate srwRadius(SchreierGraph& g, int maxSteps) {
  const auto traj = srwEstimateTrajectory(g, maxSteps);
  SpectralEstimate est;
  est.value = traj.empty() ? 0.0 : traj.back();
  est.tolerance = 0.0;  // certified lower bound, no upper tolerance claimed
  est.iterations = maxSteps;
  return est;
}

SpectralEstimate srwRadiusTree(int d, int maxSteps) {
  if (d < 3) throw std::invalid_argument("degree must be >= 3");
  if (maxSteps < 2 || maxSteps % 2 != 0) {
    throw std::invalid_argument("max_steps must be even and >= 2");
  }
  const double logD = std::log(static_cast<double>(d));
  const int R = maxSteps / 2 + 1;
  WalkAccumulator acc;

  // Radial birth-death chain: from 0 all d half-edges go out; from r >= 1
  // one half-edge goes in, d-1 go out.
  std::vector<BigInt> num(static_cast<std::size_t>(R) + 1, 0), numNext(num.size());
  num[0] = 1;
  int step = 0;
  for (; step < std::min(maxSteps, kExactSteps); ++step) {
    for (auto& b : numNext) b = 0;
    for (int r = 0; r <= R; ++r) {
      const BigInt& n = num[static_cast<std::size_t>(r)];
      if (n == 0) continue;
      if (r == 0) {
        numNext[1] += n * d;
      } else {
        numNext[static_cast<std::size_t>(r - 1)] += n;
        if (r + 1 <= R) numNext[static_cast<std::size_t>(r + 1)] += n * (d - 1);
      }
    }
    num.swap(numNext);
    if ((step + 1) % 2 == 0 && num[0] > 0) {
      acc.record(step + 1, logOfBigInt(num[0]) - (step + 1) * logD);
    }
  }

  if (step < maxSteps) {
    std::vector<double> x(num.size(), 0.0), y(num.size());
    double maxLog = -1e300;
    for (std::size_t r = 0; r < num.size(); ++r) {
      if (num[r] != 0) maxLog = std::max(maxLog, logOfBigInt(num[r]));
    }
    for (std::size_t r = 0; r < num.size(); ++r) {
      if (num[r] != 0) x[r] = std::exp(logOfBigInt(num[r]) - maxLog);
    }
    double logAcc = maxLog - step * logD;
    for (; step < maxSteps; ++step) {
      const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
      for (int r = 0; r < n; ++r) {
        double s = 0.0;
        if (r >= 1) s += (r == 1 ? d : d - 1) * x[static_cast<std::size_t>(r - 1)];
        if (r + 1 < n) s += x[static_cast<std::size_t>(r + 1)];
        y[static_cast<std::size_t>(r)] = s;
      }
      x.swap(y);
      double scale = 0.0;
      for (double v : x) scale = std::max(scale, v);
      for (auto& v : x) v /= scale;
      logAcc += std::log(scale) - logD;
      if ((step + 1) % 2 == 0 && x[0] > 0) {
        acc.record(step + 1, std::log(x[0]) + logAcc);
      }
    }
  }
  SpectralEstimate est;
  est.value = acc.best;
  est.tolerance = 0.0;
  est.iterations = maxSteps;
  return est;
}

AmenabilityReport amenabilityReport(SchreierGraph& g, int radius, int srwSteps,
                                    double cogrowthOmega) {
  AmenabilityReport rep;
  rep.graphId = "schreier";
  rep.degree = g.degree();
  g.exploreToRadius(radius + 1, SIZE_MAX);
  auto cands = folnerCandidates(g, FolnerStrategy::Balls, 1 << 22);
  for (const auto& c : cands) {
    if (rep.folnerBestRatio < 0 || c.ratio < rep.folnerBestRatio) {
      rep.folnerBestRatio = c.ratio;
    }
  }
  rep.srwLowerBound = srwRadius(g, srwSteps).value;
  if (cogrowthOmega >= 0) rep.grigorchukValue = grigorchukRadius(cogrowthOmega, g.degree());
  const bool folnerSmall = rep.folnerBestRatio >= 0 && rep.folnerBestRatio < 0.1;
  const bool srwNearOne = rep.srwLowerBound > 0.9;
  rep.consistent = (folnerSmall == srwNearOne);
  rep.note = folnerSmall ? "isoperimetric ratios shrink and SRW bound is near 1"
                         : "isoperimetric ratios stay bounded away from 0";
  return rep;
}

std::string toJson(const AmenabilityReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "{\"graph_id\":\"" << r.graphId << "\",\"d\":" << r.degree
     << ",\"folner_best\":" << r.folnerBestRatio << ",\"r_mc\":" << r.srwLowerBound
     << ",\"r_formula\":" << r.grigorchukValue << ",\"consistent\":"
     << (r.consistent ? "true" : "false") << ",\"note\":\"" << r.note << "\"}";
  return os.str();
}

}  // namespace tb

#include "minkowski/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minkowski/legendre.hpp"

namespace minkowski {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix weights(const MonotoneData& S, const Norm& N) {
  const int m = static_cast<int>(S.pairs.size());
  std::vector<Functional> L;
  L.reserve(S.pairs.size());
  for (const auto& p : S.pairs) L.push_back(legendre(N, p.w));
  Matrix c(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j)
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            L[static_cast<std::size_t>(i)](S.pairs[static_cast<std::size_t>(j)].x - S.pairs[static_cast<std::size_t>(i)].x);
  return c;
}

double edge_scale(const Matrix& c) {
  double s = 0.0;
  for (const auto& row : c)
    for (double v : row) s = std::max(s, std::abs(v));
  return 1.0 + s;
}

struct LongestPaths {
  std::vector<double> value;
  std::vector<int> pred;
  int still_relaxing = -1;  // a vertex improved in the last round
};

// |S| rounds of longest-path relaxation. `source` < 0 starts every vertex
// at 0 (virtual source), which exposes positive cycles anywhere.
LongestPaths relax(const Matrix& c, int source, double tol) {
  const int m = static_cast<int>(c.size());
  LongestPaths lp;
  lp.value.assign(static_cast<std::size_t>(m), source < 0 ? 0.0 : -std::numeric_limits<double>::infinity());
  lp.pred.assign(static_cast<std::size_t>(m), -1);
  if (source >= 0) lp.value[static_cast<std::size_t>(source)] = 0.0;
  for (int round = 0; round < m; ++round) {
    lp.still_relaxing = -1;
    for (int i = 0; i < m; ++i) {
      const double vi = lp.value[static_cast<std::size_t>(i)];
      if (!std::isfinite(vi)) continue;
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const double cand = vi + c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (cand > lp.value[static_cast<std::size_t>(j)] + tol) {
          lp.value[static_cast<std::size_t>(j)] = cand;
          lp.pred[static_cast<std::size_t>(j)] = i;
          lp.still_relaxing = j;
        }
      }
    }
    if (lp.still_relaxing < 0) break;
  }
  return lp;
}

// Walks predecessors from v until a vertex repeats and returns that cycle in
// forward order.
std::vector<int> extract_cycle(const std::vector<int>& pred, int v) {
  const int m = static_cast<int>(pred.size());
  for (int k = 0; k < m && pred[static_cast<std::size_t>(v)] >= 0; ++k) v = pred[static_cast<std::size_t>(v)];
  std::vector<int> cycle{v};
  int u = pred[static_cast<std::size_t>(v)];
  while (u >= 0 && u != v && static_cast<int>(cycle.size()) <= m) {
    cycle.push_back(u);
    u = pred[static_cast<std::size_t>(u)];
  }
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

std::vector<int> path_to(const std::vector<int>& pred, int source, int target) {
  std::vector<int> path{target};
  int u = target;
  while (u != source && static_cast<int>(path.size()) <= static_cast<int>(pred.size())) {
    u = pred[static_cast<std::size_t>(u)];
    if (u < 0) break;
    path.push_back(u);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

void MonotoneData::validate() const {
  if (pairs.empty()) throw DomainError("monotone data needs at least one pair");
  const int n = dimension();
  if (n < 1) throw DimensionError("pair vectors must be nonempty");
  for (const auto& p : pairs) {
    require_dimension(n, static_cast<int>(p.x.size()), "pair point");
    require_dimension(n, static_cast<int>(p.w.size()), "pair vector");
    require_finite(p.x, "pair point");
    require_finite(p.w, "pair vector");
  }
  if (base_index < 0 || base_index >= static_cast<int>(pairs.size()))
    throw DomainError("base_index out of range");
}

double chain_weight(const MonotoneData& S, const Norm& N, int i, int j) {
  const auto& a = S.pairs.at(static_cast<std::size_t>(i));
  const auto& b = S.pairs.at(static_cast<std::size_t>(j));
  return legendre(N, a.w)(b.x - a.x);
}

double cycle_weight(const MonotoneData& S, const Norm& N, const std::vector<int>& cycle) {
  double total = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k)
    total += chain_weight(S, N, cycle[k], cycle[(k + 1) % cycle.size()]);
  return total;
}

MonotoneReport cyclic_monotone_check(const MonotoneData& S, const Norm& N, const Tolerances& tol) {
  S.validate();
  require_dimension(S.dimension(), N.dimension(), "norm");
  const Matrix c = weights(S, N);
  const double eps = tol.eq_tol * edge_scale(c);
  MonotoneReport rep;

  const LongestPaths global = relax(c, -1, eps);
  if (global.still_relaxing >= 0) {
    rep.ok = false;
    rep.worst_cycle = extract_cycle(global.pred, global.still_relaxing);
    rep.slack = cycle_weight(S, N, rep.worst_cycle);
    if (rep.slack > eps) return rep;
  }

  rep.ok = true;
  const int base = S.base_index;
  const LongestPaths from_base = relax(c, base, eps);
  rep.worst_cycle = {base};
  rep.slack = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(c.size()); ++j) {
    if (j == base) continue;
    const double w = from_base.value[static_cast<std::size_t>(j)] + c[static_cast<std::size_t>(j)][static_cast<std::size_t>(base)];
    if (w > best) {
      best = w;
      rep.worst_cycle = path_to(from_base.pred, base, j);
    }
  }
  if (std::isfinite(best)) rep.slack = cycle_weight(S, N, rep.worst_cycle);
  return rep;
}

ConvexFunction rockafellar_potential(const MonotoneData& S, const Norm& N, const Tolerances& tol) {
  const MonotoneReport rep = cyclic_monotone_check(S, N, tol);
  if (!rep.ok)
    throw MonotonicityError("pairs are not norm cyclically monotone (cycle weight " + std::to_string(rep.slack) + ")",
                            rep.worst_cycle, rep.slack);
  const Matrix c = weights(S, N);
  const LongestPaths lp = relax(c, S.base_index, 0.0);
  std::vector<AffinePiece> pieces;
  pieces.reserve(S.pairs.size());
  for (std::size_t i = 0; i < S.pairs.size(); ++i) {
    const Functional phi = legendre(N, S.pairs[i].w);
    pieces.push_back({phi, lp.value[i] - phi(S.pairs[i].x)});
  }
  return ConvexFunction::max_affine(std::move(pieces));
}

}  // namespace minkowski

#include "pcl/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace pcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroFlow = 1e-15;

void validate(const TransportInstance& inst) {
  const auto n = inst.supplies.size();
  const auto m = inst.demands.size();
  if (inst.costs.rows() != n || inst.costs.cols() != m)
    throw std::invalid_argument("transport: cost matrix shape mismatch");
  if (n == 0 || m == 0) throw InfeasibleMarginals("transport: empty marginals");
  if (inst.supplies.minCoeff() < 0.0 || inst.demands.minCoeff() < 0.0)
    throw std::invalid_argument("transport: negative marginal entry");
  if (inst.costs.size() > 0 && inst.costs.minCoeff() < 0.0)
    throw std::invalid_argument("transport: negative cost entry");
  const double sp = inst.supplies.sum();
  const double sq = inst.demands.sum();
  if (std::abs(sp - 1.0) > kFeasTol || std::abs(sq - 1.0) > kFeasTol)
    throw InfeasibleMarginals("transport: marginals sum to " + std::to_string(sp) + " and " +
                              std::to_string(sq));
}

}  // namespace

TransportPlan solve_transport(const TransportInstance& inst) {
  validate(inst);

  // Strip zero supplies/demands; solve on the dense remainder.
  std::vector<int> rows, cols;
  for (int i = 0; i < inst.supplies.size(); ++i)
    if (inst.supplies[i] > 0.0) rows.push_back(i);
  for (int j = 0; j < inst.demands.size(); ++j)
    if (inst.demands[j] > 0.0) cols.push_back(j);
  const int nl = static_cast<int>(rows.size());
  const int nr = static_cast<int>(cols.size());

  Eigen::VectorXd p(nl), q(nr);
  Eigen::MatrixXd c(nl, nr);
  for (int i = 0; i < nl; ++i) p[i] = inst.supplies[rows[static_cast<size_t>(i)]];
  for (int j = 0; j < nr; ++j) q[j] = inst.demands[cols[static_cast<size_t>(j)]];
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j)
      c(i, j) = inst.costs(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);

  // Node layout: [0,nl) left, [nl,nl+nr) right, S = nl+nr, T = nl+nr+1.
  const int S = nl + nr, T = nl + nr + 1, N = nl + nr + 2;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(nl, nr);
  Eigen::VectorXd src_flow = Eigen::VectorXd::Zero(nl);  // S -> i
  Eigen::VectorXd snk_flow = Eigen::VectorXd::Zero(nr);  // j -> T
  std::vector<double> phi(static_cast<size_t>(N), 0.0);

  std::vector<double> dist(static_cast<size_t>(N));
  std::vector<int> parent(static_cast<size_t>(N));
  std::vector<bool> done(static_cast<size_t>(N));

  const long guard = 16 * static_cast<long>(N) * N + 64;
  const double push_target = std::min(p.sum(), q.sum()) - 1e-12;
  double pushed = 0.0;
  long rounds = 0;
  while (pushed < push_target) {
    if (++rounds > guard) throw std::logic_error("transport: augmentation guard tripped");

    // Dijkstra over reduced costs; array scan keeps ties on the lowest index.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), false);
    dist[static_cast<size_t>(S)] = 0.0;
    while (true) {
      int u = -1;
      double best = kInf;
      for (int v = 0; v < N; ++v)
        if (!done[static_cast<size_t>(v)] && dist[static_cast<size_t>(v)] < best) {
          best = dist[static_cast<size_t>(v)];
          u = v;
        }
      if (u < 0) break;
      done[static_cast<size_t>(u)] = true;
      auto relax = [&](int v, double arc_cost) {
        double rc = std::max(0.0, arc_cost + phi[static_cast<size_t>(u)] - phi[static_cast<size_t>(v)]);
        if (dist[static_cast<size_t>(u)] + rc < dist[static_cast<size_t>(v)]) {
          dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + rc;
          parent[static_cast<size_t>(v)] = u;
        }
      };
      if (u == S) {
        for (int i = 0; i < nl; ++i)
          if (src_flow[i] < p[i] - kZeroFlow) relax(i, 0.0);
      } else if (u < nl) {
        for (int j = 0; j < nr; ++j) relax(nl + j, c(u, j));
        if (src_flow[u] > kZeroFlow) relax(S, 0.0);
      } else if (u < nl + nr) {
        int j = u - nl;
        if (snk_flow[j] < q[j] - kZeroFlow) relax(T, 0.0);
        for (int i = 0; i < nl; ++i)
          if (flow(i, j) > kZeroFlow) relax(i, -c(i, j));
      } else if (u == T) {
        for (int j = 0; j < nr; ++j)
          if (snk_flow[j] > kZeroFlow) relax(nl + j, 0.0);
      }
    }
    if (dist[static_cast<size_t>(T)] == kInf)
      throw std::logic_error("transport: no augmenting path (unbalanced marginals?)");

    double bottleneck = kInf;
    for (int v = T; v != S; v = parent[static_cast<size_t>(v)]) {
      int u = parent[static_cast<size_t>(v)];
      if (u == S)
        bottleneck = std::min(bottleneck, p[v] - src_flow[v]);
      else if (v == T)
        bottleneck = std::min(bottleneck, q[u - nl] - snk_flow[u - nl]);
      else if (u < nl)
        ;  // forward arc, uncapacitated
      else
        bottleneck = std::min(bottleneck, flow(v, u - nl));  // reverse of v -> u
    }
    for (int v = T; v != S; v = parent[static_cast<size_t>(v)]) {
      int u = parent[static_cast<size_t>(v)];
      if (u == S)
        src_flow[v] += bottleneck;
      else if (v == T)
        snk_flow[u - nl] += bottleneck;
      else if (u < nl)
        flow(u, v - nl) += bottleneck;
      else
        flow(v, u - nl) -= bottleneck;
    }
    for (int v = 0; v < N; ++v)
      if (dist[static_cast<size_t>(v)] < kInf)
        phi[static_cast<size_t>(v)] +=
            std::min(dist[static_cast<size_t>(v)], dist[static_cast<size_t>(T)]);
    pushed += bottleneck;
  }

  // Duals: a_i = -phi(i), b_j = phi(j). Residual forward arcs give
  // a_i + b_j <= c(i,j); reverse arcs force equality on positive flow.
  TransportPlan plan;
  plan.flow = Eigen::MatrixXd::Zero(inst.supplies.size(), inst.demands.size());
  plan.row_potentials = Eigen::VectorXd::Zero(inst.supplies.size());
  plan.col_potentials = Eigen::VectorXd::Zero(inst.demands.size());
  double value = 0.0;
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j) {
      if (flow(i, j) <= kZeroFlow) continue;
      plan.flow(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]) = flow(i, j);
      value += flow(i, j) * c(i, j);
    }
  plan.value = value;
  for (int i = 0; i < nl; ++i) plan.row_potentials[rows[static_cast<size_t>(i)]] = -phi[static_cast<size_t>(i)];
  for (int j = 0; j < nr; ++j) plan.col_potentials[cols[static_cast<size_t>(j)]] = phi[static_cast<size_t>(nl + j)];
  // Stripped rows/columns carry no mass; pick the largest feasible potential.
  for (int i = 0; i < inst.supplies.size(); ++i) {
    if (inst.supplies[i] > 0.0) continue;
    double a = kInf;
    for (int j = 0; j < inst.demands.size(); ++j)
      a = std::min(a, inst.costs(i, j) - plan.col_potentials[j]);
    plan.row_potentials[i] = std::min(a, 0.0);
  }
  for (int j = 0; j < inst.demands.size(); ++j) {
    if (inst.demands[j] > 0.0) continue;
    double b = kInf;
    for (int i = 0; i < inst.supplies.size(); ++i)
      b = std::min(b, inst.costs(i, j) - plan.row_potentials[i]);
    plan.col_potentials[j] = std::min(b, 0.0);
  }
  return plan;
}

double transport_value(const Eigen::VectorXd& supplies, const Eigen::VectorXd& demands,
                       const Eigen::MatrixXd& costs) {
  return solve_transport({supplies, demands, costs}).value;
}

RelationFeasibility feasible_along_relation(const Eigen::VectorXd& supplies,
                                            const Eigen::VectorXd& demands,
                                            const std::function<bool(int, int)>& related) {
  const int n = static_cast<int>(supplies.size());
  const int m = static_cast<int>(demands.size());
  const int S = n + m, T = n + m + 1, N = n + m + 2;

  // Residual capacities; i -> j gets capacity 2 (total mass is 1).
  Eigen::MatrixXd cap = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < n; ++i) cap(S, i) = supplies[i];
  for (int j = 0; j < m; ++j) cap(n + j, T) = demands[j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (related(i, j)) cap(i, n + j) = 2.0;

  double pushed = 0.0;
  std::vector<int> parent(static_cast<size_t>(N));
  while (true) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[static_cast<size_t>(S)] = S;
    std::queue<int> bfs;
    bfs.push(S);
    while (!bfs.empty() && parent[static_cast<size_t>(T)] < 0) {
      int u = bfs.front();
      bfs.pop();
      for (int v = 0; v < N; ++v)
        if (parent[static_cast<size_t>(v)] < 0 && cap(u, v) > kZeroFlow) {
          parent[static_cast<size_t>(v)] = u;
          bfs.push(v);
        }
    }
    if (parent[static_cast<size_t>(T)] < 0) break;
    double bottleneck = kInf;
    for (int v = T; v != S; v = parent[static_cast<size_t>(v)])
      bottleneck = std::min(bottleneck, cap(parent[static_cast<size_t>(v)], v));
    for (int v = T; v != S; v = parent[static_cast<size_t>(v)]) {
      int u = parent[static_cast<size_t>(v)];
      cap(u, v) -= bottleneck;
      cap(v, u) += bottleneck;
    }
    pushed += bottleneck;
  }

  RelationFeasibility out;
  out.feasible = pushed >= 1.0 - kFeasTol;
  if (out.feasible) {
    Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (related(i, j)) plan(i, j) = cap(n + j, i);  // reverse residual = shipped flow
    out.plan = plan;
  }
  return out;
}

}  // namespace pcl

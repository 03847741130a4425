#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace pcl {

inline constexpr double kFeasTol = 1e-9;     // marginal feasibility
inline constexpr double kDualityTol = 1e-8;  // primal/dual gap

/// Finite transportation problem: supplies p, demands q, costs c in [0,1],
/// sum(p) = sum(q) = 1 within kFeasTol.
struct TransportInstance {
  Eigen::VectorXd supplies;
  Eigen::VectorXd demands;
  Eigen::MatrixXd costs;
};

/// Optimal plan with dual certificate: row sums = supplies and column sums =
/// demands within kFeasTol; potentials satisfy a_i + b_j <= c(i,j) + kFeasTol
/// everywhere, with equality on cells carrying flow.
struct TransportPlan {
  Eigen::MatrixXd flow;
  double value = 0.0;
  Eigen::VectorXd row_potentials;
  Eigen::VectorXd col_potentials;

  double dual_value(const TransportInstance& inst) const {
    return row_potentials.dot(inst.supplies) + col_potentials.dot(inst.demands);
  }
};

struct InfeasibleMarginals : std::runtime_error {
  explicit InfeasibleMarginals(const std::string& msg) : std::runtime_error(msg) {}
};

/// Successive-shortest-paths min-cost flow on the complete bipartite graph.
/// Zero supplies/demands are stripped before solving (their plan rows and
/// columns come back as zeros); Dijkstra ties break on the lowest index.
TransportPlan solve_transport(const TransportInstance& inst);

/// Convenience: optimal transportation value only.
double transport_value(const Eigen::VectorXd& supplies, const Eigen::VectorXd& demands,
                       const Eigen::MatrixXd& costs);

struct RelationFeasibility {
  bool feasible = false;
  std::optional<Eigen::MatrixXd> plan;
};

/// Decides whether a transportation plan from `supplies` to `demands` exists
/// that ships only along pairs with related(i,j), via max-flow value 1.
RelationFeasibility feasible_along_relation(const Eigen::VectorXd& supplies,
                                            const Eigen::VectorXd& demands,
                                            const std::function<bool(int, int)>& related);

}  // namespace pcl

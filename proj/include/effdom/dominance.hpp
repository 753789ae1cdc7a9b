#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "effdom/kernel.hpp"

namespace effdom {

enum class Relation { Dominates, Dominated, Equal, Incomparable };
std::string_view to_string(Relation r);

enum class OrderKind { Efficiency, Peskun };

struct PeskunViolation {
  std::size_t x = 0;
  std::size_t y = 0;
  double p = 0.0;
  double q = 0.0;
};

/// Verdict on "P over Q". For efficiency, min_eig_qp is the smallest
/// eigenvalue of Q - P on L^2_0(pi); min_eig_pq the same for P - Q.
struct DominanceReport {
  OrderKind kind = OrderKind::Efficiency;
  Relation relation = Relation::Incomparable;
  std::optional<double> min_eig_qp;
  std::optional<double> min_eig_pq;
  double tolerance = 0.0;
  double max_entry_difference = 0.0;
  bool hypotheses_verified = true;
  std::vector<PeskunViolation> witness;  // Peskun only: entries with p[x,y] < q[x,y]

  /// P is at least as good as Q (dominates or equal).
  bool p_dominates() const noexcept {
    return relation == Relation::Dominates || relation == Relation::Equal;
  }
  std::string summary() const;
};

struct DominanceOptions {
  double tol_pos = tol::kPositive;
  // Skip the irreducibility requirement; the report is marked unverified.
  bool unchecked = false;
};

/// Spectrum of Q - P restricted to L^2_0(pi), ascending. No irreducibility
/// requirement; both kernels must be reversible for `pi`.
Vector restricted_difference_spectrum(const TransitionKernel& p, const TransitionKernel& q,
                                      const StationaryDistribution& pi);

DominanceReport covariance_dominance(const TransitionKernel& p, const TransitionKernel& q,
                                     const StationaryDistribution& pi,
                                     const DominanceOptions& options = {});

/// Same decision as covariance_dominance; the summary speaks of variances.
DominanceReport efficiency_dominates(const TransitionKernel& p, const TransitionKernel& q,
                                     const StationaryDistribution& pi,
                                     const DominanceOptions& options = {});

/// Off-diagonal comparison p[x,y] >= q[x,y] - tol for all x != y.
DominanceReport peskun_dominates(const TransitionKernel& p, const TransitionKernel& q,
                                 const StationaryDistribution& pi,
                                 double tol_pesk = tol::kPeskun);

bool is_antithetic(const TransitionKernel& p, const StationaryDistribution& pi,
                   double tol_pos = tol::kPositive);

struct MixtureReport {
  std::vector<double> component_min_eig;  // min eigenvalue of Q_k - P_k on L^2_0
  bool premise_holds = false;
  DominanceReport conclusion;  // mixture P over mixture Q
};

MixtureReport mixture_dominance_check(std::span<const TransitionKernel> ps,
                                      std::span<const TransitionKernel> qs,
                                      std::span<const double> alpha,
                                      const StationaryDistribution& pi,
                                      const DominanceOptions& options = {});

struct NamedKernel {
  std::string name;
  TransitionKernel kernel;
};

struct HasseDiagram {
  // Each node groups the input kernels judged equal; names in input order.
  std::vector<std::vector<std::string>> nodes;
  // Covering pairs (a, b): node a dominates node b with nothing in between.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // Triples (a, b, c) with a > b > c but a not over c, by node index.
  std::vector<std::array<std::size_t, 3>> transitivity_violations;
  bool acyclic = true;
  // pairwise[i][j]: verdict of input kernel i over input kernel j.
  std::vector<std::vector<Relation>> pairwise;

  std::string node_label(std::size_t i) const;
  /// One "a > b" line per covering edge.
  std::string edge_list() const;
};

HasseDiagram partial_order_diagram(const std::vector<NamedKernel>& kernels,
                                   const StationaryDistribution& pi,
                                   const DominanceOptions& options = {});

struct LoewnerReport {
  bool order_holds = false;     // t <= m, i.e. m - t positive semidefinite
  bool inverse_holds = false;   // m^-1 <= t^-1
  double min_eig_order = 0.0;   // min eigenvalue of m - t
  double min_eig_inverse = 0.0; // min eigenvalue of t^-1 - m^-1
  double tolerance = 0.0;          // band applied to min_eig_order
  double tolerance_inverse = 0.0;  // band applied to min_eig_inverse

  bool agree() const noexcept { return order_holds == inverse_holds; }
};

LoewnerReport loewner_inversion_check(const Eigen::MatrixXd& t, const Eigen::MatrixXd& m,
                                      double tol_pos = tol::kPositive);

}  // namespace effdom

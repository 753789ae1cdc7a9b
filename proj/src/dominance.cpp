#include "effdom/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "effdom/spectral.hpp"
#include "effdom/symmetric_eigen.hpp"

namespace effdom {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Dominates: return "dominates";
    case Relation::Dominated: return "dominated";
    case Relation::Equal: return "equal";
    case Relation::Incomparable: return "incomparable";
  }
  return "unknown";
}

std::string DominanceReport::summary() const {
  const bool peskun = kind == OrderKind::Peskun;
  std::string text;
  switch (relation) {
    case Relation::Dominates:
      text = peskun ? "P moves at least as much off-diagonal mass as Q from every state"
                    : "v(f,P) <= v(f,Q) for every observable f";
      break;
    case Relation::Dominated:
      text = peskun ? "Q moves at least as much off-diagonal mass as P from every state"
                    : "v(f,Q) <= v(f,P) for every observable f";
      break;
    case Relation::Equal:
      text = peskun ? "P and Q have identical off-diagonal mass"
                    : "v(f,P) = v(f,Q) for every observable f";
      break;
    case Relation::Incomparable:
      text = peskun ? "neither kernel moves more mass everywhere"
                    : "each kernel has a strictly lower variance for some observable";
      break;
  }
  if (!hypotheses_verified) text += " (hypotheses not verified)";
  return text;
}

namespace {

void require_target(const TransitionKernel& k, const StationaryDistribution& pi, const char* which) {
  if (k.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, std::string(which) + " and pi differ in dimension");
  if (k.validated_for() && !k.validated_for()->approx_equal(pi))
    throw Error(ErrorCode::DifferentStationary,
                std::string(which) + " was validated for a different target distribution");
  if (!k.reversible_for(pi))
    throw Error(ErrorCode::NotReversible, std::string(which) + " is not reversible for pi");
}

Eigen::MatrixXd symmetrized(const Matrix& a, const StationaryDistribution& pi) {
  const Vector sqrt_pi = pi.vector().cwiseSqrt();
  Eigen::MatrixXd s = sqrt_pi.asDiagonal() * a * sqrt_pi.cwiseInverse().asDiagonal();
  return 0.5 * (s + s.transpose());
}

double band(double tol_pos, const Vector& spectrum) {
  const double norm = spectrum.size() ? spectrum.cwiseAbs().maxCoeff() : 0.0;
  return tol_pos * std::max(1.0, norm);
}

}  // namespace

Vector restricted_difference_spectrum(const TransitionKernel& p, const TransitionKernel& q,
                                      const StationaryDistribution& pi) {
  if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "P and Q differ in dimension");
  require_target(p, pi, "P");
  require_target(q, pi, "Q");
  const Matrix diff = q.matrix() - p.matrix();
  return restricted_eigenvalues(symmetrized(diff, pi), pi.vector().cwiseSqrt().normalized());
}

DominanceReport covariance_dominance(const TransitionKernel& p, const TransitionKernel& q,
                                     const StationaryDistribution& pi,
                                     const DominanceOptions& options) {
  if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "P and Q differ in dimension");
  require_target(p, pi, "P");
  require_target(q, pi, "Q");
  if (!options.unchecked) {
    if (!check_irreducible(p)) throw Error(ErrorCode::NotIrreducible, "P is not irreducible");
    if (!check_irreducible(q)) throw Error(ErrorCode::NotIrreducible, "Q is not irreducible");
  }

  const Vector spectrum = restricted_difference_spectrum(p, q, pi);
  DominanceReport r;
  r.kind = OrderKind::Efficiency;
  r.hypotheses_verified = !options.unchecked;
  r.min_eig_qp = spectrum.size() ? spectrum[0] : 0.0;
  r.min_eig_pq = spectrum.size() ? -spectrum[spectrum.size() - 1] : 0.0;
  r.tolerance = band(options.tol_pos, spectrum);
  r.max_entry_difference = (p.matrix() - q.matrix()).cwiseAbs().maxCoeff();

  const bool p_over_q = *r.min_eig_qp >= -r.tolerance;
  const bool q_over_p = *r.min_eig_pq >= -r.tolerance;
  if (p_over_q && q_over_p) {
    if (r.max_entry_difference <= static_cast<double>(p.size()) * r.tolerance) {
      r.relation = Relation::Equal;
    } else {
      // Both quadratic-form tests pass only inside the tolerance band; keep
      // the direction with more room.
      r.relation = *r.min_eig_qp >= *r.min_eig_pq ? Relation::Dominates : Relation::Dominated;
    }
  } else if (p_over_q) {
    r.relation = Relation::Dominates;
  } else if (q_over_p) {
    r.relation = Relation::Dominated;
  } else {
    r.relation = Relation::Incomparable;
  }
  return r;
}

DominanceReport efficiency_dominates(const TransitionKernel& p, const TransitionKernel& q,
                                     const StationaryDistribution& pi,
                                     const DominanceOptions& options) {
  return covariance_dominance(p, q, pi, options);
}

DominanceReport peskun_dominates(const TransitionKernel& p, const TransitionKernel& q,
                                 const StationaryDistribution& pi, double tol_pesk) {
  if (p.size() != q.size() || p.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "P, Q and pi must share a dimension");
  DominanceReport r;
  r.kind = OrderKind::Peskun;
  r.tolerance = tol_pesk;
  bool q_over_p = true;
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (x == y) continue;
      const double pv = p(x, y);
      const double qv = q(x, y);
      r.max_entry_difference = std::max(r.max_entry_difference, std::abs(pv - qv));
      if (pv < qv - tol_pesk) r.witness.push_back({x, y, pv, qv});
      if (qv < pv - tol_pesk) q_over_p = false;
    }
  }
  std::stable_sort(r.witness.begin(), r.witness.end(),
                   [](const PeskunViolation& a, const PeskunViolation& b) {
                     return (a.q - a.p) > (b.q - b.p);
                   });
  const bool p_over_q = r.witness.empty();
  if (p_over_q && q_over_p) r.relation = Relation::Equal;
  else if (p_over_q) r.relation = Relation::Dominates;
  else if (q_over_p) r.relation = Relation::Dominated;
  else r.relation = Relation::Incomparable;
  return r;
}

bool is_antithetic(const TransitionKernel& p, const StationaryDistribution& pi, double tol_pos) {
  const auto dec = eigendecompose_restricted(p, pi);
  return dec.max_eigenvalue() <= tol_pos;
}

MixtureReport mixture_dominance_check(std::span<const TransitionKernel> ps,
                                      std::span<const TransitionKernel> qs,
                                      std::span<const double> alpha,
                                      const StationaryDistribution& pi,
                                      const DominanceOptions& options) {
  if (ps.size() != qs.size())
    throw Error(ErrorCode::DimensionMismatch, "component lists differ in length");
  MixtureReport out;
  out.premise_holds = true;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Vector spectrum = restricted_difference_spectrum(ps[k], qs[k], pi);
    const double min_eig = spectrum.size() ? spectrum[0] : 0.0;
    out.component_min_eig.push_back(min_eig);
    if (min_eig < -band(options.tol_pos, spectrum)) out.premise_holds = false;
  }
  const auto p = make_mixture(ps, alpha);
  const auto q = make_mixture(qs, alpha);
  out.conclusion = covariance_dominance(p, q, pi, options);
  return out;
}

std::string HasseDiagram::node_label(std::size_t i) const {
  std::string label;
  for (const auto& name : nodes.at(i)) {
    if (!label.empty()) label += " = ";
    label += name;
  }
  return label;
}

std::string HasseDiagram::edge_list() const {
  std::ostringstream os;
  for (const auto& [a, b] : edges) os << node_label(a) << " > " << node_label(b) << '\n';
  return os.str();
}

HasseDiagram partial_order_diagram(const std::vector<NamedKernel>& kernels,
                                   const StationaryDistribution& pi,
                                   const DominanceOptions& options) {
  const std::size_t count = kernels.size();
  for (const auto& k : kernels)
    if (k.kernel.size() != pi.size())
      throw Error(ErrorCode::DimensionMismatch, "kernel '" + k.name + "' does not match pi");

  HasseDiagram diagram;
  diagram.pairwise.assign(count, std::vector<Relation>(count, Relation::Equal));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const auto r = covariance_dominance(kernels[i].kernel, kernels[j].kernel, pi, options);
      diagram.pairwise[i][j] = r.relation;
      diagram.pairwise[j][i] = r.relation == Relation::Dominates   ? Relation::Dominated
                               : r.relation == Relation::Dominated ? Relation::Dominates
                                                                   : r.relation;
    }
  }

  // Merge equal kernels; the smallest input index represents its class.
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (diagram.pairwise[i][j] == Relation::Equal) {
        const auto a = find(i);
        const auto b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<std::size_t> node_of(count);
  std::vector<std::size_t> representative;
  for (std::size_t i = 0; i < count; ++i) {
    if (find(i) == i) {
      node_of[i] = representative.size();
      representative.push_back(i);
      diagram.nodes.emplace_back();
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    node_of[i] = node_of[find(i)];
    diagram.nodes[node_of[i]].push_back(kernels[i].name);
  }

  const std::size_t m = representative.size();
  std::vector<std::vector<bool>> above(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      above[a][b] = a != b && diagram.pairwise[representative[a]][representative[b]] == Relation::Dominates;

  auto reach = above;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      if (reach[a][c])
        for (std::size_t b = 0; b < m; ++b)
          if (reach[c][b]) reach[a][b] = true;
  for (std::size_t a = 0; a < m; ++a)
    if (reach[a][a]) diagram.acyclic = false;

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        if (above[a][b] && above[b][c] && a != c && !above[a][c])
          diagram.transitivity_violations.push_back({a, b, c});

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (!above[a][b]) continue;
      bool covered = true;
      for (std::size_t c = 0; c < m && covered; ++c)
        if (c != a && c != b && above[a][c] && reach[c][b]) covered = false;
      if (covered) diagram.edges.emplace_back(a, b);
    }
  }
  return diagram;
}

LoewnerReport loewner_inversion_check(const Eigen::MatrixXd& t, const Eigen::MatrixXd& m,
                                      double tol_pos) {
  if (t.rows() != t.cols() || m.rows() != m.cols() || t.rows() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "Loewner check needs two square matrices of one size");
  for (const auto* a : {&t, &m}) {
    const double scale = std::max(1.0, a->cwiseAbs().maxCoeff());
    if ((*a - a->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw Error(ErrorCode::NotSymmetric, "Loewner operand is not symmetric");
    const Eigen::MatrixXd sym = 0.5 * (*a + a->transpose());
    if (jacobi_eigen(sym).values.minCoeff() <= tol_pos)
      throw Error(ErrorCode::NotPositiveDefinite, "Loewner operand is not positive definite");
  }

  const Eigen::MatrixXd ts = 0.5 * (t + t.transpose());
  const Eigen::MatrixXd ms = 0.5 * (m + m.transpose());
  const auto n = t.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd t_inv = ts.llt().solve(eye);
  const Eigen::MatrixXd m_inv = ms.llt().solve(eye);

  Eigen::MatrixXd gap = ms - ts;
  Eigen::MatrixXd inverse_gap = t_inv - m_inv;
  gap = 0.5 * (gap + gap.transpose()).eval();
  inverse_gap = 0.5 * (inverse_gap + inverse_gap.transpose()).eval();
  const Vector order_spectrum = jacobi_eigen(gap).values;
  const Vector inverse_spectrum = jacobi_eigen(inverse_gap).values;

  LoewnerReport r;
  r.min_eig_order = order_spectrum.minCoeff();
  r.min_eig_inverse = inverse_spectrum.minCoeff();
  r.tolerance = band(tol_pos, order_spectrum);
  r.tolerance_inverse = band(tol_pos, inverse_spectrum);
  r.order_holds = r.min_eig_order >= -r.tolerance;
  r.inverse_holds = r.min_eig_inverse >= -r.tolerance_inverse;
  return r;
}

}  // namespace effdom

#include <gtest/gtest.h>

#include <functional>

#include "effdom/dominance.hpp"
#include "effdom/families.hpp"
#include "effdom/spectral.hpp"
#include "testing.hpp"

using namespace effdom;

namespace {

StationaryDistribution half() { return families::uniform(2); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an effdom::Error";
  return ErrorCode::InvalidArgument;
}

TransitionKernel k3(std::initializer_list<double> rows, const StationaryDistribution& pi) {
  Matrix m(3, 3);
  auto it = rows.begin();
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) m(x, y) = *it++;
  return validate_kernel(m, pi);
}

// <f, (Q - P) f>_pi by the Dirichlet-form expression.
double dirichlet_difference(const Matrix& p, const Matrix& q, const StationaryDistribution& pi, const Vector& f) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < f.size(); ++x)
    for (Eigen::Index y = 0; y < f.size(); ++y) {
      const double delta = x == y ? 1.0 : 0.0;
      const double d = f[x] - f[y];
      s += 0.5 * pi.vector()[x] * d * d * (delta + p(x, y) - q(x, y));
    }
  return s;
}

}  // namespace

// Two-state examples

TEST(Covariance, FlipNineDominatesFlipSix) {
  const auto r = covariance_dominance(families::two_state_flip(0.9), families::two_state_flip(0.6), half());
  EXPECT_EQ(r.relation, Relation::Dominates);
  ASSERT_TRUE(r.min_eig_qp);
  EXPECT_NEAR(*r.min_eig_qp, 0.6, 1e-14);
  EXPECT_TRUE(r.p_dominates());
  EXPECT_TRUE(r.hypotheses_verified);
}

TEST(Covariance, FlipNineOverIid) {
  const auto r = covariance_dominance(families::two_state_flip(0.9), make_iid(half()), half());
  EXPECT_EQ(r.relation, Relation::Dominates);
  EXPECT_NEAR(*r.min_eig_qp, 0.8, 1e-14);
}

TEST(Covariance, IidOverLazyFlip) {
  const auto r = covariance_dominance(make_iid(half()), families::two_state_flip(0.25), half());
  EXPECT_EQ(r.relation, Relation::Dominates);
  const auto back = covariance_dominance(families::two_state_flip(0.25), make_iid(half()), half());
  EXPECT_EQ(back.relation, Relation::Dominated);
  EXPECT_FALSE(back.p_dominates());
}

TEST(Covariance, SelfComparisonIsEqual) {
  const auto k = families::two_state_flip(0.3);
  const auto r = covariance_dominance(k, k, half());
  EXPECT_EQ(r.relation, Relation::Equal);
  EXPECT_EQ(r.max_entry_difference, 0.0);
}

TEST(Covariance, ErrorPaths) {
  const auto id = validate_kernel(Matrix::Identity(2, 2), half());
  const auto flip = families::two_state_flip(0.5);
  EXPECT_EQ(code_of([&] { covariance_dominance(id, flip, half()); }), ErrorCode::NotIrreducible);
  DominanceOptions unchecked;
  unchecked.unchecked = true;
  const auto r = covariance_dominance(id, flip, half(), unchecked);
  EXPECT_FALSE(r.hypotheses_verified);
  EXPECT_EQ(r.relation, Relation::Dominated);

  const auto three = families::cycle_walk(3, 0.5);
  EXPECT_EQ(code_of([&] { covariance_dominance(flip, three, half()); }), ErrorCode::DimensionMismatch);

  const StationaryDistribution other(Vector{{0.75, 0.25}});
  const auto skewed = validate_kernel(Matrix{{{0.5, 0.5}, {0.5, 0.5}}}, half());
  EXPECT_EQ(code_of([&] { covariance_dominance(flip, skewed, other); }), ErrorCode::DifferentStationary);

  const auto pi3 = families::uniform(3);
  const auto rotation = k3({0, 1, 0, 0, 0, 1, 1, 0, 0}, pi3);
  EXPECT_EQ(code_of([&] { covariance_dominance(rotation, three, pi3); }), ErrorCode::NotReversible);
}

TEST(Covariance, MixedSignIsIncomparable) {
  // Lazy-ish on one direction, fast on another.
  const auto pi = families::uniform(3);
  const auto p = k3({0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0}, pi);
  const auto q = k3({0.1, 0.0, 0.9, 0.0, 1.0 - 0.1, 0.1, 0.9, 0.1, 0.0}, pi);
  const auto spec = restricted_difference_spectrum(p, q, pi);
  ASSERT_LT(spec[0], -1e-6);
  ASSERT_GT(spec[1], 1e-6);
  EXPECT_EQ(covariance_dominance(p, q, pi).relation, Relation::Incomparable);
  EXPECT_EQ(covariance_dominance(q, p, pi).relation, Relation::Incomparable);
}

TEST(Covariance, QuadraticFormIdentity) {
  testkit::Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 12);
    const auto p = testkit::random_reversible(rng, pi);
    const auto q = testkit::random_reversible(rng, pi);
    const auto f = testkit::random_centered(rng, pi);
    const PiInnerProduct ip(pi);
    const double direct = ip(f.f, (q.matrix() - p.matrix()) * f.f);
    EXPECT_NEAR(direct, dirichlet_difference(p.matrix(), q.matrix(), pi, f.f), 1e-12);
  }
}

TEST(Covariance, VerdictMatchesVarianceOrderingForSampledObservables) {
  testkit::Rng rng(67);
  int definite = 0;
  for (int trial = 0; trial < 200 && definite < 30; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 6);
    const auto q = testkit::random_reversible(rng, pi);
    const auto p = testkit::boost_off_diagonal(rng, q, pi, 4);
    const auto r = covariance_dominance(p, q, pi);
    if (r.relation != Relation::Dominates) continue;
    ++definite;
    for (int s = 0; s < 20; ++s) {
      const auto f = testkit::random_centered(rng, pi);
      EXPECT_LE(asymptotic_variance_spectral(f, p, pi).value, asymptotic_variance_spectral(f, q, pi).value + 1e-8);
    }
  }
  EXPECT_GE(definite, 10);
}

// Peskun

TEST(Peskun, FlipNineOverFlipSix) {
  const auto r = peskun_dominates(families::two_state_flip(0.9), families::two_state_flip(0.6), half());
  EXPECT_EQ(r.kind, OrderKind::Peskun);
  EXPECT_EQ(r.relation, Relation::Dominates);
  EXPECT_TRUE(r.witness.empty());
}

TEST(Peskun, WitnessNamesTheOffendingEntry) {
  const auto r = peskun_dominates(families::two_state_flip(0.6), families::two_state_flip(0.9), half());
  EXPECT_EQ(r.relation, Relation::Dominated);
  ASSERT_FALSE(r.witness.empty());
  EXPECT_EQ(r.witness[0].x, 0u);
  EXPECT_EQ(r.witness[0].y, 1u);
  EXPECT_DOUBLE_EQ(r.witness[0].p, 0.6);
  EXPECT_DOUBLE_EQ(r.witness[0].q, 0.9);
}

TEST(Peskun, ImpliesEfficiencyOnRandomPairs) {
  testkit::Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 12);
    const auto q = testkit::random_reversible(rng, pi);
    const auto p = trial % 2 == 0 ? testkit::boost_off_diagonal(rng, q, pi, 3)
                                  : q;  // reflexive case mixed in
    const auto lazy_q = make_lazy(q, 0.4);
    ASSERT_TRUE(peskun_dominates(p, q, pi).p_dominates());
    ASSERT_TRUE(peskun_dominates(q, lazy_q, pi).p_dominates());
    EXPECT_GE(restricted_difference_spectrum(p, q, pi).minCoeff(), -1e-8);
    EXPECT_GE(restricted_difference_spectrum(q, lazy_q, pi).minCoeff(), -1e-8);
  }
}

TEST(Peskun, ConverseFailsOnFixedFixture) {
  const auto pi = families::uniform(3);
  const auto p = k3({0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0}, pi);
  const auto q = k3({0.3, 0.6, 0.1, 0.6, 0.3, 0.1, 0.1, 0.1, 0.8}, pi);
  const auto eff = efficiency_dominates(p, q, pi);
  EXPECT_EQ(eff.relation, Relation::Dominates);
  EXPECT_NEAR(*eff.min_eig_qp, 0.2, 1e-12);
  const auto pes = peskun_dominates(p, q, pi);
  EXPECT_FALSE(pes.p_dominates());
  ASSERT_FALSE(pes.witness.empty());
  EXPECT_DOUBLE_EQ(pes.witness[0].q - pes.witness[0].p, 0.1);
}

TEST(Peskun, RandomSearchFindsEfficiencyWithoutPeskun) {
  testkit::Rng rng(73);
  bool found = false;
  for (int trial = 0; trial < 2000 && !found; ++trial) {
    const auto pi = testkit::random_distribution(rng, 3 + static_cast<std::size_t>(trial) % 3);
    const auto p = testkit::random_reversible(rng, pi, 1.0, 0.0);
    const auto q = testkit::random_reversible(rng, pi, 1.0, 0.5);
    if (efficiency_dominates(p, q, pi).relation == Relation::Dominates &&
        !peskun_dominates(p, q, pi).p_dominates())
      found = true;
  }
  EXPECT_TRUE(found);
}

// Antithetic

TEST(Antithetic, Examples) {
  EXPECT_TRUE(is_antithetic(families::two_state_flip(0.9), half()));
  EXPECT_TRUE(is_antithetic(families::two_state_flip(0.5), half()));
  EXPECT_FALSE(is_antithetic(families::two_state_flip(0.25), half()));
  EXPECT_TRUE(is_antithetic(families::cycle_walk(4, 0.0), families::uniform(4)));
  EXPECT_FALSE(is_antithetic(families::cycle_walk(4, 0.5), families::uniform(4)));
}

TEST(Antithetic, AgreesWithDominanceOverIid) {
  testkit::Rng rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 10);
    const auto p = testkit::random_reversible(rng, pi, 0.8, trial % 3 == 0 ? 0.0 : 0.5);
    EXPECT_EQ(is_antithetic(p, pi), efficiency_dominates(p, make_iid(pi), pi).p_dominates());
  }
}

// Mixtures

TEST(Mixture, LazyComponentsPreserveDominance) {
  const auto pi = half();
  const std::vector<TransitionKernel> ps{families::two_state_flip(0.9), families::two_state_flip(0.7)};
  const std::vector<TransitionKernel> qs{make_lazy(ps[0], 0.3), make_lazy(ps[1], 0.3)};
  const std::vector<double> alpha{0.4, 0.6};
  const auto r = mixture_dominance_check(ps, qs, alpha, pi);
  EXPECT_TRUE(r.premise_holds);
  ASSERT_EQ(r.component_min_eig.size(), 2u);
  EXPECT_TRUE(r.conclusion.p_dominates());
}

TEST(Mixture, SingleComponentReducesToPairwise) {
  const auto pi = half();
  const std::vector<TransitionKernel> ps{families::two_state_flip(0.9)};
  const std::vector<TransitionKernel> qs{families::two_state_flip(0.6)};
  const std::vector<double> alpha{1.0};
  const auto r = mixture_dominance_check(ps, qs, alpha, pi);
  const auto direct = covariance_dominance(ps[0], qs[0], pi);
  EXPECT_EQ(r.conclusion.relation, direct.relation);
  EXPECT_NEAR(*r.conclusion.min_eig_qp, *direct.min_eig_qp, 1e-14);
  EXPECT_NEAR(r.component_min_eig[0], *direct.min_eig_qp, 1e-14);
}

TEST(Mixture, SwappedComponentsGiveEqualMixturesWithFailingPremise) {
  const StationaryDistribution pi(Vector{{0.5, 0.3, 0.2}});
  const auto p1 = make_metropolis_hastings(families::uniform_proposal(3), pi);
  const auto p2 = make_lazy(p1, 0.5);
  const std::vector<TransitionKernel> ps{p1, p2};
  const std::vector<TransitionKernel> qs{p2, p1};
  const std::vector<double> alpha{0.5, 0.5};
  const auto r = mixture_dominance_check(ps, qs, alpha, pi);
  EXPECT_FALSE(r.premise_holds);
  EXPECT_EQ(r.conclusion.relation, Relation::Equal);
}

TEST(Mixture, RandomComponentwiseDominanceCarriesOver) {
  testkit::Rng rng(83);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 8);
    const std::size_t l = 1 + static_cast<std::size_t>(trial) % 4;
    std::vector<TransitionKernel> ps, qs;
    std::vector<double> alpha;
    for (std::size_t i = 0; i < l; ++i) {
      const auto q = testkit::random_reversible(rng, pi);
      ps.push_back(testkit::boost_off_diagonal(rng, q, pi, 2));
      qs.push_back(q);
      alpha.push_back(u(rng));
    }
    double s = 0.0;
    for (double a : alpha) s += a;
    for (double& a : alpha) a /= s;
    const auto r = mixture_dominance_check(ps, qs, alpha, pi);
    ASSERT_TRUE(r.premise_holds);
    EXPECT_TRUE(r.conclusion.p_dominates());
  }
}

// Hasse diagram

TEST(Hasse, FlipChain) {
  const std::vector<NamedKernel> ks{{"flip0.25", families::two_state_flip(0.25)},
                                    {"flip0.9", families::two_state_flip(0.9)},
                                    {"flip0.5", families::two_state_flip(0.5)}};
  const auto d = partial_order_diagram(ks, half());
  EXPECT_TRUE(d.acyclic);
  EXPECT_TRUE(d.transitivity_violations.empty());
  ASSERT_EQ(d.nodes.size(), 3u);
  EXPECT_EQ(d.edges.size(), 2u);
  EXPECT_EQ(d.edge_list(), "flip0.9 > flip0.5\nflip0.5 > flip0.25\n");
}

TEST(Hasse, EqualKernelsShareANode) {
  const auto k = families::two_state_flip(0.4);
  const std::vector<NamedKernel> ks{{"a", k}, {"b", k}, {"c", families::two_state_flip(0.2)}};
  const auto d = partial_order_diagram(ks, half());
  ASSERT_EQ(d.nodes.size(), 2u);
  EXPECT_EQ(d.node_label(0), "a = b");
  EXPECT_EQ(d.edge_list(), "a = b > c\n");
  EXPECT_EQ(d.pairwise[0][1], Relation::Equal);
}

TEST(Hasse, DimensionMismatch) {
  const std::vector<NamedKernel> ks{{"a", families::two_state_flip(0.4)}, {"b", families::cycle_walk(3, 0.5)}};
  EXPECT_EQ(code_of([&] { partial_order_diagram(ks, half()); }), ErrorCode::DimensionMismatch);
}

TEST(Hasse, OrderAxiomsOnRandomFamilies) {
  testkit::Rng rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pi = testkit::random_distribution(rng, 3 + static_cast<std::size_t>(trial) % 5);
    const auto base = testkit::random_reversible(rng, pi);
    std::vector<NamedKernel> ks{{"base", base}};
    ks.push_back({"boost", testkit::boost_off_diagonal(rng, base, pi, 3)});
    ks.push_back({"lazy", make_lazy(base, 0.3)});
    ks.push_back({"lazier", make_lazy(base, 0.6)});
    ks.push_back({"other", testkit::random_reversible(rng, pi)});
    const auto d = partial_order_diagram(ks, pi);
    EXPECT_TRUE(d.acyclic);
    EXPECT_TRUE(d.transitivity_violations.empty());
    for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_EQ(d.pairwise[i][i], Relation::Equal);
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const auto a = d.pairwise[i][j];
        const auto b = d.pairwise[j][i];
        if (a == Relation::Dominates) EXPECT_EQ(b, Relation::Dominated);
        if (a == Relation::Equal) EXPECT_EQ(b, Relation::Equal);
        if (a == Relation::Incomparable) EXPECT_EQ(b, Relation::Incomparable);
      }
  }
}

TEST(PartialOrder, MutualDominanceForcesNearlyEqualKernels) {
  testkit::Rng rng(97);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const auto pi = testkit::random_distribution(rng, 2 + static_cast<std::size_t>(trial) % 10);
    const auto p = testkit::random_reversible(rng, pi);
    // Symmetric perturbation far below the tolerance keeps reversibility.
    Matrix m = p.matrix();
    const auto n = m.rows();
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = x + 1; y < n; ++y) {
        if (m(x, y) <= 0.0) continue;
        const double flux = 1e-11 * g(rng) * std::min(pi.vector()[x] * m(x, x), pi.vector()[y] * m(y, y));
        m(x, y) += flux / pi.vector()[x];
        m(x, x) -= flux / pi.vector()[x];
        m(y, x) += flux / pi.vector()[y];
        m(y, y) -= flux / pi.vector()[y];
      }
    const auto q = validate_kernel(m, pi);
    const auto r = covariance_dominance(p, q, pi);
    ASSERT_EQ(r.relation, Relation::Equal);
    EXPECT_LE((p.matrix() - q.matrix()).cwiseAbs().maxCoeff(), static_cast<double>(n) * 1e-8);
  }
}

// Loewner

TEST(Loewner, Examples) {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  const auto r = loewner_inversion_check(i2, 2.0 * i2);
  EXPECT_TRUE(r.order_holds);
  EXPECT_TRUE(r.inverse_holds);
  EXPECT_NEAR(r.min_eig_order, 1.0, 1e-14);
  EXPECT_NEAR(r.min_eig_inverse, 0.5, 1e-14);

  const Eigen::MatrixXd a = Eigen::Vector2d(1.0, 3.0).asDiagonal();
  const Eigen::MatrixXd b = Eigen::Vector2d(2.0, 2.0).asDiagonal();
  const auto c = loewner_inversion_check(a, b);
  EXPECT_FALSE(c.order_holds);
  EXPECT_FALSE(c.inverse_holds);
  EXPECT_TRUE(c.agree());
}

TEST(Loewner, RankOneUpdate) {
  Eigen::MatrixXd t(3, 3);
  t << 2, 0.5, 0, 0.5, 1, 0.2, 0, 0.2, 3;
  const Eigen::Vector3d v(1.0, -1.0, 0.5);
  const auto r = loewner_inversion_check(t, t + v * v.transpose());
  EXPECT_TRUE(r.order_holds);
  EXPECT_TRUE(r.inverse_holds);
  EXPECT_NEAR(r.min_eig_order, 0.0, 1e-12);
}

TEST(Loewner, ErrorPaths) {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(code_of([&] { loewner_inversion_check(asym, i2); }), ErrorCode::NotSymmetric);
  EXPECT_EQ(code_of([&] { loewner_inversion_check(i2, Eigen::MatrixXd::Zero(2, 2)); }),
            ErrorCode::NotPositiveDefinite);
  EXPECT_EQ(code_of([&] { loewner_inversion_check(i2, Eigen::MatrixXd::Identity(3, 3)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Loewner, RandomPairsNeverDisagree) {
  testkit::Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 10;
    const Eigen::MatrixXd t = testkit::random_spd(rng, n);
    const Eigen::MatrixXd m = trial % 2 ? Eigen::MatrixXd(t + testkit::random_spd(rng, n, 0.0, 0.5))
                                        : testkit::random_spd(rng, n);
    EXPECT_TRUE(loewner_inversion_check(t, m).agree());
  }
}

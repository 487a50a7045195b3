#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fibra/fibrations.hpp"
#include "fibra/fixtures.hpp"
#include "fibra/numerics.hpp"
#include "fibra/sampling.hpp"
#include "test_support.hpp"

namespace fibra {
namespace {

using fixtures::kR1;
using fixtures::kR2;

VirtualVectorField exponential_growth() {
  const NetworkPtr n = make_network(Graph{{"x"}, {}}, {{"x", kR1}});
  const ControlSignature sig = ControlSignature::of(input_tree(*n, "x"));
  return VirtualVectorField::per_class(
      n, {{"x", Control::from_expr(expr::ControlExpr::parse({"x[0]"}, expr::Signature::of_leaves(sig.root, sig.leaves)),
                                   sig)}});
}

TEST(StepCount, AbsorbsRounding) {
  EXPECT_EQ(step_count(1.0, 1e-3), 1000u);
  EXPECT_EQ(step_count(10.0, 1e-3), 10000u);
  EXPECT_EQ(step_count(0.3, 0.1), 3u);
  EXPECT_EQ(step_count(0.0, 0.1), 0u);
  EXPECT_EQ(step_count(0.25, 0.1), 3u);
  EXPECT_THROW(step_count(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(step_count(-1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(step_count(1.0, NAN), std::invalid_argument);
}

TEST(Integrate, Rk4IsFourthOrder) {
  const GlobalField f = interconnect(exponential_growth());
  std::vector<double> errors;
  for (double h : {1e-1, 1e-2, 1e-3}) {
    const Trajectory t = integrate(f, std::vector<double>{1.0}, 1.0, h);
    EXPECT_DOUBLE_EQ(t.times.back(), 1.0);
    errors.push_back(std::abs(t.states.back()[0] - std::exp(1.0)));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double slope = std::log10(errors[i] / errors[i + 1]);
    EXPECT_NEAR(slope, 4.0, 0.2);
  }
}

TEST(Integrate, SingleStepMatchesFormula) {
  const GlobalField f = interconnect(exponential_growth());
  const double h = 0.5;
  const Trajectory t = integrate(f, std::vector<double>{1.0}, h, h);
  ASSERT_EQ(t.states.size(), 2u);
  EXPECT_DOUBLE_EQ(t.states[1][0], 1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24);
}

TEST(Integrate, BlowUpIsReported) {
  const NetworkPtr n = make_network(Graph{{"x"}, {}}, {{"x", kR1}});
  const ControlSignature sig = ControlSignature::of(input_tree(*n, "x"));
  const GlobalField f = interconnect(VirtualVectorField::per_class(
      n, {{"x", Control::from_expr(expr::ControlExpr::parse({"x[0]^2"}, expr::Signature::of_leaves(sig.root, sig.leaves)),
                                   sig)}}));
  try {
    integrate(f, std::vector<double>{1.0}, 10.0, 0.1);
    FAIL();
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.step(), 0u);
  }
  EXPECT_THROW(integrate(f, std::vector<double>{1.0, 2.0}, 1.0, 0.1), std::invalid_argument);
}

TEST(StateDistance, CircleAware) {
  const StateIndex index(*fixtures::c2(PhaseSpace::circle()));
  EXPECT_NEAR(state_distance(index, std::vector<double>{0.0, 1.0}, std::vector<double>{kTwoPi, 1.0}), 0.0, 1e-15);
  EXPECT_TRUE(std::isinf(state_distance(index, std::vector<double>{NAN, 0}, std::vector<double>{0, 0})));
}

TEST(Conjugacy, PointwiseParallelMatchesSerial) {
  const fixtures::Bundle& b = fixtures::bundle("string-n3");
  std::mt19937_64 rng(1);
  const VirtualVectorField w = testing::random_dynamics(rng, b.maps.at("phi").codomain);
  const double serial = verify_conjugacy_pointwise(b.maps.at("phi"), w, 500, 3, Execution::kSerial);
  const double parallel = verify_conjugacy_pointwise(b.maps.at("phi"), w, 500, 3, Execution::kParallel);
  EXPECT_EQ(serial, parallel);
  EXPECT_LE(serial, 1e-12);
}

TEST(Conjugacy, RandomQuotientsAndInclusions) {
  std::mt19937_64 rng(19);
  testing::RandomNetworkOptions opt;
  opt.spaces = {kR1, kR2, PhaseSpace::euclidean(3), PhaseSpace::circle()};
  for (int trial = 0; trial < 60; ++trial) {
    const NetworkPtr n = testing::random_network(rng, opt);
    const Quotient q = coarsest_balanced(n);
    const VirtualVectorField w = testing::random_dynamics(rng, q.network);
    EXPECT_LE(verify_conjugacy_pointwise(q.projection, w, 50, trial), 1e-12);
  }
}

TEST(Conjugacy, FlowOnMotivatingDiagram) {
  const fixtures::Bundle& b = fixtures::bundle("motivating");
  const std::vector<double> x0{0.3, -0.7};
  EXPECT_LE(verify_conjugacy_flow(b.maps.at("psi"), b.dynamics.at("linear-c2"), x0, 1.0, 1e-3), 1e-8);
  EXPECT_LE(verify_conjugacy_flow(b.maps.at("phi"), b.dynamics.at("linear-loop"), std::vector<double>{0.4}, 1.0, 1e-3),
            1e-8);
}

TEST(Polydiagonal, InvarianceAndPrecondition) {
  const fixtures::Bundle& b = fixtures::bundle("motivating");
  const NetworkMap& psi = b.maps.at("psi");
  EXPECT_LE(verify_polydiagonal_invariance(psi, b.dynamics.at("linear-c2"), std::vector<double>{0.2, -0.4, 0.2}, 10.0,
                                           1e-3, 1e-9),
            1e-9);
  EXPECT_THROW(verify_polydiagonal_invariance(psi, b.dynamics.at("linear-c2"), std::vector<double>{0.2, -0.4, 0.3}, 1.0,
                                              1e-3, 1e-9),
               std::invalid_argument);
}

TEST(Driving, InclusionsDriveTheRest) {
  const fixtures::Bundle& mot = fixtures::bundle("motivating");
  const DrivingReport tau = verify_driving_decomposition(mot.maps.at("tau"), mot.dynamics.at("linear-g3"), 200, 0,
                                                         kFiniteDifferenceStep, kDrivingTolerance);
  EXPECT_TRUE(tau.holds);
  EXPECT_LT(tau.fd_residual, 1e-8);

  const fixtures::Bundle& ten = fixtures::bundle("ten");
  const DrivingReport i = verify_driving_decomposition(ten.maps.at("i"), ten.dynamics.at("linear-ten"), 200, 0,
                                                       kFiniteDifferenceStep, kDrivingTolerance);
  EXPECT_TRUE(i.holds);
}

TEST(Driving, BackEdgeBreaksIt) {
  Graph g{{"1", "2", "3"}, {{"e1_2", "1", "2"}, {"e2_1", "2", "1"}, {"e3_2", "3", "2"}}};
  const NetworkPtr big = make_network(g, {{"1", kR1}, {"2", kR1}, {"3", kR1}});
  const NetworkMap m{fixtures::c2(), big, {{"a", "1"}, {"b", "2"}}, {{"ab", "e1_2"}, {"ba", "e2_1"}}};
  const DrivingReport r = verify_driving_decomposition(m, fixtures::linear_dynamics(big), 50, 0, kFiniteDifferenceStep,
                                                       kDrivingTolerance);
  EXPECT_FALSE(r.no_feedback);
  EXPECT_FALSE(r.injective_fibration);
  EXPECT_GT(r.fd_residual, 0.5);
  EXPECT_FALSE(r.holds);
}

// Finite differences recover exactly {a} plus the in-edge sources of a.
TEST(DependencyPattern, MatchesInEdges) {
  std::mt19937_64 rng(55);
  testing::RandomNetworkOptions opt;
  opt.spaces = {kR1, kR2, PhaseSpace::euclidean(3), PhaseSpace::circle()};
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkPtr n = testing::random_network(rng, opt);
    const GlobalField f = interconnect(testing::random_dynamics(rng, n));
    Rng r = stream(trial, 0);
    const auto x = sample_total_state(*n, r);
    const auto pattern = dependency_pattern(f, x, kFiniteDifferenceStep);
    for (const NodeId& a : n->sorted_nodes()) {
      std::set<NodeId> expected{a};
      for (const EdgeId& e : n->in_edges(a)) expected.insert(n->edge(e).src);
      EXPECT_EQ(pattern.at(a), expected) << "trial " << trial << " node " << a;
    }
  }
}

}  // namespace
}  // namespace fibra

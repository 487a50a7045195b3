#include <gtest/gtest.h>

#include <random>

#include "fibra/fibrations.hpp"
#include "fibra/fixtures.hpp"
#include "fibra/input_trees.hpp"
#include "fibra/sampling.hpp"
#include "test_support.hpp"

namespace fibra {
namespace {

using fixtures::kR1;
using fixtures::kR2;
using testing::Blocks;

TEST(CheckFibration, MotivatingDiagram) {
  const FibrationReport phi = check_fibration(fixtures::phi());
  EXPECT_TRUE(phi.is_fibration);
  EXPECT_TRUE(phi.surjective_on_nodes);
  EXPECT_FALSE(phi.injective_on_nodes);

  const FibrationReport psi = check_fibration(fixtures::psi());
  EXPECT_TRUE(psi.is_fibration);
  EXPECT_TRUE(psi.surjective_on_nodes);

  const FibrationReport tau = check_fibration(fixtures::tau());
  EXPECT_TRUE(tau.is_fibration);
  EXPECT_TRUE(tau.injective_on_nodes);
  EXPECT_FALSE(tau.surjective_on_nodes);
}

TEST(CheckFibration, CollapseReportsLiftCounts) {
  const FibrationReport r = check_fibration(fixtures::collapse());
  EXPECT_FALSE(r.is_fibration);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0], (LiftFailure{"a", "l", 0}));
  EXPECT_EQ(r.failures[1], (LiftFailure{"b", "l", 2}));
}

TEST(CheckFibration, InclusionWithBackEdgeIsNotAFibration) {
  // c2 into a graph where node 2 also hears from an outside node.
  Graph g{{"1", "2", "3"}, {{"e1_2", "1", "2"}, {"e2_1", "2", "1"}, {"e3_2", "3", "2"}}};
  const NetworkPtr big = make_network(g, {{"1", kR1}, {"2", kR1}, {"3", kR1}});
  const NetworkMap m{fixtures::c2(), big, {{"a", "1"}, {"b", "2"}}, {{"ab", "e1_2"}, {"ba", "e2_1"}}};
  EXPECT_TRUE(check_network_map(m).empty());
  const FibrationReport r = check_fibration(m);
  EXPECT_FALSE(r.is_fibration);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0], (LiftFailure{"b", "e3_2", 0}));
}

TEST(CheckFibration, FixtureClaimsHold) {
  for (const auto& b : fixtures::catalog()) {
    for (const auto& [name, m] : b.maps) {
      EXPECT_TRUE(check_network_map(m).empty()) << b.name << "/" << name;
      EXPECT_EQ(check_fibration(m).is_fibration, b.fibrations.count(name) == 1) << b.name << "/" << name;
    }
  }
}

// A random homomorphism between random single-type networks, or nullopt if
// some edge has no candidate image.
std::optional<NetworkMap> random_homomorphism(std::mt19937_64& rng, const NetworkPtr& dom, const NetworkPtr& cod) {
  const auto& targets = cod->sorted_nodes();
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  NetworkMap m{dom, cod, {}, {}};
  for (const NodeId& a : dom->sorted_nodes()) m.node_map[a] = targets[pick(rng)];
  for (const Edge& e : dom->graph().edges) {
    std::vector<EdgeId> candidates;
    for (const Edge& f : cod->graph().edges) {
      if (f.src == m.node_map[e.src] && f.tgt == m.node_map[e.tgt]) candidates.push_back(f.id);
    }
    if (candidates.empty()) return std::nullopt;
    m.edge_map[e.id] = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  }
  return m;
}

TEST(CheckFibration, AgreesWithBruteForceOnRandomMaps) {
  std::mt19937_64 rng(99);
  testing::RandomNetworkOptions opt;
  opt.spaces = {kR1};
  opt.max_nodes = 4;
  testing::RandomNetworkOptions small = opt;
  small.max_nodes = 3;
  small.max_edges_per_node = 3;
  int checked = 0, fibrations = 0;
  while (checked < 400) {
    const NetworkPtr dom = testing::random_network(rng, opt);
    const NetworkPtr cod = testing::random_network(rng, small);
    const auto m = random_homomorphism(rng, dom, cod);
    if (!m) continue;
    ASSERT_TRUE(check_network_map(*m).empty());
    const bool oracle = testing::brute_force_is_fibration(*m);
    EXPECT_EQ(check_fibration(*m).is_fibration, oracle);
    fibrations += oracle;
    ++checked;
  }
  // Quotient projections are always fibrations.
  for (int i = 0; i < 100; ++i) {
    const NetworkPtr n = testing::random_network(rng);
    const Quotient q = coarsest_balanced(n);
    EXPECT_TRUE(testing::brute_force_is_fibration(q.projection));
    EXPECT_TRUE(check_fibration(q.projection).is_fibration);
    ++fibrations;
  }
  EXPECT_GT(fibrations, 100);
}

TEST(Partition, NormalizesAndValidates) {
  const Partition p({{"3", "1"}, {"2"}});
  EXPECT_EQ(p.blocks(), (Blocks{{"1", "3"}, {"2"}}));
  EXPECT_EQ(p.block_id("3"), "1");
  EXPECT_THROW(Partition({{"1"}, {}}), std::invalid_argument);
  EXPECT_THROW(Partition({{"1", "2"}, {"2"}}), std::invalid_argument);
}

TEST(Balanced, G3Partitions) {
  const NetworkPtr n = fixtures::g3();
  EXPECT_TRUE(is_balanced(*n, Partition({{"1", "3"}, {"2"}})).balanced);
  EXPECT_TRUE(is_balanced(*n, Partition({{"1", "2", "3"}})).balanced);
  EXPECT_TRUE(is_balanced(*n, Partition({{"1", "2"}, {"3"}})).balanced);
  const BalanceReport r = is_balanced(*n, Partition({{"1"}, {"2", "3"}}));
  EXPECT_FALSE(r.balanced);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->first, "2");
  EXPECT_EQ(r.witness->second, "3");
  EXPECT_THROW(is_balanced(*n, Partition(std::vector<std::vector<NodeId>>{{"1", "2"}})), std::invalid_argument);
  EXPECT_THROW(is_balanced(*fixtures::string_graph(2), Partition({{"1", "2"}, {"3", "4"}})), std::invalid_argument);
}

TEST(Coarsest, StringGraphsCollapseToTheCycle) {
  for (int n : {2, 3, 5}) {
    const Quotient q = coarsest_balanced(fixtures::string_graph(n));
    Blocks expected(2);
    for (int k = 1; k <= 2 * n; ++k) expected[(k + 1) % 2].push_back(std::to_string(k));
    EXPECT_EQ(testing::canonical(q.partition.blocks()), testing::canonical(expected));
    const Network& c = *q.network;
    const NodeId odd = q.partition.block_id("1");
    const NodeId even = q.partition.block_id("2");
    ASSERT_EQ(c.sorted_nodes().size(), 2u);
    EXPECT_EQ(c.space(odd), kR1);
    EXPECT_EQ(c.space(even), kR2);
    ASSERT_EQ(c.graph().edges.size(), 2u);
    ASSERT_EQ(c.in_edges(odd).size(), 1u);
    ASSERT_EQ(c.in_edges(even).size(), 1u);
    EXPECT_EQ(c.edge(c.in_edges(odd)[0]).src, even);
    EXPECT_EQ(c.edge(c.in_edges(even)[0]).src, odd);
    EXPECT_TRUE(check_fibration(q.projection).is_fibration);
  }
}

TEST(Coarsest, RandomGraphsAgainstExhaustiveSearch) {
  std::mt19937_64 rng(7);
  int nontrivial = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const NetworkPtr n = testing::random_network(rng);
    const testing::CoarsestOracle oracle = testing::brute_force_coarsest(*n);
    ASSERT_TRUE(oracle.unique);
    ASSERT_TRUE(oracle.all_refine);
    const Quotient q = coarsest_balanced(n);
    EXPECT_EQ(testing::canonical(q.partition.blocks()), oracle.coarsest);
    nontrivial += oracle.coarsest.size() < n->sorted_nodes().size();

    // Every partition agrees with the oracle on balance.
    testing::for_each_set_partition(n->sorted_nodes(), [&](const Blocks& blocks) {
      if (!testing::brute_force_phase_homogeneous(*n, blocks)) return;
      EXPECT_EQ(is_balanced(*n, Partition(blocks)).balanced, testing::brute_force_balanced(*n, blocks));
    });
  }
  EXPECT_GT(nontrivial, 50);
}

TEST(Quotient, ProjectionIsASurjectiveFibration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkPtr n = testing::random_network(rng);
    std::vector<Blocks> balanced;
    testing::for_each_set_partition(n->sorted_nodes(), [&](const Blocks& blocks) {
      if (testing::brute_force_phase_homogeneous(*n, blocks) && testing::brute_force_balanced(*n, blocks)) {
        balanced.push_back(blocks);
      }
    });
    const Blocks& pick = balanced[std::uniform_int_distribution<std::size_t>(0, balanced.size() - 1)(rng)];
    const Quotient q = quotient_by(n, Partition(pick));
    EXPECT_TRUE(validate_network(*q.network).empty());
    EXPECT_TRUE(check_network_map(q.projection).empty());
    const FibrationReport r = check_fibration(q.projection);
    EXPECT_TRUE(r.is_fibration);
    EXPECT_TRUE(r.surjective_on_nodes);
    EXPECT_EQ(q.network->sorted_nodes().size(), pick.size());
    EXPECT_EQ(polydiagonal_of(q.projection).fibers(), q.partition);
  }
  EXPECT_THROW(quotient_by(fixtures::g3(), Partition({{"1"}, {"2", "3"}})), std::invalid_argument);
}

TEST(Factorize, ComposesBackToTheMap) {
  for (const NetworkMap& m : {fixtures::phi(), fixtures::psi(), fixtures::tau(), fixtures::ten_inclusion(),
                              fixtures::two_sources()}) {
    const Factorization f = factorize(m);
    EXPECT_TRUE(check_network_map(f.surjection).empty());
    EXPECT_TRUE(check_network_map(f.injection).empty());
    EXPECT_TRUE(is_surjective_on_nodes(f.surjection));
    EXPECT_TRUE(is_injective_on_nodes(f.injection));
    const NetworkMap back = compose_maps(f.surjection, f.injection);
    EXPECT_EQ(back.node_map, m.node_map);
    EXPECT_EQ(back.edge_map, m.edge_map);
    EXPECT_TRUE(check_fibration(f.surjection).is_fibration);
    EXPECT_TRUE(check_fibration(f.injection).is_fibration);
  }
  EXPECT_THROW(factorize(fixtures::collapse()), NotAFibrationError);
}

TEST(Polydiagonal, FibersAndCircleMetric) {
  const Polydiagonal d = polydiagonal_of(fixtures::psi());
  EXPECT_EQ(d.fibers().blocks(), (Blocks{{"1", "3"}, {"2"}}));
  EXPECT_TRUE(d.contains(std::vector<double>{0.3, -0.2, 0.3}));
  EXPECT_NEAR(d.violation(std::vector<double>{0.3, -0.2, 0.1}), 0.2, 1e-15);

  const Polydiagonal s = polydiagonal_of(fixtures::phi(PhaseSpace::circle()));
  EXPECT_TRUE(s.contains(std::vector<double>{0.1, 0.1 + kTwoPi, 0.1 - kTwoPi}));
  EXPECT_THROW(polydiagonal_of(fixtures::tau()), NotAFibrationError);
  EXPECT_THROW(polydiagonal_of(fixtures::collapse()), NotAFibrationError);
}

// Injective fibrations from backward-closed node sets.
NetworkMap backward_closed_inclusion(const NetworkPtr& big, std::set<NodeId> seed) {
  std::set<NodeId> closed;
  std::vector<NodeId> todo(seed.begin(), seed.end());
  while (!todo.empty()) {
    const NodeId a = todo.back();
    todo.pop_back();
    if (!closed.insert(a).second) continue;
    for (const EdgeId& e : big->in_edges(a)) todo.push_back(big->edge(e).src);
  }
  Graph g;
  std::map<NodeId, PhaseSpace> phase;
  NetworkMap m{nullptr, big, {}, {}};
  for (const NodeId& a : closed) {
    g.nodes.push_back(a);
    phase.emplace(a, big->space(a));
    m.node_map[a] = a;
    for (const EdgeId& e : big->in_edges(a)) {
      g.edges.push_back(big->edge(e));
      m.edge_map[e] = e;
    }
  }
  m.domain = make_network(std::move(g), std::move(phase));
  return m;
}

TEST(EssentialImage, TenGraph) {
  EXPECT_EQ(essential_image(fixtures::ten_inclusion()).size(), 10u);
  EXPECT_EQ(essential_image(fixtures::ten_inclusion(kR1, kR2)), (std::vector<NodeId>{"1", "2", "3"}));
  EXPECT_THROW(essential_image(fixtures::collapse()), NotAFibrationError);
}

TEST(EssentialImage, RandomInclusionsAgainstSignatures) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkPtr big = testing::random_network(rng);
    const auto& nodes = big->sorted_nodes();
    const NetworkMap m = backward_closed_inclusion(big, {nodes[rng() % nodes.size()]});
    ASSERT_TRUE(testing::brute_force_is_fibration(m));
    std::vector<NodeId> expected;
    for (const NodeId& c : nodes) {
      bool hit = false;
      for (const auto& [a, b] : m.node_map) {
        hit = hit || testing::brute_force_signature(*big, b) == testing::brute_force_signature(*big, c);
      }
      if (hit) expected.push_back(c);
    }
    EXPECT_EQ(essential_image(m), expected);
  }
}

}  // namespace
}  // namespace fibra

#include "fibra/fibrations.hpp"

#include <algorithm>
#include <cmath>
#include <ranges>
#include <set>

#include "fibra/input_trees.hpp"

namespace fibra {

FibrationReport check_fibration(const NetworkMap& m) {
  const Network& g = *m.domain;
  const Network& h = *m.codomain;
  FibrationReport report;
  for (const NodeId& a : g.sorted_nodes()) {
    std::map<EdgeId, std::size_t> lifts;
    for (const EdgeId& target : h.in_edges(m.node(a))) lifts[target] = 0;
    for (const EdgeId& e : g.in_edges(a)) ++lifts[m.edge(e)];
    for (const auto& [target, count] : lifts) {
      if (count != 1) report.failures.push_back(LiftFailure{a, target, count});
    }
  }
  report.is_fibration = report.failures.empty();
  report.surjective_on_nodes = is_surjective_on_nodes(m);
  report.injective_on_nodes = is_injective_on_nodes(m);
  std::set<EdgeId> edge_image;
  for (const auto& [e, f] : m.edge_map) edge_image.insert(f);
  report.surjective_on_edges = edge_image.size() == h.edge_count();
  report.injective_on_edges = edge_image.size() == m.edge_map.size();
  return report;
}

namespace {

void require_fibration(const NetworkMap& m, const char* what) {
  if (auto v = check_network_map(m); !v.empty()) {
    throw std::invalid_argument(std::string(what) + ": invalid network map: " + v.front().message);
  }
  const FibrationReport r = check_fibration(m);
  if (!r.is_fibration) {
    const LiftFailure& f = r.failures.front();
    throw NotAFibrationError(std::string(what) + ": map is not a fibration (node '" + f.node + "' has " +
                             std::to_string(f.lift_count) + " lifts of edge '" + f.codomain_edge + "')");
  }
}

}  // namespace

Factorization factorize(const NetworkMap& m) {
  require_fibration(m, "factorize");
  const Network& h = *m.codomain;
  std::set<NodeId> nodes;
  for (const auto& [a, b] : m.node_map) nodes.insert(b);
  std::set<EdgeId> edges;
  for (const auto& [e, f] : m.edge_map) edges.insert(f);

  Graph image;
  image.nodes.assign(nodes.begin(), nodes.end());
  std::map<NodeId, PhaseSpace> phase;
  for (const NodeId& b : image.nodes) phase.emplace(b, h.space(b));
  for (const Edge& e : h.graph().edges) {
    if (edges.count(e.id)) image.edges.push_back(e);
  }
  NetworkPtr sub = make_network(std::move(image), std::move(phase));

  NetworkMap surjection{m.domain, sub, m.node_map, m.edge_map};
  NetworkMap injection{sub, m.codomain, {}, {}};
  for (const NodeId& b : sub->graph().nodes) injection.node_map[b] = b;
  for (const Edge& e : sub->graph().edges) injection.edge_map[e.id] = e.id;
  return Factorization{std::move(surjection), std::move(injection)};
}

Partition::Partition(std::vector<std::vector<NodeId>> blocks) {
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition has an empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end());
  for (const auto& b : blocks) {
    for (const NodeId& a : b) {
      if (!block_of_.emplace(a, b.front()).second) {
        throw std::invalid_argument("node '" + a + "' appears in more than one block");
      }
    }
  }
  blocks_ = std::move(blocks);
}

double Polydiagonal::violation(std::span<const double> x) const {
  if (x.size() != index_.total_dim()) throw std::invalid_argument("state dimension mismatch");
  double worst = 0.0;
  for (const auto& block : fibers_.blocks()) {
    const Slice& first = index_.slice(block.front());
    for (std::size_t i = 1; i < block.size(); ++i) {
      const Slice& other = index_.slice(block[i]);
      for (std::size_t k = 0; k < first.length; ++k) {
        const std::size_t p = first.offset + k;
        const std::size_t q = other.offset + k;
        const double d = index_.is_circle(p) ? circle_distance(x[p], x[q]) : std::abs(x[p] - x[q]);
        worst = std::max(worst, d);
      }
    }
  }
  return worst;
}

Polydiagonal polydiagonal_of(const NetworkMap& m) {
  require_fibration(m, "polydiagonal");
  if (!is_surjective_on_nodes(m)) {
    throw NotAFibrationError("polydiagonal: fibration is not surjective on nodes");
  }
  std::map<NodeId, std::vector<NodeId>> fibers;
  for (const auto& [a, b] : m.node_map) fibers[b].push_back(a);
  std::vector<std::vector<NodeId>> blocks;
  for (auto& [b, members] : fibers) blocks.push_back(std::move(members));
  return Polydiagonal(m.domain, Partition(std::move(blocks)));
}

namespace {

void require_homogeneous_cover(const Network& n, const Partition& p) {
  for (const NodeId& a : n.sorted_nodes()) {
    if (!p.contains(a)) throw std::invalid_argument("partition does not cover node '" + a + "'");
  }
  for (const auto& block : p.blocks()) {
    for (const NodeId& a : block) {
      if (!n.has_node(a)) throw std::invalid_argument("partition names unknown node '" + a + "'");
      if (n.space(a) != n.space(block.front())) {
        throw std::invalid_argument("block '" + block.front() + "' mixes phase spaces");
      }
    }
  }
}

// Source-block multiset of the in-edges of a.
std::map<NodeId, std::size_t> in_profile(const Network& n, const Partition& p, const NodeId& a) {
  std::map<NodeId, std::size_t> out;
  for (const EdgeId& e : n.in_edges(a)) ++out[p.block_id(n.edge(e).src)];
  return out;
}

}  // namespace

BalanceReport is_balanced(const Network& n, const Partition& p) {
  require_homogeneous_cover(n, p);
  for (const auto& block : p.blocks()) {
    const auto reference = in_profile(n, p, block.front());
    for (std::size_t i = 1; i < block.size(); ++i) {
      if (in_profile(n, p, block[i]) != reference) {
        return BalanceReport{false, std::make_pair(block.front(), block[i])};
      }
    }
  }
  return BalanceReport{true, std::nullopt};
}

Quotient quotient_by(const NetworkPtr& n, const Partition& p) {
  if (!is_balanced(*n, p).balanced) {
    throw std::invalid_argument("cannot build a quotient of an unbalanced partition");
  }
  auto quotient_edge = [](const NodeId& block, const EdgeId& e) { return block + ":" + e; };
  // In-edges of a grouped by source block, each group in edge-id order.
  auto grouped = [&](const NodeId& a) {
    std::map<NodeId, std::vector<EdgeId>> out;
    for (const EdgeId& e : n->in_edges(a)) out[p.block_id(n->edge(e).src)].push_back(e);
    return out;
  };

  Graph graph;
  std::map<NodeId, PhaseSpace> phase;
  for (const auto& block : p.blocks()) {
    const NodeId& rep = block.front();
    graph.nodes.push_back(rep);
    phase.emplace(rep, n->space(rep));
    for (const EdgeId& e : n->in_edges(rep)) {
      graph.edges.push_back(Edge{quotient_edge(rep, e), p.block_id(n->edge(e).src), rep});
    }
  }
  NetworkPtr q = make_network(std::move(graph), std::move(phase));

  NetworkMap projection{n, q, {}, {}};
  for (const auto& block : p.blocks()) {
    const NodeId& rep = block.front();
    const auto rep_groups = grouped(rep);
    for (const NodeId& a : block) {
      projection.node_map[a] = rep;
      for (const auto& [src_block, edges] : grouped(a)) {
        const auto& targets = rep_groups.at(src_block);
        for (std::size_t i = 0; i < edges.size(); ++i) {
          projection.edge_map[edges[i]] = quotient_edge(rep, targets[i]);
        }
      }
    }
  }
  return Quotient{p, std::move(q), std::move(projection)};
}

Quotient coarsest_balanced(const NetworkPtr& n) {
  const auto& nodes = n->sorted_nodes();
  std::map<NodeId, std::size_t> color;
  {
    std::map<PhaseSpace, std::size_t> classes;
    for (const NodeId& a : nodes) {
      auto [it, fresh] = classes.emplace(n->space(a), classes.size());
      color[a] = it->second;
    }
  }
  std::size_t count = std::set<std::size_t>(std::views::values(color).begin(),
                                            std::views::values(color).end()).size();

  for (;;) {
    using Signature = std::pair<std::size_t, std::vector<std::size_t>>;
    std::map<Signature, std::size_t> ids;
    std::map<NodeId, std::size_t> next;
    for (const NodeId& a : nodes) {
      Signature sig{color[a], {}};
      for (const EdgeId& e : n->in_edges(a)) sig.second.push_back(color[n->edge(e).src]);
      std::sort(sig.second.begin(), sig.second.end());
      auto [it, fresh] = ids.emplace(std::move(sig), ids.size());
      next[a] = it->second;
    }
    color = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }

  std::map<std::size_t, std::vector<NodeId>> blocks;
  for (const NodeId& a : nodes) blocks[color[a]].push_back(a);
  std::vector<std::vector<NodeId>> list;
  for (auto& [c, members] : blocks) list.push_back(std::move(members));
  return quotient_by(n, Partition(std::move(list)));
}

std::vector<NodeId> essential_image(const NetworkMap& m) {
  require_fibration(m, "essential image");
  using Key = std::pair<PhaseSpace, std::map<PhaseSpace, std::size_t>>;
  auto key_of = [](const InputTree& t) { return Key{t.root_type, t.type_counts()}; };
  std::set<Key> image_keys;
  for (const auto& [a, b] : m.node_map) image_keys.insert(key_of(input_tree(*m.codomain, b)));
  std::vector<NodeId> out;
  for (const NodeId& b : m.codomain->sorted_nodes()) {
    if (image_keys.count(key_of(input_tree(*m.codomain, b)))) out.push_back(b);
  }
  return out;
}

}  // namespace fibra

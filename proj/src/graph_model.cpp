#include "fibra/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fibra {

double wrap_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);
  if (r <= -kTwoPi / 2) r += kTwoPi;
  return r;
}

double circle_distance(double x, double y) { return std::abs(std::remainder(x - y, kTwoPi)); }

PhaseSpace PhaseSpace::euclidean(int dim) {
  if (dim < 1) throw std::invalid_argument("phase space dimension must be >= 1");
  return PhaseSpace{Kind::kEuclidean, dim};
}

std::string PhaseSpace::name() const {
  if (is_circle()) return "S1";
  return "R" + std::to_string(dim);
}

PhaseSpace PhaseSpace::from_name(const std::string& name) {
  if (name == "S1") return circle();
  if (name.size() >= 2 && name[0] == 'R' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      name[1] != '0') {
    return euclidean(std::stoi(name.substr(1)));
  }
  throw std::invalid_argument("unknown phase space name '" + name + "'");
}

Network::Network(Graph graph, std::map<NodeId, PhaseSpace> phase)
    : graph_(std::move(graph)), phase_(std::move(phase)) {
  for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
    const Edge& e = graph_.edges[i];
    if (edge_index_.emplace(e.id, i).second) in_edges_[e.tgt].push_back(e.id);
  }
  for (auto& [node, edges] : in_edges_) std::sort(edges.begin(), edges.end());
  std::set<NodeId> unique(graph_.nodes.begin(), graph_.nodes.end());
  sorted_nodes_.assign(unique.begin(), unique.end());
}

bool Network::has_node(const NodeId& a) const {
  return std::binary_search(sorted_nodes_.begin(), sorted_nodes_.end(), a);
}

bool Network::has_edge(const EdgeId& e) const { return edge_index_.count(e) != 0; }

const PhaseSpace& Network::space(const NodeId& a) const {
  auto it = phase_.find(a);
  if (it == phase_.end()) throw std::out_of_range("no phase space for node '" + a + "'");
  return it->second;
}

const Edge& Network::edge(const EdgeId& e) const {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) throw std::out_of_range("unknown edge '" + e + "'");
  return graph_.edges[it->second];
}

const std::vector<EdgeId>& Network::in_edges(const NodeId& a) const {
  static const std::vector<EdgeId> kNone;
  auto it = in_edges_.find(a);
  return it == in_edges_.end() ? kNone : it->second;
}

NetworkPtr make_network(Graph graph, std::map<NodeId, PhaseSpace> phase) {
  return std::make_shared<const Network>(std::move(graph), std::move(phase));
}

bool operator==(const NetworkMap& x, const NetworkMap& y) {
  auto same = [](const NetworkPtr& p, const NetworkPtr& q) {
    return p == q || (p && q && *p == *q);
  };
  return same(x.domain, y.domain) && same(x.codomain, y.codomain) &&
         x.node_map == y.node_map && x.edge_map == y.edge_map;
}

NetworkMap identity_map(const NetworkPtr& n) {
  NetworkMap m{n, n, {}, {}};
  for (const NodeId& a : n->graph().nodes) m.node_map[a] = a;
  for (const Edge& e : n->graph().edges) m.edge_map[e.id] = e.id;
  return m;
}

std::vector<Violation> validate_network(const Network& n) {
  std::vector<Violation> out;
  std::set<NodeId> nodes;
  for (const NodeId& a : n.graph().nodes) {
    if (!nodes.insert(a).second) {
      out.push_back({"duplicate-node", a, "node id '" + a + "' appears more than once"});
    }
  }
  std::set<EdgeId> edges;
  for (const Edge& e : n.graph().edges) {
    if (!edges.insert(e.id).second) {
      out.push_back({"duplicate-edge", e.id, "edge id '" + e.id + "' appears more than once"});
    }
    if (!nodes.count(e.src)) {
      out.push_back({"edge-src-unknown", e.id,
                     "edge '" + e.id + "' has source '" + e.src + "' which is not a node"});
    }
    if (!nodes.count(e.tgt)) {
      out.push_back({"edge-tgt-unknown", e.id,
                     "edge '" + e.id + "' has target '" + e.tgt + "' which is not a node"});
    }
  }
  for (const NodeId& a : nodes) {
    if (!n.phase().count(a)) {
      out.push_back({"phase-missing", a, "node '" + a + "' has no phase space"});
    }
  }
  for (const auto& [a, space] : n.phase()) {
    if (!nodes.count(a)) {
      out.push_back({"phase-unknown-node", a, "phase space assigned to unknown node '" + a + "'"});
    }
    if (space.dim < 1 || (space.is_circle() && space.dim != 1)) {
      out.push_back({"phase-bad-dim", a, "node '" + a + "' has invalid dimension"});
    }
  }
  return out;
}

std::vector<Violation> check_network_map(const NetworkMap& m) {
  std::vector<Violation> out;
  if (!m.domain || !m.codomain) {
    out.push_back({"missing-network", "", "map has no domain or codomain"});
    return out;
  }
  const Network& g = *m.domain;
  const Network& h = *m.codomain;

  for (const NodeId& a : g.sorted_nodes()) {
    auto it = m.node_map.find(a);
    if (it == m.node_map.end()) {
      out.push_back({"node-unmapped", a, "node '" + a + "' has no image"});
      continue;
    }
    if (!h.has_node(it->second)) {
      out.push_back({"node-image-unknown", a,
                     "node '" + a + "' maps to '" + it->second + "' which is not a codomain node"});
      continue;
    }
    if (g.phase().count(a) && h.phase().count(it->second) &&
        g.space(a) != h.space(it->second)) {
      out.push_back({"phase-mismatch", a,
                     "node '" + a + "' has space " + g.space(a).name() + " but its image '" +
                         it->second + "' has space " + h.space(it->second).name()});
    }
  }
  for (const auto& [a, b] : m.node_map) {
    if (!g.has_node(a)) out.push_back({"node-map-dangling", a, "node map entry for unknown node '" + a + "'"});
  }

  for (const Edge& e : g.graph().edges) {
    auto it = m.edge_map.find(e.id);
    if (it == m.edge_map.end()) {
      out.push_back({"edge-unmapped", e.id, "edge '" + e.id + "' has no image"});
      continue;
    }
    if (!h.has_edge(it->second)) {
      out.push_back({"edge-image-unknown", e.id,
                     "edge '" + e.id + "' maps to '" + it->second + "' which is not a codomain edge"});
      continue;
    }
    const Edge& image = h.edge(it->second);
    auto src = m.node_map.find(e.src);
    auto tgt = m.node_map.find(e.tgt);
    if (src == m.node_map.end() || src->second != image.src) {
      out.push_back({"homomorphism-source", e.id,
                     "edge '" + e.id + "' maps to '" + image.id + "' but sources do not correspond"});
    }
    if (tgt == m.node_map.end() || tgt->second != image.tgt) {
      out.push_back({"homomorphism-target", e.id,
                     "edge '" + e.id + "' maps to '" + image.id + "' but targets do not correspond"});
    }
  }
  for (const auto& [e, f] : m.edge_map) {
    if (!g.has_edge(e)) out.push_back({"edge-map-dangling", e, "edge map entry for unknown edge '" + e + "'"});
  }
  return out;
}

StateIndex::StateIndex(const Network& n) : order_(n.sorted_nodes()) {
  for (const NodeId& a : order_) {
    const PhaseSpace& p = n.space(a);
    const auto len = static_cast<std::size_t>(p.dim);
    slices_[a] = Slice{total_dim_, len};
    circle_.insert(circle_.end(), len, p.is_circle() ? 1 : 0);
    total_dim_ += len;
  }
}

StateIndex total_phase_space(const Network& n) { return StateIndex(n); }

std::vector<double> PhaseSpaceMap::operator()(std::span<const double> x) const {
  if (x.size() != from_.total_dim()) {
    throw std::invalid_argument("state has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(from_.total_dim()));
  }
  std::vector<double> out(gather_.size());
  for (std::size_t i = 0; i < gather_.size(); ++i) out[i] = x[gather_[i]];
  return out;
}

PhaseSpaceMap phase_space_map(const NetworkMap& m) {
  if (auto v = check_network_map(m); !v.empty()) {
    throw std::invalid_argument("invalid network map: " + v.front().message);
  }
  StateIndex to(*m.domain);
  StateIndex from(*m.codomain);
  std::vector<std::size_t> gather(to.total_dim());
  for (const NodeId& a : to.order()) {
    const Slice& dst = to.slice(a);
    const Slice& src = from.slice(m.node(a));
    for (std::size_t k = 0; k < dst.length; ++k) gather[dst.offset + k] = src.offset + k;
  }
  return PhaseSpaceMap(std::move(from), std::move(to), std::move(gather));
}

NetworkMap compose_maps(const NetworkMap& first, const NetworkMap& second) {
  if (!first.codomain || !second.domain ||
      (first.codomain != second.domain && !(*first.codomain == *second.domain))) {
    throw std::invalid_argument("cannot compose: codomain of the first map is not the domain of the second");
  }
  NetworkMap out{first.domain, second.codomain, {}, {}};
  for (const auto& [a, b] : first.node_map) out.node_map[a] = second.node_map.at(b);
  for (const auto& [e, f] : first.edge_map) out.edge_map[e] = second.edge_map.at(f);
  return out;
}

bool is_surjective_on_nodes(const NetworkMap& m) {
  std::set<NodeId> image;
  for (const auto& [a, b] : m.node_map) image.insert(b);
  return image.size() == m.codomain->sorted_nodes().size();
}

bool is_injective_on_nodes(const NetworkMap& m) {
  std::set<NodeId> image;
  for (const auto& [a, b] : m.node_map) image.insert(b);
  return image.size() == m.node_map.size();
}

}  // namespace fibra

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fibra {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Angle reduced to (-pi, pi].
double wrap_angle(double theta);
// Distance on S^1 between two angles given in any branch.
double circle_distance(double x, double y);

using NodeId = std::string;
using EdgeId = std::string;

// Coordinate phase space attached to a node: R^d, or the circle in angle
// coordinates (dimension 1, taken modulo 2*pi).
struct PhaseSpace {
  enum class Kind { kEuclidean, kCircle };

  Kind kind = Kind::kEuclidean;
  int dim = 1;

  static PhaseSpace euclidean(int dim);
  static PhaseSpace circle() { return PhaseSpace{Kind::kCircle, 1}; }

  bool is_circle() const { return kind == Kind::kCircle; }

  // "R<d>" or "S1". Also the name of the input group in control expressions.
  std::string name() const;
  // Inverse of name(); throws std::invalid_argument.
  static PhaseSpace from_name(const std::string& name);

  friend bool operator==(const PhaseSpace&, const PhaseSpace&) = default;
  friend auto operator<=>(const PhaseSpace&, const PhaseSpace&) = default;
};

struct Edge {
  EdgeId id;
  NodeId src;
  NodeId tgt;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed multigraph. Loops and parallel edges are allowed. The struct is a
// plain record; validate_network() reports malformed content.
struct Graph {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;

  friend bool operator==(const Graph&, const Graph&) = default;
};

// A graph together with a phase space for each node. Lookup tables are built
// once at construction; the object is immutable afterwards.
class Network {
 public:
  Network() = default;
  Network(Graph graph, std::map<NodeId, PhaseSpace> phase);

  const Graph& graph() const { return graph_; }
  const std::map<NodeId, PhaseSpace>& phase() const { return phase_; }

  bool has_node(const NodeId& a) const;
  bool has_edge(const EdgeId& e) const;

  // Throw std::out_of_range for unknown ids.
  const PhaseSpace& space(const NodeId& a) const;
  const Edge& edge(const EdgeId& e) const;

  // t^{-1}(a), sorted lexicographically by edge id. Empty for unknown nodes.
  const std::vector<EdgeId>& in_edges(const NodeId& a) const;

  // Node ids in canonical (lexicographic) order.
  const std::vector<NodeId>& sorted_nodes() const { return sorted_nodes_; }

  std::size_t node_count() const { return graph_.nodes.size(); }
  std::size_t edge_count() const { return graph_.edges.size(); }

  friend bool operator==(const Network& x, const Network& y) {
    return x.graph_ == y.graph_ && x.phase_ == y.phase_;
  }

 private:
  Graph graph_;
  std::map<NodeId, PhaseSpace> phase_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::map<NodeId, std::vector<EdgeId>> in_edges_;
  std::vector<NodeId> sorted_nodes_;
};

using NetworkPtr = std::shared_ptr<const Network>;

NetworkPtr make_network(Graph graph, std::map<NodeId, PhaseSpace> phase);

// A map of networks: node and edge maps between two networks.
struct NetworkMap {
  NetworkPtr domain;
  NetworkPtr codomain;
  std::map<NodeId, NodeId> node_map;
  std::map<EdgeId, EdgeId> edge_map;

  const NodeId& node(const NodeId& a) const { return node_map.at(a); }
  const EdgeId& edge(const EdgeId& e) const { return edge_map.at(e); }

  friend bool operator==(const NetworkMap& x, const NetworkMap& y);
};

NetworkMap identity_map(const NetworkPtr& n);

// Violations are data, not failures.
struct Violation {
  std::string code;     // e.g. "edge-src-unknown"
  std::string subject;  // offending node or edge id
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_network(const Network& n);

// Homomorphism and phase-compatibility violations of a map, plus missing or
// dangling entries in the node and edge maps.
std::vector<Violation> check_network_map(const NetworkMap& m);

struct Slice {
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const Slice&, const Slice&) = default;
};

// Coordinates of the total phase space as one flat vector. Nodes are laid
// out in lexicographic order of their ids.
class StateIndex {
 public:
  StateIndex() = default;
  explicit StateIndex(const Network& n);

  std::size_t total_dim() const { return total_dim_; }
  const std::vector<NodeId>& order() const { return order_; }
  const Slice& slice(const NodeId& a) const { return slices_.at(a); }
  bool is_circle(std::size_t coordinate) const { return circle_[coordinate] != 0; }

  std::span<const double> view(std::span<const double> x, const NodeId& a) const {
    const Slice& s = slice(a);
    return x.subspan(s.offset, s.length);
  }

  friend bool operator==(const StateIndex&, const StateIndex&) = default;

 private:
  std::vector<NodeId> order_;
  std::map<NodeId, Slice> slices_;
  std::vector<char> circle_;
  std::size_t total_dim_ = 0;
};

StateIndex total_phase_space(const Network& n);

// The coordinate form of the induced map on total phase spaces. It runs
// backwards: codomain states are pulled to domain states by copying slices,
// x_a = x'_{phi(a)}. The differential is the same gather on tangent vectors.
class PhaseSpaceMap {
 public:
  PhaseSpaceMap(StateIndex from, StateIndex to, std::vector<std::size_t> gather)
      : from_(std::move(from)), to_(std::move(to)), gather_(std::move(gather)) {}

  // Codomain total space (input side).
  const StateIndex& source_index() const { return from_; }
  // Domain total space (output side).
  const StateIndex& target_index() const { return to_; }
  // gather()[i] is the input coordinate copied to output coordinate i.
  const std::vector<std::size_t>& gather() const { return gather_; }

  std::vector<double> operator()(std::span<const double> x) const;
  std::vector<double> differential(std::span<const double> v) const { return (*this)(v); }

 private:
  StateIndex from_;
  StateIndex to_;
  std::vector<std::size_t> gather_;
};

// Throws std::invalid_argument if check_network_map reports violations.
PhaseSpaceMap phase_space_map(const NetworkMap& m);

// second o first. Throws std::invalid_argument if first's codomain differs
// from second's domain.
NetworkMap compose_maps(const NetworkMap& first, const NetworkMap& second);

bool is_surjective_on_nodes(const NetworkMap& m);
bool is_injective_on_nodes(const NetworkMap& m);

}  // namespace fibra

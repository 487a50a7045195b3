#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fibra/graph_model.hpp"

namespace fibra {

struct LiftFailure {
  NodeId node;             // domain node a
  EdgeId codomain_edge;    // edge of the codomain ending at phi(a)
  std::size_t lift_count;  // 0 or >= 2

  friend bool operator==(const LiftFailure&, const LiftFailure&) = default;
};

struct FibrationReport {
  bool is_fibration = false;
  std::vector<LiftFailure> failures;
  bool surjective_on_nodes = false;
  bool injective_on_nodes = false;
  bool surjective_on_edges = false;
  bool injective_on_edges = false;
};

// Counts, for every domain node a and codomain edge e' into phi(a), the edges
// into a that map to e'. Requires a valid map (check_network_map).
FibrationReport check_fibration(const NetworkMap& m);

// Thrown when an operation requires a fibration (or a particular kind of one).
class NotAFibrationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Factorization {
  NetworkMap surjection;  // domain -> image subnetwork
  NetworkMap injection;   // image subnetwork -> codomain
};

Factorization factorize(const NetworkMap& m);

// Blocks are sorted internally and ordered by their least member, which is
// also the block id.
class Partition {
 public:
  Partition() = default;
  // Throws std::invalid_argument on empty or overlapping blocks.
  explicit Partition(std::vector<std::vector<NodeId>> blocks);

  const std::vector<std::vector<NodeId>>& blocks() const { return blocks_; }
  const NodeId& block_id(const NodeId& a) const { return block_of_.at(a); }
  bool contains(const NodeId& a) const { return block_of_.count(a) != 0; }

  friend bool operator==(const Partition& x, const Partition& y) { return x.blocks_ == y.blocks_; }

 private:
  std::vector<std::vector<NodeId>> blocks_;
  std::map<NodeId, NodeId> block_of_;
};

// Fiber partition of a surjective fibration: x_a = x_b whenever phi(a) = phi(b).
class Polydiagonal {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  Polydiagonal(NetworkPtr network, Partition fibers)
      : network_(std::move(network)), index_(*network_), fibers_(std::move(fibers)) {}

  const Partition& fibers() const { return fibers_; }
  const StateIndex& index() const { return index_; }

  // Largest coordinate difference inside any fiber. Circle coordinates use
  // the distance on S^1.
  double violation(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = kDefaultTolerance) const {
    return violation(x) <= tol;
  }

 private:
  NetworkPtr network_;
  StateIndex index_;
  Partition fibers_;
};

// Throws NotAFibrationError unless m is a fibration surjective on nodes.
Polydiagonal polydiagonal_of(const NetworkMap& m);

struct BalanceReport {
  bool balanced = false;
  // Two nodes of one block whose in-edge multisets over source blocks differ.
  std::optional<std::pair<NodeId, NodeId>> witness;
};

// Throws std::invalid_argument if the partition does not cover the node set
// or a block mixes phase spaces.
BalanceReport is_balanced(const Network& n, const Partition& p);

struct Quotient {
  Partition partition;
  NetworkPtr network;
  NetworkMap projection;
};

// Quotient network of a balanced partition. Quotient node ids are block ids;
// quotient edges are the in-edges of each block's least member, renamed
// "<block>:<edge>". Throws std::invalid_argument if p is not balanced.
Quotient quotient_by(const NetworkPtr& n, const Partition& p);

// Coarsest balanced partition refining the phase-space classes, by iterated
// refinement on in-edge source-block multisets, with its quotient.
Quotient coarsest_balanced(const NetworkPtr& n);

// Codomain nodes whose input network is isomorphic to that of some image
// node, sorted. Throws NotAFibrationError.
std::vector<NodeId> essential_image(const NetworkMap& m);

}  // namespace fibra

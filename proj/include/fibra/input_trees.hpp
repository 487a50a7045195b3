#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibra/graph_model.hpp"

namespace fibra {

struct Leaf {
  EdgeId edge;
  NodeId source;
  PhaseSpace type;

  friend bool operator==(const Leaf&, const Leaf&) = default;
};

// Height-1 input tree of a node: the root and one leaf per in-edge, ordered
// by edge id. A loop contributes a leaf whose source is the root itself.
struct InputTree {
  NodeId root;
  PhaseSpace root_type;
  std::vector<Leaf> leaves;

  std::vector<PhaseSpace> leaf_types() const;
  // Multiplicity of each leaf type.
  std::map<PhaseSpace, std::size_t> type_counts() const;
};

// Isomorphism of input networks I(from) -> I(to). The root necessarily maps
// to the root, so only the leaf bijection is stored.
struct TreeIso {
  NodeId from;
  NodeId to;
  std::map<EdgeId, EdgeId> leaf_bijection;

  friend bool operator==(const TreeIso&, const TreeIso&) = default;
};

// The map I(a) -> I(phi(a)) induced by an arbitrary map of networks; an
// isomorphism exactly when the map is bijective on leaves.
struct TreeMap {
  NodeId from;
  NodeId to;
  std::map<EdgeId, EdgeId> leaf_map;
  bool is_iso = false;

  // Throws std::logic_error if !is_iso.
  TreeIso as_iso() const;
};

class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultIsoCap = 1'000'000;

InputTree input_tree(const Network& n, const NodeId& a);

TreeMap induced_tree_map(const NetworkMap& m, const NodeId& a);

// |Aut(a)|: product over leaf types of (multiplicity)!. Throws
// std::overflow_error past 2^64.
std::uint64_t aut_order(const InputTree& tree);
// Same, but empty instead of throwing on overflow.
std::optional<std::uint64_t> try_aut_order(const InputTree& tree);

// All isomorphisms I(a) -> I(b) in lexicographic order of the image sequence
// of a's leaves. Throws EnumerationLimitError if there would be more than cap.
std::vector<TreeIso> enumerate_tree_isos(const Network& n, const NodeId& a, const NodeId& b,
                                         std::uint64_t cap = kDefaultIsoCap);

// First isomorphism in the enumeration order, without materializing the rest.
std::optional<TreeIso> first_tree_iso(const Network& n, const NodeId& a, const NodeId& b);

TreeIso identity_iso(const InputTree& tree);
TreeIso inverse(const TreeIso& iso);
// second o first; requires first.to == second.from.
TreeIso compose(const TreeIso& first, const TreeIso& second);

// Empty when iso is a valid isomorphism of input networks in n.
std::vector<std::string> check_tree_iso(const Network& n, const TreeIso& iso);

struct AutGroup {
  // Empty when the order exceeds 2^64.
  std::optional<std::uint64_t> order = 1;
  // Adjacent transpositions inside each same-type block of leaves.
  std::vector<TreeIso> generators;
  // Materialized only when order <= kAutMaterializeLimit.
  std::optional<std::vector<TreeIso>> elements;
};

inline constexpr std::uint64_t kAutMaterializeLimit = 24;

AutGroup automorphisms(const Network& n, const NodeId& a);

struct IsoClass {
  NodeId representative;
  std::vector<NodeId> members;
  // witness.at(member) : I(member) -> I(representative)
  std::map<NodeId, TreeIso> witness;
};

// Isomorphism classes of input networks, with one witness per member.
class SymmetryGroupoid {
 public:
  SymmetryGroupoid() = default;
  explicit SymmetryGroupoid(const Network& n);

  const std::vector<IsoClass>& classes() const { return classes_; }
  const std::map<NodeId, std::optional<std::uint64_t>>& aut_orders() const { return aut_orders_; }

  // Index into classes() of the class containing a.
  std::size_t class_of(const NodeId& a) const { return class_of_.at(a); }
  const IsoClass& class_containing(const NodeId& a) const { return classes_[class_of(a)]; }
  const NodeId& representative_of(const NodeId& a) const {
    return class_containing(a).representative;
  }

 private:
  std::vector<IsoClass> classes_;
  std::map<NodeId, std::optional<std::uint64_t>> aut_orders_;
  std::map<NodeId, std::size_t> class_of_;
};

SymmetryGroupoid symmetry_groupoid(const Network& n);

}  // namespace fibra

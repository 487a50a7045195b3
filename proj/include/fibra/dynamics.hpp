#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fibra/expr.hpp"
#include "fibra/graph_model.hpp"
#include "fibra/input_trees.hpp"
#include "fibra/kernels.hpp"

namespace fibra {

// Root type and leaf types of an input tree, in leaf (edge id) order.
struct ControlSignature {
  PhaseSpace root;
  std::vector<PhaseSpace> leaves;

  static ControlSignature of(const InputTree& tree) { return {tree.root_type, tree.leaf_types()}; }

  friend bool operator==(const ControlSignature&, const ControlSignature&) = default;
};

using InputStates = std::span<const std::span<const double>>;

// Arbitrary control function. Inputs arrive in leaf order; nothing makes it
// invariant under leaf permutations, so invariance is checked by sampling.
struct RawControl {
  enum class Invariance { kClaimed, kUnchecked };
  using Fn = std::function<std::vector<double>(std::span<const double> root, InputStates inputs)>;

  Fn fn;
  Invariance invariance = Invariance::kUnchecked;
};

// A control system on one input tree: maps the root state and the states of
// the leaves to a tangent vector at the root. Cheap to copy.
class Control {
 public:
  static Control from_expr(expr::ControlExpr e, ControlSignature sig);
  static Control from_raw(RawControl raw, ControlSignature sig);
  static Control zero(ControlSignature sig);
  // a*c1 + b*c2; both must have the same signature.
  static Control linear_combination(double a, const Control& c1, double b, const Control& c2);

  const ControlSignature& signature() const { return sig_; }
  // True for control expressions and combinations of them.
  bool invariant_by_construction() const;
  // The underlying expression, or nullptr.
  const expr::ControlExpr* expression() const;

  std::vector<double> evaluate(std::span<const double> root, InputStates inputs) const;

  // Control c' with c'(root, w) = c(root, v), v[j] = w[perm[j]]; new_leaves
  // are the leaf types in the new order.
  Control reindexed(const std::vector<std::size_t>& perm, std::vector<PhaseSpace> new_leaves) const;

  // perm mapping this control's inputs back to the underlying function's
  // original leaf positions (identity for a fresh control).
  const std::vector<std::size_t>& gather() const { return gather_; }

 private:
  struct Combination;
  using Impl = std::variant<expr::ControlExpr, RawControl, std::shared_ptr<const Combination>>;

  Control(std::shared_ptr<const Impl> impl, ControlSignature sig, ControlSignature original,
          std::vector<std::size_t> gather);

  std::vector<double> evaluate_impl(std::span<const double> root, InputStates ordered) const;

  std::shared_ptr<const Impl> impl_;
  ControlSignature sig_;
  ControlSignature original_;
  std::vector<std::size_t> gather_;
};

// Transport of a control along a tree isomorphism from -> to, given as a leaf
// bijection (edge of `from` -> edge of `to`). Coordinates of equal phase
// spaces coincide, so this is a pure re-indexing of inputs.
Control ctrl_transport(const InputTree& from, const InputTree& to, const std::map<EdgeId, EdgeId>& bijection,
                       const Control& c);
Control ctrl_transport(const Network& n, const TreeIso& iso, const Control& c);

// Max |c(root, v) - c(root, sigma v)| over random states and random
// sigma in Aut(a) (a uniformly random permutation inside each type block).
double check_invariance(const Control& c, const Network& n, const NodeId& a, std::size_t trials,
                        std::uint64_t seed, Execution exec = Execution::kParallel);

class VirtualVectorField {
 public:
  enum class Mode { kPerNode, kPerClass };

  static constexpr double kInvarianceTolerance = 1e-9;
  static constexpr std::size_t kInvarianceTrials = 64;

  // One control per node; signatures must match the input trees.
  static VirtualVectorField per_node(NetworkPtr n, std::map<NodeId, Control> controls);

  // One control per symmetry class, keyed by any member of the class.
  // Controls without invariance by construction are sampled and rejected if
  // they are not Aut-invariant at the key node.
  static VirtualVectorField per_class(NetworkPtr n, std::map<NodeId, Control> controls);

  Mode mode() const { return mode_; }
  const NetworkPtr& network() const { return network_; }
  // Only meaningful in per-class mode.
  const SymmetryGroupoid& groupoid() const { return *groupoid_; }
  // Per-class mode: controls keyed by class representative.
  const std::map<NodeId, Control>& class_controls() const { return class_controls_; }
  const std::map<NodeId, Control>& node_controls() const { return node_controls_; }
  const Control& at(const NodeId& a) const { return node_controls_.at(a); }

 private:
  Mode mode_ = Mode::kPerNode;
  NetworkPtr network_;
  std::shared_ptr<const SymmetryGroupoid> groupoid_;
  std::map<NodeId, Control> class_controls_;
  std::map<NodeId, Control> node_controls_;
};

// Per-node controls from one control per class: each member receives the
// representative's control transported along the inverse of its witness.
std::map<NodeId, Control> lift_to_nodes(const Network& n, const SymmetryGroupoid& g,
                                        const std::map<NodeId, Control>& per_class);

// The interconnected vector field on the total phase space: component a is
// w_a(x_a; x_{s(e)} for e in t^{-1}(a) in edge-id order). A source feeding a
// node through k parallel edges is passed k times.
class GlobalField {
 public:
  explicit GlobalField(const VirtualVectorField& w);

  const StateIndex& index() const { return index_; }
  const NetworkPtr& network() const { return network_; }
  std::size_t dim() const { return index_.total_dim(); }

  std::vector<double> operator()(std::span<const double> x) const;
  void evaluate(std::span<const double> x, std::span<double> out) const;

  // Row-major batch of count states -> row-major batch of tangent vectors.
  std::vector<double> evaluate_batch(std::span<const double> states, Execution exec = Execution::kParallel) const;

 private:
  struct Binding {
    NodeId node;
    Slice own;
    std::vector<Slice> sources;
    Control control;
  };

  NetworkPtr network_;
  StateIndex index_;
  std::vector<Binding> bindings_;
};

GlobalField interconnect(const VirtualVectorField& w);

// Pullback along a fibration: node a of the domain receives w'_{phi(a)}
// transported through the inverse of the induced tree isomorphism. A
// per-class field pulls back to a per-class field. Throws NotAFibrationError.
VirtualVectorField pullback(const NetworkMap& m, const VirtualVectorField& w);

struct KernelReport {
  // phi^* w' evaluated to zero at every sample.
  bool pullback_vanishes = false;
  // w' evaluated to zero at every sample on every essential-image node.
  bool vanishes_on_essential_image = false;
  std::vector<NodeId> essential_image;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  // The two conditions agree, as the kernel description requires.
  bool consistent() const { return pullback_vanishes == vanishes_on_essential_image; }
};

KernelReport pullback_kernel_check(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                   std::uint64_t seed, double tol = 0.0);

}  // namespace fibra

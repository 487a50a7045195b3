#include "fibra/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fibra/fibrations.hpp"
#include "fibra/sampling.hpp"

namespace fibra {

struct Control::Combination {
  double a;
  Control first;
  double b;
  Control second;
};

Control::Control(std::shared_ptr<const Impl> impl, ControlSignature sig, ControlSignature original,
                 std::vector<std::size_t> gather)
    : impl_(std::move(impl)), sig_(std::move(sig)), original_(std::move(original)), gather_(std::move(gather)) {}

namespace {

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

}  // namespace

Control Control::from_expr(expr::ControlExpr e, ControlSignature sig) {
  const auto expected = expr::Signature::of_leaves(sig.root, sig.leaves);
  if (e.signature().root != expected.root) {
    throw std::invalid_argument("control expression root type " + e.signature().root.name() +
                                " does not match " + sig.root.name());
  }
  // Types with count 0 are allowed in the expression signature.
  for (const auto& [type, count] : e.signature().inputs) {
    auto it = expected.inputs.find(type);
    if ((it == expected.inputs.end() ? 0 : it->second) != count) {
      throw std::invalid_argument("control expression input signature does not match the input tree");
    }
  }
  for (const auto& [type, count] : expected.inputs) {
    if (!e.signature().inputs.count(type)) {
      throw std::invalid_argument("control expression input signature does not match the input tree");
    }
  }
  const std::size_t k = sig.leaves.size();
  return Control(std::make_shared<const Impl>(std::move(e)), sig, sig, iota(k));
}

Control Control::from_raw(RawControl raw, ControlSignature sig) {
  if (!raw.fn) throw std::invalid_argument("raw control has no function");
  const std::size_t k = sig.leaves.size();
  return Control(std::make_shared<const Impl>(std::move(raw)), sig, sig, iota(k));
}

Control Control::zero(ControlSignature sig) {
  const auto dim = static_cast<std::size_t>(sig.root.dim);
  RawControl raw{[dim](std::span<const double>, InputStates) { return std::vector<double>(dim, 0.0); },
                 RawControl::Invariance::kClaimed};
  return from_raw(std::move(raw), std::move(sig));
}

Control Control::linear_combination(double a, const Control& c1, double b, const Control& c2) {
  if (!(c1.signature() == c2.signature())) {
    throw std::invalid_argument("cannot combine controls with different signatures");
  }
  auto combo = std::make_shared<const Combination>(Combination{a, c1, b, c2});
  return Control(std::make_shared<const Impl>(std::move(combo)), c1.signature(), c1.signature(),
                 iota(c1.signature().leaves.size()));
}

bool Control::invariant_by_construction() const {
  if (std::holds_alternative<expr::ControlExpr>(*impl_)) return true;
  if (const auto* c = std::get_if<std::shared_ptr<const Combination>>(impl_.get())) {
    return (*c)->first.invariant_by_construction() && (*c)->second.invariant_by_construction();
  }
  return false;
}

const expr::ControlExpr* Control::expression() const { return std::get_if<expr::ControlExpr>(impl_.get()); }

std::vector<double> Control::evaluate(std::span<const double> root, InputStates inputs) const {
  if (root.size() != static_cast<std::size_t>(sig_.root.dim)) {
    throw std::invalid_argument("control evaluated with root state of dimension " + std::to_string(root.size()) +
                                ", expected " + std::to_string(sig_.root.dim));
  }
  if (inputs.size() != sig_.leaves.size()) {
    throw std::invalid_argument("control evaluated with " + std::to_string(inputs.size()) + " inputs, expected " +
                                std::to_string(sig_.leaves.size()));
  }
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].size() != static_cast<std::size_t>(sig_.leaves[j].dim)) {
      throw std::invalid_argument("control input " + std::to_string(j) + " has the wrong dimension");
    }
  }
  std::vector<std::span<const double>> ordered(gather_.size());
  for (std::size_t i = 0; i < gather_.size(); ++i) ordered[i] = inputs[gather_[i]];
  std::vector<double> out = evaluate_impl(root, ordered);
  if (out.size() != static_cast<std::size_t>(sig_.root.dim)) {
    throw std::runtime_error("control returned a vector of dimension " + std::to_string(out.size()) +
                             ", expected " + std::to_string(sig_.root.dim));
  }
  return out;
}

std::vector<double> Control::evaluate_impl(std::span<const double> root, InputStates ordered) const {
  if (const auto* e = std::get_if<expr::ControlExpr>(impl_.get())) {
    std::vector<expr::TypedInput> typed;
    typed.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) typed.push_back({original_.leaves[i], ordered[i]});
    return e->evaluate(root, typed);
  }
  if (const auto* r = std::get_if<RawControl>(impl_.get())) return r->fn(root, ordered);
  const Combination& c = *std::get<std::shared_ptr<const Combination>>(*impl_);
  std::vector<double> x = c.first.evaluate(root, ordered);
  const std::vector<double> y = c.second.evaluate(root, ordered);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c.a * x[i] + c.b * y[i];
  return x;
}

Control Control::reindexed(const std::vector<std::size_t>& perm, std::vector<PhaseSpace> new_leaves) const {
  if (perm.size() != sig_.leaves.size() || new_leaves.size() != sig_.leaves.size()) {
    throw std::invalid_argument("re-indexing permutation has the wrong size");
  }
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= perm.size() || seen[perm[j]]) throw std::invalid_argument("re-indexing map is not a permutation");
    seen[perm[j]] = 1;
    if (new_leaves[perm[j]] != sig_.leaves[j]) throw std::invalid_argument("re-indexing changes a leaf type");
  }
  std::vector<std::size_t> gather(gather_.size());
  for (std::size_t i = 0; i < gather_.size(); ++i) gather[i] = perm[gather_[i]];
  return Control(impl_, ControlSignature{sig_.root, std::move(new_leaves)}, original_, std::move(gather));
}

Control ctrl_transport(const InputTree& from, const InputTree& to, const std::map<EdgeId, EdgeId>& bijection,
                       const Control& c) {
  if (!(c.signature() == ControlSignature::of(from))) {
    throw std::invalid_argument("control does not match the input tree of '" + from.root + "'");
  }
  if (from.root_type != to.root_type || from.leaves.size() != to.leaves.size()) {
    throw std::invalid_argument("input trees of '" + from.root + "' and '" + to.root + "' are not isomorphic");
  }
  std::map<EdgeId, std::size_t> position;
  for (std::size_t j = 0; j < to.leaves.size(); ++j) position[to.leaves[j].edge] = j;
  std::vector<std::size_t> perm(from.leaves.size());
  for (std::size_t j = 0; j < from.leaves.size(); ++j) {
    auto image = bijection.find(from.leaves[j].edge);
    if (image == bijection.end()) throw std::invalid_argument("leaf bijection misses '" + from.leaves[j].edge + "'");
    auto pos = position.find(image->second);
    if (pos == position.end()) throw std::invalid_argument("leaf bijection leaves I(" + to.root + ")");
    perm[j] = pos->second;
  }
  return c.reindexed(perm, to.leaf_types());
}

Control ctrl_transport(const Network& n, const TreeIso& iso, const Control& c) {
  return ctrl_transport(input_tree(n, iso.from), input_tree(n, iso.to), iso.leaf_bijection, c);
}

namespace {

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    if (std::isnan(d)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, d);
  }
  return worst;
}

struct TreeSample {
  std::vector<double> root;
  std::vector<std::vector<double>> inputs;

  std::vector<std::span<const double>> views() const {
    return std::vector<std::span<const double>>(inputs.begin(), inputs.end());
  }
};

TreeSample sample_tree(const InputTree& tree, Rng& rng) {
  TreeSample s;
  s.root = sample_state(tree.root_type, rng);
  for (const Leaf& l : tree.leaves) s.inputs.push_back(sample_state(l.type, rng));
  return s;
}

}  // namespace

double check_invariance(const Control& c, const Network& n, const NodeId& a, std::size_t trials,
                        std::uint64_t seed, Execution exec) {
  const InputTree tree = input_tree(n, a);
  if (!(c.signature() == ControlSignature::of(tree))) {
    throw std::invalid_argument("control does not match the input tree of '" + a + "'");
  }
  std::map<PhaseSpace, std::vector<std::size_t>> blocks;
  for (std::size_t j = 0; j < tree.leaves.size(); ++j) blocks[tree.leaves[j].type].push_back(j);

  return max_over(exec, trials, [&](std::size_t i) {
    Rng rng = stream(seed, i);
    const TreeSample s = sample_tree(tree, rng);
    // Random element of Aut(a): a shuffle inside each same-type block.
    std::vector<std::size_t> perm(tree.leaves.size());
    for (const auto& [type, positions] : blocks) {
      std::vector<std::size_t> shuffled = positions;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (std::size_t k = 0; k < positions.size(); ++k) perm[positions[k]] = shuffled[k];
    }
    const auto plain = s.views();
    std::vector<std::span<const double>> permuted(plain.size());
    for (std::size_t j = 0; j < plain.size(); ++j) permuted[j] = plain[perm[j]];
    return max_abs_diff(c.evaluate(s.root, plain), c.evaluate(s.root, permuted));
  });
}

std::map<NodeId, Control> lift_to_nodes(const Network& n, const SymmetryGroupoid& g,
                                        const std::map<NodeId, Control>& per_class) {
  std::map<NodeId, Control> out;
  for (const IsoClass& cls : g.classes()) {
    auto it = per_class.find(cls.representative);
    if (it == per_class.end()) {
      throw std::invalid_argument("no control for the class of '" + cls.representative + "'");
    }
    if (!(it->second.signature() == ControlSignature::of(input_tree(n, cls.representative)))) {
      throw std::invalid_argument("control for class '" + cls.representative + "' has the wrong signature");
    }
    for (const NodeId& m : cls.members) {
      out.emplace(m, ctrl_transport(n, inverse(cls.witness.at(m)), it->second));
    }
  }
  return out;
}

VirtualVectorField VirtualVectorField::per_node(NetworkPtr n, std::map<NodeId, Control> controls) {
  for (const NodeId& a : n->sorted_nodes()) {
    auto it = controls.find(a);
    if (it == controls.end()) throw std::invalid_argument("no control for node '" + a + "'");
    if (!(it->second.signature() == ControlSignature::of(input_tree(*n, a)))) {
      throw std::invalid_argument("control for node '" + a + "' has the wrong signature");
    }
  }
  for (const auto& [a, c] : controls) {
    if (!n->has_node(a)) throw std::invalid_argument("control for unknown node '" + a + "'");
  }
  VirtualVectorField w;
  w.mode_ = Mode::kPerNode;
  w.network_ = std::move(n);
  w.node_controls_ = std::move(controls);
  return w;
}

VirtualVectorField VirtualVectorField::per_class(NetworkPtr n, std::map<NodeId, Control> controls) {
  auto g = std::make_shared<const SymmetryGroupoid>(*n);
  std::map<NodeId, Control> by_rep;
  for (auto& [key, c] : controls) {
    if (!n->has_node(key)) throw std::invalid_argument("control for unknown node '" + key + "'");
    if (!(c.signature() == ControlSignature::of(input_tree(*n, key)))) {
      throw std::invalid_argument("control for node '" + key + "' has the wrong signature");
    }
    if (!c.invariant_by_construction()) {
      const double r = check_invariance(c, *n, key, kInvarianceTrials, 0, Execution::kSerial);
      if (r > kInvarianceTolerance) {
        throw std::invalid_argument("control for node '" + key + "' is not invariant under Aut (residual " +
                                    std::to_string(r) + ")");
      }
    }
    const IsoClass& cls = g->class_containing(key);
    Control at_rep = key == cls.representative ? c : ctrl_transport(*n, cls.witness.at(key), c);
    if (!by_rep.emplace(cls.representative, std::move(at_rep)).second) {
      throw std::invalid_argument("class of '" + cls.representative + "' has more than one control");
    }
  }
  VirtualVectorField w;
  w.mode_ = Mode::kPerClass;
  w.node_controls_ = lift_to_nodes(*n, *g, by_rep);
  w.class_controls_ = std::move(by_rep);
  w.groupoid_ = std::move(g);
  w.network_ = std::move(n);
  return w;
}

GlobalField::GlobalField(const VirtualVectorField& w) : network_(w.network()), index_(*network_) {
  for (const NodeId& a : index_.order()) {
    Binding b{a, index_.slice(a), {}, w.at(a)};
    for (const EdgeId& e : network_->in_edges(a)) b.sources.push_back(index_.slice(network_->edge(e).src));
    bindings_.push_back(std::move(b));
  }
}

void GlobalField::evaluate(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim() || out.size() != dim()) throw std::invalid_argument("state dimension mismatch");
  std::vector<std::span<const double>> inputs;
  for (const Binding& b : bindings_) {
    inputs.clear();
    for (const Slice& s : b.sources) inputs.push_back(x.subspan(s.offset, s.length));
    const std::vector<double> v = b.control.evaluate(x.subspan(b.own.offset, b.own.length), inputs);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(b.own.offset));
  }
}

std::vector<double> GlobalField::operator()(std::span<const double> x) const {
  std::vector<double> out(dim());
  evaluate(x, out);
  return out;
}

std::vector<double> GlobalField::evaluate_batch(std::span<const double> states, Execution exec) const {
  const std::size_t d = dim();
  if (d == 0 || states.size() % d != 0) throw std::invalid_argument("batch size is not a multiple of the state dimension");
  std::vector<double> out(states.size());
  std::span<double> sink(out);
  for_each_index(exec, states.size() / d, [&](std::size_t i) {
    evaluate(states.subspan(i * d, d), sink.subspan(i * d, d));
  });
  return out;
}

GlobalField interconnect(const VirtualVectorField& w) { return GlobalField(w); }

VirtualVectorField pullback(const NetworkMap& m, const VirtualVectorField& w) {
  if (auto v = check_network_map(m); !v.empty()) {
    throw std::invalid_argument("pullback: invalid network map: " + v.front().message);
  }
  if (!check_fibration(m).is_fibration) throw NotAFibrationError("pullback: map is not a fibration");
  if (!(*w.network() == *m.codomain)) {
    throw std::invalid_argument("pullback: field does not live on the codomain of the map");
  }
  auto pulled_at = [&](const NodeId& a) {
    const TreeIso iso = induced_tree_map(m, a).as_iso();
    const InputTree here = input_tree(*m.domain, a);
    const InputTree there = input_tree(*m.codomain, iso.to);
    return ctrl_transport(there, here, inverse(iso).leaf_bijection, w.at(iso.to));
  };
  std::map<NodeId, Control> controls;
  if (w.mode() == VirtualVectorField::Mode::kPerClass) {
    const SymmetryGroupoid g(*m.domain);
    for (const IsoClass& cls : g.classes()) controls.emplace(cls.representative, pulled_at(cls.representative));
    return VirtualVectorField::per_class(m.domain, std::move(controls));
  }
  for (const NodeId& a : m.domain->sorted_nodes()) controls.emplace(a, pulled_at(a));
  return VirtualVectorField::per_node(m.domain, std::move(controls));
}

KernelReport pullback_kernel_check(const NetworkMap& m, const VirtualVectorField& w, std::size_t samples,
                                   std::uint64_t seed, double tol) {
  KernelReport report;
  report.essential_image = essential_image(m);
  report.samples = samples;
  report.seed = seed;
  const VirtualVectorField pulled = pullback(m, w);

  auto vanishes = [&](const Network& n, const VirtualVectorField& field, const std::vector<NodeId>& nodes,
                      std::uint64_t stream_seed) {
    for (std::size_t i = 0; i < samples; ++i) {
      Rng rng = stream(stream_seed, i);
      for (const NodeId& a : nodes) {
        const TreeSample s = sample_tree(input_tree(n, a), rng);
        for (double v : field.at(a).evaluate(s.root, s.views())) {
          if (!(std::abs(v) <= tol)) return false;
        }
      }
    }
    return true;
  };
  report.pullback_vanishes = vanishes(*m.domain, pulled, m.domain->sorted_nodes(), seed);
  report.vanishes_on_essential_image = vanishes(*m.codomain, w, report.essential_image, splitmix64(seed));
  return report;
}

}  // namespace fibra

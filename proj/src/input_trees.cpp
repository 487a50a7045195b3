#include "fibra/input_trees.hpp"

#include <functional>
#include <set>

namespace fibra {

std::vector<PhaseSpace> InputTree::leaf_types() const {
  std::vector<PhaseSpace> out;
  out.reserve(leaves.size());
  for (const Leaf& l : leaves) out.push_back(l.type);
  return out;
}

std::map<PhaseSpace, std::size_t> InputTree::type_counts() const {
  std::map<PhaseSpace, std::size_t> out;
  for (const Leaf& l : leaves) ++out[l.type];
  return out;
}

TreeIso TreeMap::as_iso() const {
  if (!is_iso) throw std::logic_error("tree map " + from + " -> " + to + " is not an isomorphism");
  return TreeIso{from, to, leaf_map};
}

InputTree input_tree(const Network& n, const NodeId& a) {
  if (!n.has_node(a)) throw std::out_of_range("unknown node '" + a + "'");
  InputTree tree{a, n.space(a), {}};
  for (const EdgeId& e : n.in_edges(a)) {
    const NodeId& src = n.edge(e).src;
    tree.leaves.push_back(Leaf{e, src, n.space(src)});
  }
  return tree;
}

TreeMap induced_tree_map(const NetworkMap& m, const NodeId& a) {
  const NodeId& image = m.node(a);
  TreeMap out{a, image, {}, false};
  std::set<EdgeId> hit;
  for (const EdgeId& e : m.domain->in_edges(a)) {
    const EdgeId& f = m.edge(e);
    out.leaf_map[e] = f;
    hit.insert(f);
  }
  const auto& targets = m.codomain->in_edges(image);
  out.is_iso = hit.size() == out.leaf_map.size() && hit.size() == targets.size();
  return out;
}

std::uint64_t aut_order(const InputTree& tree) {
  std::uint64_t order = 1;
  for (const auto& [type, count] : tree.type_counts()) {
    for (std::uint64_t k = 2; k <= count; ++k) {
      if (__builtin_mul_overflow(order, k, &order)) {
        throw std::overflow_error("automorphism group order of '" + tree.root + "' exceeds 2^64");
      }
    }
  }
  return order;
}

std::optional<std::uint64_t> try_aut_order(const InputTree& tree) {
  try {
    return aut_order(tree);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

namespace {

bool same_signature(const InputTree& x, const InputTree& y) {
  return x.root_type == y.root_type && x.type_counts() == y.type_counts();
}

// Backtracking over x's leaves in order, trying y's leaves in order. Stops
// when visit returns false.
void for_each_iso(const InputTree& x, const InputTree& y,
                  const std::function<bool(const TreeIso&)>& visit) {
  if (!same_signature(x, y)) return;
  const std::size_t k = x.leaves.size();
  std::vector<char> used(k, 0);
  TreeIso current{x.root, y.root, {}};
  std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
    if (i == k) return visit(current);
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j] || y.leaves[j].type != x.leaves[i].type) continue;
      used[j] = 1;
      current.leaf_bijection[x.leaves[i].edge] = y.leaves[j].edge;
      const bool go_on = step(i + 1);
      current.leaf_bijection.erase(x.leaves[i].edge);
      used[j] = 0;
      if (!go_on) return false;
    }
    return true;
  };
  step(0);
}

}  // namespace

std::vector<TreeIso> enumerate_tree_isos(const Network& n, const NodeId& a, const NodeId& b,
                                         std::uint64_t cap) {
  const InputTree x = input_tree(n, a);
  const InputTree y = input_tree(n, b);
  std::vector<TreeIso> out;
  if (!same_signature(x, y)) return out;
  const std::uint64_t count = try_aut_order(x).value_or(UINT64_MAX);
  if (count > cap) {
    throw EnumerationLimitError("refusing to enumerate " + (count == UINT64_MAX ? std::string(">2^64") : std::to_string(count)) +
                                " isomorphisms " + a + " -> " + b + " (cap " + std::to_string(cap) + ")");
  }
  out.reserve(count);
  for_each_iso(x, y, [&](const TreeIso& iso) {
    out.push_back(iso);
    return true;
  });
  return out;
}

std::optional<TreeIso> first_tree_iso(const Network& n, const NodeId& a, const NodeId& b) {
  std::optional<TreeIso> out;
  for_each_iso(input_tree(n, a), input_tree(n, b), [&](const TreeIso& iso) {
    out = iso;
    return false;
  });
  return out;
}

TreeIso identity_iso(const InputTree& tree) {
  TreeIso out{tree.root, tree.root, {}};
  for (const Leaf& l : tree.leaves) out.leaf_bijection[l.edge] = l.edge;
  return out;
}

TreeIso inverse(const TreeIso& iso) {
  TreeIso out{iso.to, iso.from, {}};
  for (const auto& [x, y] : iso.leaf_bijection) out.leaf_bijection[y] = x;
  return out;
}

TreeIso compose(const TreeIso& first, const TreeIso& second) {
  if (first.to != second.from) {
    throw std::invalid_argument("cannot compose tree isomorphisms " + first.from + "->" + first.to +
                                " and " + second.from + "->" + second.to);
  }
  TreeIso out{first.from, second.to, {}};
  for (const auto& [x, y] : first.leaf_bijection) out.leaf_bijection[x] = second.leaf_bijection.at(y);
  return out;
}

std::vector<std::string> check_tree_iso(const Network& n, const TreeIso& iso) {
  std::vector<std::string> out;
  if (!n.has_node(iso.from) || !n.has_node(iso.to)) {
    out.push_back("unknown root");
    return out;
  }
  if (n.space(iso.from) != n.space(iso.to)) out.push_back("root phase spaces differ");
  const InputTree x = input_tree(n, iso.from);
  const InputTree y = input_tree(n, iso.to);
  std::map<EdgeId, PhaseSpace> y_types;
  for (const Leaf& l : y.leaves) y_types.emplace(l.edge, l.type);
  std::set<EdgeId> hit;
  for (const Leaf& l : x.leaves) {
    auto it = iso.leaf_bijection.find(l.edge);
    if (it == iso.leaf_bijection.end()) {
      out.push_back("leaf " + l.edge + " unmapped");
      continue;
    }
    auto ty = y_types.find(it->second);
    if (ty == y_types.end()) {
      out.push_back("leaf " + l.edge + " maps outside I(" + iso.to + ")");
      continue;
    }
    if (ty->second != l.type) out.push_back("leaf " + l.edge + " changes type");
    if (!hit.insert(it->second).second) out.push_back("leaf " + it->second + " hit twice");
  }
  if (iso.leaf_bijection.size() != x.leaves.size() || hit.size() != y.leaves.size()) {
    out.push_back("leaf map is not a bijection");
  }
  return out;
}

AutGroup automorphisms(const Network& n, const NodeId& a) {
  const InputTree tree = input_tree(n, a);
  AutGroup out;
  out.order = try_aut_order(tree);
  std::map<PhaseSpace, std::vector<EdgeId>> blocks;
  for (const Leaf& l : tree.leaves) blocks[l.type].push_back(l.edge);
  for (const auto& [type, edges] : blocks) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      TreeIso swap = identity_iso(tree);
      swap.leaf_bijection[edges[i]] = edges[i + 1];
      swap.leaf_bijection[edges[i + 1]] = edges[i];
      out.generators.push_back(std::move(swap));
    }
  }
  if (out.order && *out.order <= kAutMaterializeLimit) out.elements = enumerate_tree_isos(n, a, a);
  return out;
}

SymmetryGroupoid::SymmetryGroupoid(const Network& n) {
  using Key = std::pair<PhaseSpace, std::map<PhaseSpace, std::size_t>>;
  std::map<Key, std::size_t> index;
  for (const NodeId& a : n.sorted_nodes()) {
    const InputTree tree = input_tree(n, a);
    aut_orders_[a] = try_aut_order(tree);
    Key key{tree.root_type, tree.type_counts()};
    auto [it, fresh] = index.emplace(std::move(key), classes_.size());
    if (fresh) classes_.push_back(IsoClass{a, {}, {}});
    IsoClass& cls = classes_[it->second];
    cls.members.push_back(a);
    cls.witness.emplace(a, first_tree_iso(n, a, cls.representative).value());
    class_of_[a] = it->second;
  }
}

SymmetryGroupoid symmetry_groupoid(const Network& n) { return SymmetryGroupoid(n); }

}  // namespace fibra

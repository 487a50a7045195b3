#include "fibra/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fibra::io {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

namespace {

const json& field(const json& j, const char* key, const char* context) {
  if (!j.is_object()) throw InputError(std::string(context) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(context) + ": missing field '" + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key, const char* context) {
  const json& v = field(j, key, context);
  if (!v.is_string()) throw InputError(std::string(context) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::map<std::string, std::string> string_map(const json& j, const char* context) {
  if (!j.is_object()) throw InputError(std::string(context) + ": expected an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw InputError(std::string(context) + ": value for '" + k + "' must be a string");
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

}  // namespace

PhaseSpace space_from_json(const json& j) {
  const std::string kind = string_field(j, "kind", "space");
  if (kind == "S1") return PhaseSpace::circle();
  if (kind == "R") {
    const json& dim = field(j, "dim", "space");
    if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 1'000'000) {
      throw InputError("space: 'dim' must be a positive integer");
    }
    return PhaseSpace::euclidean(static_cast<int>(dim.get<long long>()));
  }
  throw InputError("space: unknown kind '" + kind + "'");
}

json space_to_json(const PhaseSpace& p) {
  if (p.is_circle()) return json{{"kind", "S1"}};
  return json{{"kind", "R"}, {"dim", p.dim}};
}

NetworkPtr network_from_json(const json& j) {
  const json& nodes = field(j, "nodes", "network");
  const json& edges = field(j, "edges", "network");
  if (!nodes.is_array() || !edges.is_array()) throw InputError("network: 'nodes' and 'edges' must be arrays");
  Graph g;
  std::map<NodeId, PhaseSpace> phase;
  for (const json& n : nodes) {
    NodeId id = string_field(n, "id", "node");
    phase.emplace(id, space_from_json(field(n, "space", "node")));
    g.nodes.push_back(std::move(id));
  }
  for (const json& e : edges) {
    g.edges.push_back(Edge{string_field(e, "id", "edge"), string_field(e, "src", "edge"), string_field(e, "tgt", "edge")});
  }
  return make_network(std::move(g), std::move(phase));
}

json network_to_json(const Network& n) {
  json nodes = json::array();
  for (const NodeId& a : n.graph().nodes) {
    json node{{"id", a}};
    if (auto it = n.phase().find(a); it != n.phase().end()) node["space"] = space_to_json(it->second);
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const Edge& e : n.graph().edges) edges.push_back(json{{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}});
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

NetworkMap map_from_json(const json& j, NetworkPtr domain, NetworkPtr codomain) {
  NetworkMap m{std::move(domain), std::move(codomain), string_map(field(j, "nodes", "map"), "map nodes"),
               string_map(field(j, "edges", "map"), "map edges")};
  return m;
}

json map_to_json(const NetworkMap& m) {
  return json{{"nodes", m.node_map}, {"edges", m.edge_map}};
}

Partition partition_from_json(const json& j) {
  const json& blocks = field(j, "blocks", "partition");
  if (!blocks.is_array()) throw InputError("partition: 'blocks' must be an array");
  std::vector<std::vector<NodeId>> out;
  for (const json& b : blocks) {
    if (!b.is_array()) throw InputError("partition: every block must be an array");
    std::vector<NodeId> block;
    for (const json& a : b) {
      if (!a.is_string()) throw InputError("partition: node ids must be strings");
      block.push_back(a.get<std::string>());
    }
    out.push_back(std::move(block));
  }
  try {
    return Partition(std::move(out));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
}

json partition_to_json(const Partition& p) { return json{{"blocks", p.blocks()}}; }

VirtualVectorField dynamics_from_json(const json& j, NetworkPtr n) {
  const json& classes = field(j, "classes", "dynamics");
  if (!classes.is_array()) throw InputError("dynamics: 'classes' must be an array");
  std::map<NodeId, Control> controls;
  for (const json& c : classes) {
    const NodeId rep = string_field(c, "representative", "dynamics class");
    if (!n->has_node(rep)) throw InputError("dynamics: unknown representative '" + rep + "'");
    const json& exprs = field(c, "exprs", "dynamics class");
    if (!exprs.is_array()) throw InputError("dynamics: 'exprs' must be an array of strings");
    std::vector<std::string> sources;
    for (const json& e : exprs) {
      if (!e.is_string()) throw InputError("dynamics: 'exprs' must be an array of strings");
      sources.push_back(e.get<std::string>());
    }
    const ControlSignature sig = ControlSignature::of(input_tree(*n, rep));
    try {
      auto parsed = expr::ControlExpr::parse(sources, expr::Signature::of_leaves(sig.root, sig.leaves));
      if (!controls.emplace(rep, Control::from_expr(std::move(parsed), sig)).second) {
        throw InputError("dynamics: representative '" + rep + "' listed twice");
      }
    } catch (const expr::ParseError& e) {
      throw InputError("dynamics: class '" + rep + "': " + e.what());
    }
  }
  try {
    return VirtualVectorField::per_class(std::move(n), std::move(controls));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("dynamics: ") + e.what());
  }
}

json dynamics_to_json(const VirtualVectorField& w) {
  auto texts = [](const Control& c) {
    const expr::ControlExpr* e = c.expression();
    if (!e) throw std::invalid_argument("only expression-backed controls can be serialized");
    return e->texts();
  };
  json out;
  if (w.mode() == VirtualVectorField::Mode::kPerClass) {
    json classes = json::array();
    for (const auto& [rep, c] : w.class_controls()) {
      classes.push_back(json{{"representative", rep}, {"exprs", texts(c)}});
    }
    out["classes"] = std::move(classes);
  }
  json nodes = json::array();
  for (const auto& [a, c] : w.node_controls()) {
    json binding{{"node", a}, {"exprs", texts(c)}};
    if (w.mode() == VirtualVectorField::Mode::kPerClass) binding["class"] = w.groupoid().representative_of(a);
    json inputs = json::array();
    for (const EdgeId& e : w.network()->in_edges(a)) inputs.push_back(e);
    binding["inputs"] = std::move(inputs);
    nodes.push_back(std::move(binding));
  }
  out["nodes"] = std::move(nodes);
  return out;
}

std::vector<double> state_from_json(const json& j, const Network& n) {
  const StateIndex index(n);
  std::vector<double> x;
  if (j.is_array()) {
    for (const json& v : j) {
      if (!v.is_number()) throw InputError("state: entries must be numbers");
      x.push_back(v.get<double>());
    }
    if (x.size() != index.total_dim()) {
      throw InputError("state: expected " + std::to_string(index.total_dim()) + " coordinates, got " +
                       std::to_string(x.size()));
    }
    return x;
  }
  if (!j.is_object()) throw InputError("state: expected an array or an object keyed by node");
  x.assign(index.total_dim(), 0.0);
  std::set<NodeId> seen;
  for (const auto& [a, coords] : j.items()) {
    if (!n.has_node(a)) throw InputError("state: unknown node '" + a + "'");
    const Slice& s = index.slice(a);
    const json arr = coords.is_number() ? json::array({coords}) : coords;
    if (!arr.is_array() || arr.size() != s.length) {
      throw InputError("state: node '" + a + "' needs " + std::to_string(s.length) + " coordinate(s)");
    }
    for (std::size_t k = 0; k < s.length; ++k) {
      if (!arr[k].is_number()) throw InputError("state: entries must be numbers");
      x[s.offset + k] = arr[k].get<double>();
    }
    seen.insert(a);
  }
  if (seen.size() != n.sorted_nodes().size()) throw InputError("state: every node needs coordinates");
  return x;
}

json state_to_json(const StateIndex& index, std::span<const double> x) {
  json out = json::object();
  for (const NodeId& a : index.order()) {
    const auto v = index.view(x, a);
    out[a] = std::vector<double>(v.begin(), v.end());
  }
  return out;
}

json violations_to_json(const std::vector<Violation>& v) {
  json out = json::array();
  for (const Violation& x : v) out.push_back(json{{"code", x.code}, {"subject", x.subject}, {"message", x.message}});
  return out;
}

json input_tree_to_json(const InputTree& t) {
  json leaves = json::array();
  for (const Leaf& l : t.leaves) {
    leaves.push_back(json{{"edge", l.edge}, {"source", l.source}, {"type", l.type.name()}});
  }
  return json{{"root", t.root}, {"root_type", t.root_type.name()}, {"leaves", std::move(leaves)}};
}

json tree_iso_to_json(const TreeIso& iso) {
  return json{{"from", iso.from}, {"to", iso.to}, {"leaves", iso.leaf_bijection}};
}

json groupoid_to_json(const Network& n, const SymmetryGroupoid& g) {
  json classes = json::array();
  for (const IsoClass& c : g.classes()) {
    json witnesses = json::object();
    for (const auto& [m, iso] : c.witness) witnesses[m] = iso.leaf_bijection;
    classes.push_back(json{{"representative", c.representative},
                           {"members", c.members},
                           {"root_type", n.space(c.representative).name()},
                           {"witnesses", std::move(witnesses)}});
  }
  json aut = json::object();
  for (const auto& [a, order] : g.aut_orders()) aut[a] = order ? json(*order) : json(nullptr);
  return json{{"classes", std::move(classes)}, {"aut_orders", std::move(aut)}};
}

json fibration_report_to_json(const FibrationReport& r) {
  json failures = json::array();
  for (const LiftFailure& f : r.failures) {
    failures.push_back(json{{"node", f.node}, {"codomain_edge", f.codomain_edge}, {"lift_count", f.lift_count}});
  }
  return json{{"is_fibration", r.is_fibration},
              {"failures", std::move(failures)},
              {"surjective_on_nodes", r.surjective_on_nodes},
              {"injective_on_nodes", r.injective_on_nodes},
              {"surjective_on_edges", r.surjective_on_edges},
              {"injective_on_edges", r.injective_on_edges}};
}

}  // namespace fibra::io

#include "fibra/fixtures.hpp"

#include <cstdio>
#include <stdexcept>

#include "fibra/expr.hpp"
#include "fibra/input_trees.hpp"

namespace fibra::fixtures {

namespace {

NetworkPtr build(std::vector<std::pair<NodeId, PhaseSpace>> nodes, std::vector<Edge> edges) {
  Graph g;
  std::map<NodeId, PhaseSpace> phase;
  for (auto& [id, space] : nodes) {
    g.nodes.push_back(id);
    phase.emplace(id, space);
  }
  g.edges = std::move(edges);
  return make_network(std::move(g), std::move(phase));
}

std::string edge_name(const std::string& src, const std::string& tgt) { return "e" + src + "_" + tgt; }

}  // namespace

NetworkPtr g3(PhaseSpace m) {
  return build({{"1", m}, {"2", m}, {"3", m}},
               {{"e1_2", "1", "2"}, {"e2_1", "2", "1"}, {"e2_3", "2", "3"}});
}

NetworkPtr loop(PhaseSpace m) { return build({{"o", m}}, {{"l", "o", "o"}}); }

NetworkPtr c2(PhaseSpace m) { return build({{"a", m}, {"b", m}}, {{"ab", "a", "b"}, {"ba", "b", "a"}}); }

NetworkMap phi(PhaseSpace m) {
  return NetworkMap{g3(m), loop(m), {{"1", "o"}, {"2", "o"}, {"3", "o"}}, {{"e1_2", "l"}, {"e2_1", "l"}, {"e2_3", "l"}}};
}

NetworkMap psi(PhaseSpace m) {
  return NetworkMap{g3(m), c2(m), {{"1", "a"}, {"2", "b"}, {"3", "a"}},
                    {{"e1_2", "ab"}, {"e2_1", "ba"}, {"e2_3", "ba"}}};
}

NetworkMap tau(PhaseSpace m) {
  return NetworkMap{c2(m), g3(m), {{"a", "1"}, {"b", "2"}}, {{"ab", "e1_2"}, {"ba", "e2_1"}}};
}

NetworkPtr four(PhaseSpace m) {
  return build({{"1", m}, {"2", m}, {"3", m}, {"4", m}}, {{"alpha", "1", "2"},
                                                          {"beta", "1", "2"},
                                                          {"gamma", "2", "3"},
                                                          {"zeta", "3", "4"},
                                                          {"epsilon", "3", "4"},
                                                          {"delta", "1", "4"}});
}

NetworkPtr two_class(PhaseSpace m, PhaseSpace n4) {
  return build({{"1", m}, {"2", m}, {"3", m}, {"4", n4}},
               {{"e1_3", "1", "3"}, {"e2_3", "2", "3"}, {"e3_4a", "3", "4"}, {"e3_4b", "3", "4"}});
}

NetworkPtr parallel_pair(PhaseSpace pa, PhaseSpace pb) {
  return build({{"a", pa}, {"b", pb}}, {{"alpha", "a", "b"}, {"beta", "a", "b"}});
}

NetworkPtr chain(PhaseSpace pa, PhaseSpace pb, PhaseSpace pc) {
  return build({{"a", pa}, {"b", pb}, {"c", pc}}, {{"alpha", "a", "b"}, {"beta", "a", "b"}, {"bc", "b", "c"}});
}

NetworkMap collapse(PhaseSpace m) {
  return NetworkMap{parallel_pair(m, m), loop(m), {{"a", "o"}, {"b", "o"}}, {{"alpha", "l"}, {"beta", "l"}}};
}

NetworkPtr string_graph(int n, PhaseSpace odd, PhaseSpace even) {
  if (n < 1) throw std::invalid_argument("string graph needs n >= 1");
  std::vector<std::pair<NodeId, PhaseSpace>> nodes;
  for (int k = 1; k <= 2 * n; ++k) nodes.emplace_back(std::to_string(k), k % 2 ? odd : even);
  std::vector<Edge> edges{{edge_name("1", "2"), "1", "2"}, {edge_name("2", "1"), "2", "1"}};
  for (int k = 2; k < 2 * n; ++k) {
    const std::string s = std::to_string(k);
    const std::string t = std::to_string(k + 1);
    edges.push_back({edge_name(s, t), s, t});
  }
  return build(std::move(nodes), std::move(edges));
}

NetworkPtr cycle(PhaseSpace odd, PhaseSpace even) {
  return build({{"a", odd}, {"b", even}}, {{"ab", "a", "b"}, {"ba", "b", "a"}});
}

NetworkMap string_to_cycle(int n, PhaseSpace odd, PhaseSpace even) {
  NetworkMap m{string_graph(n, odd, even), cycle(odd, even), {}, {}};
  for (int k = 1; k <= 2 * n; ++k) m.node_map[std::to_string(k)] = k % 2 ? "a" : "b";
  for (const Edge& e : m.domain->graph().edges) {
    // Edges out of odd nodes run a -> b, out of even nodes b -> a.
    m.edge_map[e.id] = std::stoi(e.src) % 2 ? "ab" : "ba";
  }
  return m;
}

NetworkPtr ten(PhaseSpace inner, PhaseSpace outer) {
  std::vector<std::pair<NodeId, PhaseSpace>> nodes;
  for (int k = 1; k <= 10; ++k) nodes.emplace_back(std::to_string(k), k <= 3 ? inner : outer);
  const std::vector<std::pair<int, int>> arrows{{1, 2}, {2, 1}, {2, 3}, {3, 6}, {3, 7},
                                                {2, 5}, {2, 8}, {1, 4}, {1, 9}, {1, 10}};
  std::vector<Edge> edges;
  for (auto [s, t] : arrows) {
    edges.push_back({edge_name(std::to_string(s), std::to_string(t)), std::to_string(s), std::to_string(t)});
  }
  return build(std::move(nodes), std::move(edges));
}

NetworkMap ten_inclusion(PhaseSpace inner, PhaseSpace outer) {
  return NetworkMap{g3(inner), ten(inner, outer), {{"1", "1"}, {"2", "2"}, {"3", "3"}},
                    {{"e1_2", "e1_2"}, {"e2_1", "e2_1"}, {"e2_3", "e2_3"}}};
}

NetworkMap two_sources(PhaseSpace m) {
  NetworkPtr g = build({{"a1", m}, {"a2", m}, {"b", m}}, {{"gamma", "a1", "b"}, {"delta", "a2", "b"}});
  NetworkPtr h = build({{"a", m}, {"b", m}, {"c", m}},
                       {{"gamma'", "a", "b"}, {"delta'", "a", "b"}, {"bc", "b", "c"}});
  return NetworkMap{g, h, {{"a1", "a"}, {"a2", "a"}, {"b", "b"}}, {{"gamma", "gamma'"}, {"delta", "delta'"}}};
}

NetworkMap discrete_collapse(PhaseSpace m) {
  return NetworkMap{build({{"a", m}, {"b", m}}, {}), build({{"c", m}}, {}), {{"a", "c"}, {"b", "c"}}, {}};
}

NetworkMap point_inclusion(PhaseSpace m) {
  return NetworkMap{build({{"c", m}}, {}), build({{"a", m}, {"b", m}}, {}), {{"c", "a"}}, {}};
}

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Control control_from(const Network& n, const NodeId& a, const std::vector<std::string>& sources) {
  const ControlSignature sig = ControlSignature::of(input_tree(n, a));
  return Control::from_expr(expr::ControlExpr::parse(sources, expr::Signature::of_leaves(sig.root, sig.leaves)),
                            sig);
}

}  // namespace

VirtualVectorField linear_dynamics(const NetworkPtr& n) {
  const SymmetryGroupoid g(*n);
  std::map<NodeId, Control> controls;
  for (const IsoClass& cls : g.classes()) {
    const InputTree tree = input_tree(*n, cls.representative);
    std::vector<std::string> sources;
    for (int k = 0; k < tree.root_type.dim; ++k) {
      std::string s;
      for (const auto& [type, count] : tree.type_counts()) {
        s += "sum(u in inputs[" + type.name() + "]) { u[" + std::to_string(k % type.dim) + "] } + ";
      }
      sources.push_back(s + "(-x[" + std::to_string(k) + "])");
    }
    controls.emplace(cls.representative, control_from(*n, cls.representative, sources));
  }
  return VirtualVectorField::per_class(n, std::move(controls));
}

VirtualVectorField kuramoto_dynamics(const NetworkPtr& n, double omega, double coupling) {
  const SymmetryGroupoid g(*n);
  std::map<NodeId, Control> controls;
  for (const IsoClass& cls : g.classes()) {
    const InputTree tree = input_tree(*n, cls.representative);
    if (!tree.root_type.is_circle()) throw std::invalid_argument("Kuramoto dynamics needs circle nodes");
    std::string s = number(omega);
    if (tree.type_counts().count(PhaseSpace::circle())) {
      s += " + " + number(coupling) + " * sum(u in inputs[S1]) { sin(u[0] - x[0]) }";
    }
    controls.emplace(cls.representative, control_from(*n, cls.representative, {s}));
  }
  return VirtualVectorField::per_class(n, std::move(controls));
}

namespace {

void add_map(Bundle& b, const std::string& name, const NetworkMap& m, const std::string& domain,
             const std::string& codomain, bool fibration) {
  b.networks.emplace(domain, m.domain);
  b.networks.emplace(codomain, m.codomain);
  // Share the bundle's network objects between maps.
  NetworkMap shared{b.networks.at(domain), b.networks.at(codomain), m.node_map, m.edge_map};
  if (!(*shared.domain == *m.domain) || !(*shared.codomain == *m.codomain)) {
    throw std::logic_error("fixture '" + b.name + "': network name reused for a different network");
  }
  b.maps.emplace(name, std::move(shared));
  b.map_ends.emplace(name, std::make_pair(domain, codomain));
  if (fibration) b.fibrations.insert(name);
}

void add_dynamics(Bundle& b, const std::string& name, const std::string& network, VirtualVectorField w) {
  b.dynamics.emplace(name, std::move(w));
  b.dynamics_network.emplace(name, network);
}

std::vector<Bundle> make_catalog() {
  std::vector<Bundle> out;
  {
    Bundle b{"motivating", "G3 with its maps to the loop and the 2-cycle and the 2-cycle embedding", {}, {}, {}, {}, {}, {}};
    add_map(b, "phi", phi(), "g3", "loop", true);
    add_map(b, "psi", psi(), "g3", "c2", true);
    add_map(b, "tau", tau(), "c2", "g3", true);
    for (const char* net : {"g3", "loop", "c2"}) {
      add_dynamics(b, std::string("linear-") + net, net, linear_dynamics(b.networks.at(net)));
    }
    out.push_back(std::move(b));
  }
  {
    Bundle b{"motivating-s1", "the motivating diagram with circle phase spaces", {}, {}, {}, {}, {}, {}};
    const PhaseSpace s1 = PhaseSpace::circle();
    add_map(b, "phi", phi(s1), "g3", "loop", true);
    add_map(b, "psi", psi(s1), "g3", "c2", true);
    add_map(b, "tau", tau(s1), "c2", "g3", true);
    for (const char* net : {"g3", "loop", "c2"}) {
      add_dynamics(b, std::string("kuramoto-") + net, net, kuramoto_dynamics(b.networks.at(net)));
    }
    out.push_back(std::move(b));
  }
  {
    Bundle b{"four", "four-node graph with parallel edges", {}, {}, {}, {}, {}, {}};
    b.networks.emplace("four", four());
    add_dynamics(b, "linear-four", "four", linear_dynamics(b.networks.at("four")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"two-class", "1,2 -> 3 => 4, with all spaces equal and with node 4 distinct", {}, {}, {}, {}, {}, {}};
    b.networks.emplace("two-class", two_class());
    b.networks.emplace("two-class-n", two_class(kR1, kR2));
    add_dynamics(b, "linear-two-class", "two-class", linear_dynamics(b.networks.at("two-class")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"parallel-pair", "a => b, the chain a => b -> c, and the non-fibration collapse onto a loop", {}, {}, {}, {}, {}, {}};
    b.networks.emplace("chain", chain());
    add_map(b, "collapse", collapse(), "pair", "loop", false);
    out.push_back(std::move(b));
  }
  for (int n : {2, 3}) {
    const std::string suffix = "n" + std::to_string(n);
    Bundle b{"string-" + suffix, "string graph over the 2-cycle, odd nodes R1, even nodes R2", {}, {}, {}, {}, {}, {}};
    add_map(b, "phi", string_to_cycle(n), "string", "cycle", true);
    add_dynamics(b, "linear-cycle", "cycle", linear_dynamics(b.networks.at("cycle")));
    out.push_back(std::move(b));
  }
  {
    const PhaseSpace s1 = PhaseSpace::circle();
    Bundle b{"string-n2-s1", "string graph over the 2-cycle with circle phase spaces", {}, {}, {}, {}, {}, {}};
    add_map(b, "phi", string_to_cycle(2, s1, s1), "string", "cycle", true);
    add_dynamics(b, "kuramoto-cycle", "cycle", kuramoto_dynamics(b.networks.at("cycle")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"ten", "G3 included in the ten-node graph, all spaces equal", {}, {}, {}, {}, {}, {}};
    add_map(b, "i", ten_inclusion(), "g3", "ten", true);
    add_dynamics(b, "linear-ten", "ten", linear_dynamics(b.networks.at("ten")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"ten-mixed", "G3 included in the ten-node graph, outer nodes R2", {}, {}, {}, {}, {}, {}};
    add_map(b, "i", ten_inclusion(kR1, kR2), "g3", "ten", true);
    add_dynamics(b, "linear-ten", "ten", linear_dynamics(b.networks.at("ten")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"two-sources", "two sources onto the double edge of a three-node chain", {}, {}, {}, {}, {}, {}};
    add_map(b, "phi", two_sources(), "sources", "chain", true);
    add_dynamics(b, "linear-chain", "chain", linear_dynamics(b.networks.at("chain")));
    out.push_back(std::move(b));
  }
  {
    Bundle b{"discrete", "edgeless collapse (diagonal) and point inclusion (projection)", {}, {}, {}, {}, {}, {}};
    add_map(b, "collapse", discrete_collapse(), "pair", "point", true);
    add_map(b, "inclusion", point_inclusion(), "point-c", "pair-ab", true);
    add_dynamics(b, "linear-point", "point", linear_dynamics(b.networks.at("point")));
    add_dynamics(b, "linear-pair-ab", "pair-ab", linear_dynamics(b.networks.at("pair-ab")));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

const std::vector<Bundle>& catalog() {
  static const std::vector<Bundle> kCatalog = make_catalog();
  return kCatalog;
}

const Bundle& bundle(const std::string& name) {
  for (const Bundle& b : catalog()) {
    if (b.name == name) return b;
  }
  throw std::out_of_range("no fixture named '" + name + "'");
}

}  // namespace fibra::fixtures

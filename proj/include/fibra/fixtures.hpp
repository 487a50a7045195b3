#pragma once

// Worked example networks, maps and dynamics.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fibra/dynamics.hpp"
#include "fibra/graph_model.hpp"

namespace fibra::fixtures {

inline const PhaseSpace kR1 = PhaseSpace::euclidean(1);
inline const PhaseSpace kR2 = PhaseSpace::euclidean(2);

// 1 <-> 2 -> 3 with edges e1_2, e2_1, e2_3.
NetworkPtr g3(PhaseSpace m = kR1);
// One node "o" with a loop "l".
NetworkPtr loop(PhaseSpace m = kR1);
// a <-> b with edges ab, ba.
NetworkPtr c2(PhaseSpace m = kR1);

NetworkMap phi(PhaseSpace m = kR1);  // g3 -> loop
NetworkMap psi(PhaseSpace m = kR1);  // g3 -> c2, 1,3 -> a, 2 -> b
NetworkMap tau(PhaseSpace m = kR1);  // c2 -> g3, a -> 1, b -> 2

// 1 =(alpha,beta)=> 2 -gamma-> 3 =(epsilon,zeta)=> 4, 1 -delta-> 4.
NetworkPtr four(PhaseSpace m = kR1);

// 1 -> 3, 2 -> 3, 3 => 4 (two parallel edges); node 4 gets space n4.
NetworkPtr two_class(PhaseSpace m = kR1, PhaseSpace n4 = kR1);

// a =(alpha,beta)=> b.
NetworkPtr parallel_pair(PhaseSpace pa = kR1, PhaseSpace pb = kR1);
// a =(alpha,beta)=> b -> c.
NetworkPtr chain(PhaseSpace pa = kR1, PhaseSpace pb = kR1, PhaseSpace pc = kR1);
// parallel_pair -> loop, not a fibration.
NetworkMap collapse(PhaseSpace m = kR1);

// 1 <-> 2 -> 3 -> ... -> 2n; odd nodes get `odd`, even nodes `even`.
NetworkPtr string_graph(int n, PhaseSpace odd = kR1, PhaseSpace even = kR2);
// a <-> b with a: odd, b: even.
NetworkPtr cycle(PhaseSpace odd = kR1, PhaseSpace even = kR2);
NetworkMap string_to_cycle(int n, PhaseSpace odd = kR1, PhaseSpace even = kR2);

// The ten-node graph containing g3: nodes 1..3 get `inner`, 4..10 `outer`.
NetworkPtr ten(PhaseSpace inner = kR1, PhaseSpace outer = kR1);
NetworkMap ten_inclusion(PhaseSpace inner = kR1, PhaseSpace outer = kR1);

// a1 -gamma-> b <-delta- a2 onto a =(gamma',delta')=> b -> c.
NetworkMap two_sources(PhaseSpace m = kR1);

// Two isolated nodes onto one node, and the inclusion of one node.
NetworkMap discrete_collapse(PhaseSpace m = kR1);
NetworkMap point_inclusion(PhaseSpace m = kR1);

// Diffusive coupling: component k of each class control is
// sum over input types T of sum(u in inputs[T]) { u[k mod dim T] } - x[k].
VirtualVectorField linear_dynamics(const NetworkPtr& n);
// For circle networks: omega + coupling * sum(u in inputs[S1]) { sin(u[0] - x[0]) }.
VirtualVectorField kuramoto_dynamics(const NetworkPtr& n, double omega = 1.0, double coupling = 0.8);

struct Bundle {
  std::string name;
  std::string description;
  std::map<std::string, NetworkPtr> networks;
  std::map<std::string, NetworkMap> maps;
  // Domain and codomain network names of each map.
  std::map<std::string, std::pair<std::string, std::string>> map_ends;
  // Maps documented as fibrations.
  std::set<std::string> fibrations;
  // Dynamics, keyed by name, and the network each lives on.
  std::map<std::string, VirtualVectorField> dynamics;
  std::map<std::string, std::string> dynamics_network;
};

const std::vector<Bundle>& catalog();
// Throws std::out_of_range for unknown names.
const Bundle& bundle(const std::string& name);

}  // namespace fibra::fixtures

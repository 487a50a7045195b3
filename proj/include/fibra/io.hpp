#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fibra/dynamics.hpp"
#include "fibra/fibrations.hpp"
#include "fibra/graph_model.hpp"
#include "fibra/input_trees.hpp"

namespace fibra::io {

using nlohmann::json;

// Malformed files or documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// {"nodes": [{"id", "space": {"kind": "R", "dim"} | {"kind": "S1"}}],
//  "edges": [{"id", "src", "tgt"}]}
NetworkPtr network_from_json(const json& j);
json network_to_json(const Network& n);
json space_to_json(const PhaseSpace& p);
PhaseSpace space_from_json(const json& j);

// {"nodes": {id: id}, "edges": {id: id}}
NetworkMap map_from_json(const json& j, NetworkPtr domain, NetworkPtr codomain);
json map_to_json(const NetworkMap& m);

// {"blocks": [[id, ...], ...]}
Partition partition_from_json(const json& j);
json partition_to_json(const Partition& p);

// {"classes": [{"representative": id, "exprs": [str, ...]}]}; the signature
// of each class comes from the representative's input tree.
VirtualVectorField dynamics_from_json(const json& j, NetworkPtr n);
// Classes (per-class mode) and per-node bindings. Every control must be
// expression-backed.
json dynamics_to_json(const VirtualVectorField& w);

// Flat array in state-index order, or an object {node: [coords]}.
std::vector<double> state_from_json(const json& j, const Network& n);
json state_to_json(const StateIndex& index, std::span<const double> x);

json violations_to_json(const std::vector<Violation>& v);
json input_tree_to_json(const InputTree& t);
json tree_iso_to_json(const TreeIso& iso);
json groupoid_to_json(const Network& n, const SymmetryGroupoid& g);
json fibration_report_to_json(const FibrationReport& r);

}  // namespace fibra::io

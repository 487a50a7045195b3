#pragma once

// Control expressions: a small language for per-class control systems in
// which inputs can only be read through symmetric aggregators over a typed
// input group, e.g.
//
//   sum(u in inputs[S1]) { sin(u[0] - x[0]) }
//
// x[i] is the i-th coordinate of the root state; u is bound to each input of
// the named phase-space type in turn. Aggregation visits inputs in a
// canonical (sorted) order, so results are bit-identical under any
// permutation of same-type inputs.

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fibra/graph_model.hpp"

namespace fibra::expr {

struct SourceLoc {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourceLoc loc);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, SourceLoc loc);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

enum class Func { kSin, kCos, kTan, kExp, kLog, kSqrt, kAbs, kTanh };
enum class AggKind { kSum, kMean };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { kNumber, kRoot, kBound, kNeg, kCall, kBinary, kPower, kAggregate };

  Kind kind = Kind::kNumber;
  SourceLoc loc;
  double number = 0.0;         // kNumber
  int index = 0;               // kRoot, kBound
  std::string var;             // kBound, kAggregate
  Func func = Func::kSin;      // kCall
  char op = '+';               // kBinary: + - * /
  int exponent = 1;            // kPower
  AggKind agg = AggKind::kSum; // kAggregate
  PhaseSpace group;            // kAggregate
  std::vector<NodePtr> args;
};

// Structural equality, ignoring source locations.
bool equal(const Node& x, const Node& y);

// Text that parses back to a structurally equal tree.
std::string print(const Node& n);

// Root phase space plus the multiset of input types available to
// aggregators. A type listed with count 0 may be aggregated over (an empty
// group); a type not listed at all is rejected at parse time.
struct Signature {
  PhaseSpace root;
  std::map<PhaseSpace, std::size_t> inputs;

  static Signature of_leaves(const PhaseSpace& root, std::span<const PhaseSpace> leaves);
};

NodePtr parse_expression(std::string_view src, const Signature& sig);

struct TypedInput {
  PhaseSpace type;
  std::span<const double> state;
};

// One parsed expression per output component.
class ControlExpr {
 public:
  static ControlExpr parse(const std::vector<std::string>& sources, const Signature& sig);

  const Signature& signature() const { return sig_; }
  const std::vector<NodePtr>& components() const { return components_; }
  // Printed form of each component.
  std::vector<std::string> texts() const;

  // Throws EvalError on a signature mismatch or a numeric domain fault.
  std::vector<double> evaluate(std::span<const double> root, std::span<const TypedInput> inputs) const;

 private:
  Signature sig_;
  std::vector<NodePtr> components_;
};

}  // namespace fibra::expr

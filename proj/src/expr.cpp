#include "fibra/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace fibra::expr {

ParseError::ParseError(const std::string& what, SourceLoc loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what),
      loc_(loc) {}

EvalError::EvalError(const std::string& what, SourceLoc loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what),
      loc_(loc) {}

namespace {

struct FuncName {
  const char* name;
  Func func;
};

constexpr FuncName kFuncs[] = {
    {"sin", Func::kSin}, {"cos", Func::kCos},   {"tan", Func::kTan}, {"exp", Func::kExp},
    {"log", Func::kLog}, {"sqrt", Func::kSqrt}, {"abs", Func::kAbs}, {"tanh", Func::kTanh},
};

const char* func_name(Func f) {
  for (const auto& entry : kFuncs) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

bool is_reserved(const std::string& word) {
  static const std::set<std::string> kReserved = {"x", "inputs", "in", "sum", "mean", "pi", "sin", "cos",
                                                  "tan", "exp", "log", "sqrt", "abs", "tanh"};
  return kReserved.count(word) != 0;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { kNumber, kIdent, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = loc_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::kEnd;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Tok::kNumber;
        t.text = lex_number();
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
          throw ParseError("malformed number '" + t.text + "'", t.loc);
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::string_view("+-*/^()[]{}").find(c) != std::string_view::npos) {
        t.kind = Tok::kSymbol;
        t.text = std::string(1, advance());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", t.loc);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else {
      ++loc_.column;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string lex_number() {
    std::string s;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      s += advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      s += advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) s += advance();
      digits();
    }
    return s;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  SourceLoc loc_;
};

// ---------------------------------------------------------------------------
// Parser
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' '-'? INT)*
//   primary := NUMBER | 'pi' | 'x' '[' INT ']' | VAR '[' INT ']'
//            | FUNC '(' expr ')' | AGG '(' VAR 'in' 'inputs' '[' TYPE ']' ')' '{' expr '}'
//            | '(' expr ')'

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Signature& sig) : toks_(std::move(tokens)), sig_(sig) {}

  NodePtr parse() {
    NodePtr n = expr();
    if (peek().kind != Tok::kEnd) throw ParseError("unexpected '" + peek().text + "'", peek().loc);
    return n;
  }

 private:
  struct Binding {
    std::string var;
    PhaseSpace group;
  };

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_symbol(char c) const { return peek().kind == Tok::kSymbol && peek().text[0] == c; }

  const Token& expect_symbol(char c) {
    if (!at_symbol(c)) {
      throw ParseError(std::string("expected '") + c + "' but found " + describe(peek()), peek().loc);
    }
    return next();
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::kEnd ? std::string("end of input") : "'" + t.text + "'";
  }

  int expect_int() {
    const Token& t = peek();
    if (t.kind != Tok::kNumber || t.text.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("expected a non-negative integer but found " + describe(t), t.loc);
    }
    next();
    if (t.text.size() > 6) throw ParseError("integer '" + t.text + "' too large", t.loc);
    return std::stoi(t.text);
  }

  static NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

  NodePtr expr() {
    NodePtr lhs = term();
    while (at_symbol('+') || at_symbol('-')) {
      const Token& t = next();
      Node n{.kind = Node::Kind::kBinary, .loc = t.loc, .op = t.text[0]};
      n.args = {lhs, term()};
      lhs = make(std::move(n));
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (at_symbol('*') || at_symbol('/')) {
      const Token& t = next();
      Node n{.kind = Node::Kind::kBinary, .loc = t.loc, .op = t.text[0]};
      n.args = {lhs, unary()};
      lhs = make(std::move(n));
    }
    return lhs;
  }

  NodePtr unary() {
    if (at_symbol('-')) {
      const Token& t = next();
      Node n{.kind = Node::Kind::kNeg, .loc = t.loc};
      n.args = {unary()};
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (at_symbol('^')) {
      const Token& t = next();
      bool negative = false;
      if (at_symbol('-')) {
        next();
        negative = true;
      }
      const int e = expect_int();
      Node n{.kind = Node::Kind::kPower, .loc = t.loc, .exponent = negative ? -e : e};
      n.args = {base};
      base = make(std::move(n));
    }
    return base;
  }

  const Binding* lookup(const std::string& var) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->var == var) return &*it;
    }
    return nullptr;
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::kNumber) {
      next();
      return make(Node{.kind = Node::Kind::kNumber, .loc = t.loc, .number = t.number});
    }
    if (at_symbol('(')) {
      next();
      NodePtr inner = expr();
      expect_symbol(')');
      return inner;
    }
    if (t.kind != Tok::kIdent) throw ParseError("unexpected " + describe(t), t.loc);

    const std::string word = t.text;
    const SourceLoc loc = t.loc;
    next();

    if (word == "pi") return make(Node{.kind = Node::Kind::kNumber, .loc = loc, .number = std::numbers::pi});

    if (word == "x") {
      expect_symbol('[');
      const SourceLoc iloc = peek().loc;
      const int i = expect_int();
      expect_symbol(']');
      if (i >= sig_.root.dim) {
        throw ParseError("x[" + std::to_string(i) + "] out of range for root space " + sig_.root.name(), iloc);
      }
      return make(Node{.kind = Node::Kind::kRoot, .loc = loc, .index = i});
    }

    for (const auto& f : kFuncs) {
      if (word == f.name) {
        expect_symbol('(');
        Node n{.kind = Node::Kind::kCall, .loc = loc, .func = f.func};
        n.args = {expr()};
        expect_symbol(')');
        return make(std::move(n));
      }
    }

    if (word == "sum" || word == "mean") return aggregate(word == "sum" ? AggKind::kSum : AggKind::kMean, loc);

    if (word == "inputs") throw ParseError("input reference outside aggregator", loc);

    if (const Binding* b = lookup(word)) {
      expect_symbol('[');
      const SourceLoc iloc = peek().loc;
      const int i = expect_int();
      expect_symbol(']');
      if (i >= b->group.dim) {
        throw ParseError(word + "[" + std::to_string(i) + "] out of range for input type " + b->group.name(),
                         iloc);
      }
      return make(Node{.kind = Node::Kind::kBound, .loc = loc, .index = i, .var = word});
    }
    // An indexed name that is not bound is an attempt to read an input
    // outside any aggregator.
    if (at_symbol('[')) throw ParseError("input reference outside aggregator", loc);
    throw ParseError("unknown identifier '" + word + "'", loc);
  }

  NodePtr aggregate(AggKind kind, SourceLoc loc) {
    expect_symbol('(');
    const Token& var = peek();
    if (var.kind != Tok::kIdent) throw ParseError("expected a variable name but found " + describe(var), var.loc);
    if (is_reserved(var.text)) throw ParseError("'" + var.text + "' cannot be used as a variable name", var.loc);
    if (lookup(var.text)) throw ParseError("variable '" + var.text + "' is already bound", var.loc);
    const std::string name = var.text;
    next();
    expect_keyword("in");
    expect_keyword("inputs");
    expect_symbol('[');
    const Token& type = peek();
    if (type.kind != Tok::kIdent) throw ParseError("expected an input type but found " + describe(type), type.loc);
    PhaseSpace group;
    try {
      group = PhaseSpace::from_name(type.text);
    } catch (const std::invalid_argument&) {
      throw ParseError("unknown input type '" + type.text + "'", type.loc);
    }
    if (!sig_.inputs.count(group)) {
      throw ParseError("input type " + group.name() + " does not occur in the signature", type.loc);
    }
    next();
    expect_symbol(']');
    expect_symbol(')');
    expect_symbol('{');
    scope_.push_back(Binding{name, group});
    NodePtr body = expr();
    scope_.pop_back();
    expect_symbol('}');
    Node n{.kind = Node::Kind::kAggregate, .loc = loc, .var = name, .agg = kind, .group = group};
    n.args = {body};
    return make(std::move(n));
  }

  void expect_keyword(const char* word) {
    if (peek().kind != Tok::kIdent || peek().text != word) {
      throw ParseError(std::string("expected '") + word + "' but found " + describe(peek()), peek().loc);
    }
    next();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<Binding> scope_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct Frame {
  const std::string* var;
  std::span<const double> state;
};

struct Env {
  std::span<const double> root;
  const std::map<PhaseSpace, std::vector<std::span<const double>>>* groups;
  std::vector<Frame> frames;
};

double eval(const Node& n, Env& env) {
  switch (n.kind) {
    case Node::Kind::kNumber:
      return n.number;
    case Node::Kind::kRoot:
      return env.root[n.index];
    case Node::Kind::kBound:
      for (auto it = env.frames.rbegin(); it != env.frames.rend(); ++it) {
        if (*it->var == n.var) return it->state[n.index];
      }
      throw EvalError("unbound variable '" + n.var + "'", n.loc);
    case Node::Kind::kNeg:
      return -eval(*n.args[0], env);
    case Node::Kind::kCall: {
      const double v = eval(*n.args[0], env);
      switch (n.func) {
        case Func::kSin: return std::sin(v);
        case Func::kCos: return std::cos(v);
        case Func::kTan: return std::tan(v);
        case Func::kExp: return std::exp(v);
        case Func::kLog:
          if (!(v > 0.0)) throw EvalError("log of non-positive value", n.loc);
          return std::log(v);
        case Func::kSqrt:
          if (v < 0.0) throw EvalError("sqrt of negative value", n.loc);
          return std::sqrt(v);
        case Func::kAbs: return std::abs(v);
        case Func::kTanh: return std::tanh(v);
      }
      break;
    }
    case Node::Kind::kBinary: {
      const double l = eval(*n.args[0], env);
      const double r = eval(*n.args[1], env);
      switch (n.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/':
          if (r == 0.0) throw EvalError("division by zero", n.loc);
          return l / r;
      }
      break;
    }
    case Node::Kind::kPower: {
      const double b = eval(*n.args[0], env);
      if (n.exponent < 0 && b == 0.0) throw EvalError("zero raised to a negative power", n.loc);
      double acc = 1.0;
      for (int k = 0; k < std::abs(n.exponent); ++k) acc *= b;
      return n.exponent < 0 ? 1.0 / acc : acc;
    }
    case Node::Kind::kAggregate: {
      auto it = env.groups->find(n.group);
      static const std::vector<std::span<const double>> kEmpty;
      const auto& members = it == env.groups->end() ? kEmpty : it->second;
      if (n.agg == AggKind::kMean && members.empty()) throw EvalError("mean of empty group", n.loc);
      double acc = 0.0;
      env.frames.push_back(Frame{&n.var, {}});
      for (const auto& state : members) {
        env.frames.back().state = state;
        acc += eval(*n.args[0], env);
      }
      env.frames.pop_back();
      return n.agg == AggKind::kMean ? acc / static_cast<double>(members.size()) : acc;
    }
  }
  throw EvalError("malformed expression", n.loc);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool equal(const Node& x, const Node& y) {
  if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
  switch (x.kind) {
    case Node::Kind::kNumber:
      if (x.number != y.number) return false;
      break;
    case Node::Kind::kRoot:
      if (x.index != y.index) return false;
      break;
    case Node::Kind::kBound:
      if (x.index != y.index || x.var != y.var) return false;
      break;
    case Node::Kind::kNeg:
      break;
    case Node::Kind::kCall:
      if (x.func != y.func) return false;
      break;
    case Node::Kind::kBinary:
      if (x.op != y.op) return false;
      break;
    case Node::Kind::kPower:
      if (x.exponent != y.exponent) return false;
      break;
    case Node::Kind::kAggregate:
      if (x.agg != y.agg || x.var != y.var || x.group != y.group) return false;
      break;
  }
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!equal(*x.args[i], *y.args[i])) return false;
  }
  return true;
}

std::string print(const Node& n) {
  switch (n.kind) {
    case Node::Kind::kNumber:
      return format_number(n.number);
    case Node::Kind::kRoot:
      return "x[" + std::to_string(n.index) + "]";
    case Node::Kind::kBound:
      return n.var + "[" + std::to_string(n.index) + "]";
    case Node::Kind::kNeg:
      return "(-" + print(*n.args[0]) + ")";
    case Node::Kind::kCall:
      return std::string(func_name(n.func)) + "(" + print(*n.args[0]) + ")";
    case Node::Kind::kBinary:
      return "(" + print(*n.args[0]) + " " + n.op + " " + print(*n.args[1]) + ")";
    case Node::Kind::kPower:
      return "(" + print(*n.args[0]) + "^" + std::to_string(n.exponent) + ")";
    case Node::Kind::kAggregate:
      return std::string(n.agg == AggKind::kSum ? "sum" : "mean") + "(" + n.var + " in inputs[" +
             n.group.name() + "]) { " + print(*n.args[0]) + " }";
  }
  return "?";
}

Signature Signature::of_leaves(const PhaseSpace& root, std::span<const PhaseSpace> leaves) {
  Signature sig{root, {}};
  for (const PhaseSpace& p : leaves) ++sig.inputs[p];
  return sig;
}

NodePtr parse_expression(std::string_view src, const Signature& sig) {
  return Parser(Lexer(src).run(), sig).parse();
}

ControlExpr ControlExpr::parse(const std::vector<std::string>& sources, const Signature& sig) {
  if (sources.size() != static_cast<std::size_t>(sig.root.dim)) {
    throw ParseError("expected " + std::to_string(sig.root.dim) + " component expression(s) for root space " +
                         sig.root.name() + ", got " + std::to_string(sources.size()),
                     SourceLoc{});
  }
  ControlExpr out;
  out.sig_ = sig;
  for (const std::string& s : sources) out.components_.push_back(parse_expression(s, sig));
  return out;
}

std::vector<std::string> ControlExpr::texts() const {
  std::vector<std::string> out;
  for (const NodePtr& n : components_) out.push_back(print(*n));
  return out;
}

std::vector<double> ControlExpr::evaluate(std::span<const double> root,
                                          std::span<const TypedInput> inputs) const {
  if (root.size() != static_cast<std::size_t>(sig_.root.dim)) {
    throw EvalError("root state has dimension " + std::to_string(root.size()) + ", expected " +
                        std::to_string(sig_.root.dim),
                    SourceLoc{});
  }
  std::map<PhaseSpace, std::vector<std::span<const double>>> groups;
  for (const TypedInput& in : inputs) {
    if (in.state.size() != static_cast<std::size_t>(in.type.dim)) {
      throw EvalError("input state does not match its type " + in.type.name(), SourceLoc{});
    }
    groups[in.type].push_back(in.state);
  }
  std::map<PhaseSpace, std::size_t> counts;
  for (const auto& [type, states] : groups) counts[type] = states.size();
  for (const auto& [type, count] : sig_.inputs) {
    if (count == 0) counts.emplace(type, 0);
  }
  if (counts != sig_.inputs) throw EvalError("inputs do not match the control signature", SourceLoc{});

  // Canonical aggregation order.
  for (auto& [type, states] : groups) {
    std::sort(states.begin(), states.end(), [](std::span<const double> p, std::span<const double> q) {
      return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end());
    });
  }

  std::vector<double> out;
  out.reserve(components_.size());
  Env env{root, &groups, {}};
  for (const NodePtr& n : components_) out.push_back(eval(*n, env));
  return out;
}

}  // namespace fibra::expr

#pragma once

// Front end for the PDDL subset needed to describe states and goals:
// predicates, numeric functions, constants, objects, initial state and a
// conjunctive goal. Action schemata are tokenised and skipped. Types are
// accepted and erased.

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wlkit/error.hpp"
#include "wlkit/task_model.hpp"

namespace wlkit {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
};

inline std::string to_string(const SourceSpan& s) {
  return s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, SourceSpan span, const std::string& message)
      : Error(kind, to_string(span) + ": " + message), span_(std::move(span)) {}

  const SourceSpan& span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

namespace sexpr {

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
  SourceSpan span;

  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
  /// True for lists whose first element is the atom `head`.
  bool has_head(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_atom(head);
  }
};

[[noreturn]] inline void syntax_error(const SourceSpan& span, const std::string& message) {
  throw ParseError(ErrorKind::SyntaxError, span, message);
}

class Reader {
 public:
  Reader(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  Node read_document() {
    skip_space();
    if (pos_ >= text_.size()) syntax_error(here(), "empty input");
    Node root = read();
    skip_space();
    if (pos_ < text_.size()) syntax_error(here(), "trailing input after top-level expression");
    return root;
  }

 private:
  SourceSpan here() const { return {file_, line_, column_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Node read() {
    skip_space();
    if (pos_ >= text_.size()) syntax_error(here(), "unexpected end of input");
    Node node;
    node.span = here();
    char c = text_[pos_];
    if (c == ')') syntax_error(here(), "unexpected ')'");
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) syntax_error(node.span, "unbalanced '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace sexpr

namespace pddl_detail {

using sexpr::Node;
using sexpr::syntax_error;

inline const std::set<std::string, std::less<>>& supported_requirements() {
  static const std::set<std::string, std::less<>> flags{":strips", ":typing", ":numeric-fluents",
                                                        ":negative-preconditions", ":equality"};
  return flags;
}

inline const Node& expect_list(const Node& n, const char* what) {
  if (!n.is_list) syntax_error(n.span, std::string("expected ") + what);
  return n;
}

inline const std::string& expect_atom(const Node& n, const char* what) {
  if (n.is_list || n.atom.empty()) syntax_error(n.span, std::string("expected ") + what);
  return n.atom;
}

/// Names of a typed list `a b - t c - u`, with type annotations dropped.
inline std::vector<const Node*> typed_names(const std::vector<Node>& items, std::size_t begin) {
  std::vector<const Node*> names;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const Node& n = items[i];
    if (n.is_atom("-")) {
      if (i + 1 >= items.size()) syntax_error(n.span, "type expected after '-'");
      ++i;  // type name or (either ...)
      continue;
    }
    expect_atom(n, "name in typed list");
    names.push_back(&n);
  }
  return names;
}

/// Arity of a predicate/function declaration `(name ?a ?b - t)`.
inline Symbol declared_symbol(const Node& decl) {
  expect_list(decl, "symbol declaration");
  if (decl.items.empty()) syntax_error(decl.span, "empty symbol declaration");
  Symbol s{expect_atom(decl.items[0], "symbol name"), 0};
  for (const Node* p : typed_names(decl.items, 1)) {
    if (p->atom.front() != '?') syntax_error(p->span, "parameter must start with '?'");
    ++s.arity;
  }
  return s;
}

inline bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

[[noreturn]] inline void rethrow_at(const Node& n, const Error& e) {
  throw ParseError(e.kind(), n.span, e.what());
}

}  // namespace pddl_detail

inline Domain parse_domain(std::string_view text, std::string file = "<domain>") {
  using namespace pddl_detail;
  Node root = sexpr::Reader(text, std::move(file)).read_document();
  if (!root.has_head("define")) syntax_error(root.span, "expected (define ...)");
  if (root.items.size() < 2 || !root.items[1].has_head("domain") || root.items[1].items.size() != 2)
    syntax_error(root.span, "expected (domain <name>)");
  std::string name = expect_atom(root.items[1].items[1], "domain name");

  std::vector<Symbol> predicates, functions;
  std::vector<std::string> constants;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "domain section");
    if (section.items.empty()) syntax_error(section.span, "empty section");
    const std::string& head = expect_atom(section.items[0], "section keyword");
    if (head == ":requirements") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const std::string& flag = expect_atom(section.items[k], "requirement flag");
        if (!supported_requirements().contains(flag))
          throw ParseError(ErrorKind::UnsupportedRequirement, section.items[k].span,
                           "requirement " + flag + " is not supported");
      }
    } else if (head == ":types") {
      typed_names(section.items, 1);
    } else if (head == ":constants") {
      for (const Node* c : typed_names(section.items, 1)) constants.push_back(c->atom);
    } else if (head == ":predicates") {
      for (std::size_t k = 1; k < section.items.size(); ++k) predicates.push_back(declared_symbol(section.items[k]));
    } else if (head == ":functions") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const Node& item = section.items[k];
        if (item.is_atom("-")) {
          ++k;  // return type, e.g. "- number"
          continue;
        }
        functions.push_back(declared_symbol(item));
      }
    } else if (head == ":action") {
      continue;
    } else {
      syntax_error(section.span, "unsupported domain section " + head);
    }
  }
  try {
    return Domain(std::move(name), std::move(predicates), std::move(functions), std::move(constants));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rethrow_at(root, e);
  }
}

namespace pddl_detail {

class ProblemBuilder {
 public:
  ProblemBuilder(const Domain& domain) : domain_(domain) {}

  void set_objects(std::vector<std::string> names) {
    objects_ = std::move(names);
    for (const auto& c : domain_.constants())
      if (std::find(objects_.begin(), objects_.end(), c) == objects_.end()) objects_.push_back(c);
  }

  ObjectId object(const Node& n) const {
    const std::string& name = expect_atom(n, "object name");
    auto it = std::find(objects_.begin(), objects_.end(), name);
    if (it == objects_.end()) throw ParseError(ErrorKind::UnknownSymbol, n.span, "unknown object '" + name + "'");
    return static_cast<ObjectId>(it - objects_.begin());
  }

  GroundAtom atom(const Node& n, bool numeric) const {
    expect_list(n, "atom");
    if (n.items.empty()) syntax_error(n.span, "empty atom");
    const std::string& name = expect_atom(n.items[0], "symbol name");
    auto id = numeric ? domain_.find_function(name) : domain_.find_predicate(name);
    if (!id)
      throw ParseError(ErrorKind::UnknownSymbol, n.items[0].span,
                       std::string("unknown ") + (numeric ? "function" : "predicate") + " '" + name + "'");
    const Symbol& sym = numeric ? domain_.functions()[*id] : domain_.predicates()[*id];
    if (static_cast<int>(n.items.size()) - 1 != sym.arity)
      throw ParseError(ErrorKind::ArityMismatch, n.span,
                       "'" + name + "' expects " + std::to_string(sym.arity) + " arguments, got " +
                           std::to_string(n.items.size() - 1));
    GroundAtom a{*id, {}};
    for (std::size_t i = 1; i < n.items.size(); ++i) a.args.push_back(object(n.items[i]));
    return a;
  }

  bool is_function_term(const Node& n) const {
    return n.is_list && !n.items.empty() && !n.items[0].is_list && domain_.find_function(n.items[0].atom);
  }

  Expr expression(const Node& n, bool& mentions_fluent) const {
    if (!n.is_list) {
      double v = 0;
      if (!parse_number(n.atom, v)) {
        // 0-ary function written without parentheses
        if (auto f = domain_.find_function(n.atom); f && domain_.functions()[*f].arity == 0) {
          mentions_fluent = true;
          return Expr::variable(GroundAtom{*f, {}});
        }
        syntax_error(n.span, "expected number or numeric term, got '" + n.atom + "'");
      }
      return Expr::constant(v);
    }
    if (n.items.empty()) syntax_error(n.span, "empty expression");
    if (is_function_term(n)) {
      mentions_fluent = true;
      return Expr::variable(atom(n, true));
    }
    const std::string& op = expect_atom(n.items[0], "arithmetic operator");
    auto kind = parse_operator(op);
    if (!kind) throw ParseError(ErrorKind::UnknownSymbol, n.items[0].span, "unknown function or operator '" + op + "'");
    if (n.items.size() == 2 && *kind == Expr::Kind::Subtract)
      return Expr::binary(Expr::Kind::Subtract, Expr::constant(0.0), expression(n.items[1], mentions_fluent));
    if (n.items.size() < 3) syntax_error(n.span, "operator '" + op + "' needs two operands");
    if (n.items.size() > 3 && (*kind == Expr::Kind::Subtract || *kind == Expr::Kind::Divide))
      syntax_error(n.span, "operator '" + op + "' takes exactly two operands");
    Expr acc = expression(n.items[1], mentions_fluent);
    for (std::size_t i = 2; i < n.items.size(); ++i)
      acc = Expr::binary(*kind, std::move(acc), expression(n.items[i], mentions_fluent));
    return acc;
  }

  void goal(const Node& n) {
    expect_list(n, "goal condition");
    if (n.items.empty()) return;  // "()" is the empty goal
    if (n.has_head("and")) {
      for (std::size_t i = 1; i < n.items.size(); ++i) goal(n.items[i]);
      return;
    }
    if (n.has_head("not")) {
      if (n.items.size() != 2) syntax_error(n.span, "(not ...) takes one atom");
      prop_goals_.push_back({false, atom(n.items[1], false)});
      return;
    }
    if (!n.items[0].is_list) {
      if (auto cmp = parse_comparator(n.items[0].atom)) {
        if (n.items.size() != 3) syntax_error(n.span, "comparison takes two operands");
        bool fluent = false;
        Expr lhs = expression(n.items[1], fluent);
        Expr rhs = expression(n.items[2], fluent);
        if (!fluent) syntax_error(n.span, "numeric comparison mentions no fluent");
        bool rhs_zero = rhs.kind() == Expr::Kind::Constant && rhs.constant_value() == 0.0;
        Expr xi = rhs_zero ? std::move(lhs) : Expr::binary(Expr::Kind::Subtract, std::move(lhs), std::move(rhs));
        num_goals_.push_back({std::move(xi), *cmp});
        return;
      }
      if (n.items[0].atom == "or" || n.items[0].atom == "imply" || n.items[0].atom == "exists" ||
          n.items[0].atom == "forall" || n.items[0].atom == "<=" || n.items[0].atom == "<")
        syntax_error(n.span, "unsupported goal construct '" + n.items[0].atom + "'");
    }
    prop_goals_.push_back({true, atom(n, false)});
  }

  void init(const Node& n) {
    expect_list(n, "initial-state fact");
    if (n.has_head("=")) {
      if (n.items.size() != 3) syntax_error(n.span, "(= (f ...) value) expected");
      GroundAtom a = atom(n.items[1], true);
      double v = 0;
      if (n.items[2].is_list || !parse_number(n.items[2].atom, v))
        syntax_error(n.items[2].span, "numeric value expected");
      try {
        state_.set_value(std::move(a), v);
      } catch (const Error& e) {
        rethrow_at(n, e);
      }
      return;
    }
    state_.add_proposition(atom(n, false));
  }

  Problem build(const Node& where) {
    try {
      return Problem(domain_, std::move(objects_), std::move(prop_goals_), std::move(num_goals_), std::move(state_));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      rethrow_at(where, e);
    }
  }

 private:
  const Domain& domain_;
  std::vector<std::string> objects_;
  std::vector<GoalLiteral> prop_goals_;
  std::vector<NumericCondition> num_goals_;
  State state_;
};

}  // namespace pddl_detail

inline Problem parse_problem(std::string_view text, const Domain& domain, std::string file = "<problem>") {
  using namespace pddl_detail;
  Node root = sexpr::Reader(text, std::move(file)).read_document();
  if (!root.has_head("define")) syntax_error(root.span, "expected (define ...)");
  if (root.items.size() < 2 || !root.items[1].has_head("problem") || root.items[1].items.size() != 2)
    syntax_error(root.span, "expected (problem <name>)");

  ProblemBuilder builder(domain);
  std::vector<std::string> objects;
  const Node* init = nullptr;
  const Node* goal = nullptr;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "problem section");
    if (section.items.empty()) syntax_error(section.span, "empty section");
    const std::string& head = expect_atom(section.items[0], "section keyword");
    if (head == ":domain") {
      if (section.items.size() != 2) syntax_error(section.span, "(:domain <name>) expected");
      const std::string& name = expect_atom(section.items[1], "domain name");
      if (name != domain.name())
        throw ParseError(ErrorKind::DomainMismatch, section.span,
                         "problem is for domain '" + name + "', expected '" + domain.name() + "'");
    } else if (head == ":objects") {
      for (const Node* o : typed_names(section.items, 1)) objects.push_back(o->atom);
    } else if (head == ":init") {
      init = &section;
    } else if (head == ":goal") {
      if (section.items.size() != 2) syntax_error(section.span, "(:goal <condition>) expected");
      goal = &section;
    } else if (head == ":metric" || head == ":requirements") {
      continue;
    } else {
      syntax_error(section.span, "unsupported problem section " + head);
    }
  }
  builder.set_objects(std::move(objects));
  if (init)
    for (std::size_t k = 1; k < init->items.size(); ++k) builder.init(init->items[k]);
  if (goal) builder.goal(goal->items[1]);
  return builder.build(root);
}

namespace pddl_detail {

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_atom(const GroundAtom& a, const Symbol& sym, std::span<const std::string> objects) {
  std::string out = "(" + sym.name;
  for (ObjectId o : a.args) out += " " + objects[o];
  return out + ")";
}

inline std::string format_expr(const Expr& e, const Domain& d, std::span<const std::string> objects) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return format_number(e.constant_value());
    case Expr::Kind::Variable: return format_atom(e.atom(), d.functions()[e.atom().symbol], objects);
    default:
      return "(" + std::string(operator_symbol(e.kind())) + " " + format_expr(e.lhs(), d, objects) + " " +
             format_expr(e.rhs(), d, objects) + ")";
  }
}

inline std::string parameters(int arity) {
  std::string out;
  for (int i = 1; i <= arity; ++i) out += " ?x" + std::to_string(i);
  return out;
}

}  // namespace pddl_detail

/// Canonical PDDL rendering; parse_domain(print_domain(d)) == d.
inline std::string print_domain(const Domain& d) {
  using namespace pddl_detail;
  std::ostringstream out;
  out << "(define (domain " << d.name() << ")\n";
  out << "  (:requirements :strips" << (d.functions().empty() ? "" : " :numeric-fluents") << ")\n";
  if (!d.constants().empty()) {
    out << "  (:constants";
    for (const auto& c : d.constants()) out << " " << c;
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates()) out << "\n    (" << p.name << parameters(p.arity) << ")";
  out << ")\n";
  if (!d.functions().empty()) {
    out << "  (:functions";
    for (const auto& f : d.functions()) out << "\n    (" << f.name << parameters(f.arity) << ") - number";
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

/// Canonical PDDL rendering; parse_problem(print_problem(d, p, n), d) == p.
inline std::string print_problem(const Domain& d, const Problem& p, std::string_view name = "task") {
  using namespace pddl_detail;
  const auto objects = p.objects();
  std::ostringstream out;
  out << "(define (problem " << name << ")\n";
  out << "  (:domain " << d.name() << ")\n";
  out << "  (:objects";
  for (const auto& o : objects) out << " " << o;
  out << ")\n  (:init";
  for (const auto& a : p.initial_state().propositions())
    out << "\n    " << format_atom(a, d.predicates()[a.symbol], objects);
  for (const auto& [a, v] : p.initial_state().values())
    out << "\n    (= " << format_atom(a, d.functions()[a.symbol], objects) << " " << format_number(v) << ")";
  out << ")\n  (:goal (and";
  for (const auto& g : p.propositional_goals()) {
    std::string atom = format_atom(g.atom, d.predicates()[g.atom.symbol], objects);
    out << "\n    " << (g.positive ? atom : "(not " + atom + ")");
  }
  for (const auto& g : p.numeric_goals())
    out << "\n    (" << to_string(g.comparator) << " " << format_expr(g.expression, d, objects) << " 0)";
  out << "))\n)\n";
  return out.str();
}

}  // namespace wlkit

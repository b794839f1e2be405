#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wlkit/error.hpp"

namespace wlkit {

using ObjectId = std::int32_t;
using SymbolId = std::int32_t;

struct Symbol {
  std::string name;
  int arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Lifted vocabulary shared by every task of a domain. Declaration order of
/// each list is preserved; it fixes the categorical feature enumeration.
class Domain {
 public:
  Domain() = default;

  Domain(std::string name, std::vector<Symbol> predicates, std::vector<Symbol> functions,
         std::vector<std::string> constants)
      : name_(std::move(name)),
        predicates_(std::move(predicates)),
        functions_(std::move(functions)),
        constants_(std::move(constants)) {
    index_symbols(predicates_, predicate_index_, "predicate");
    index_symbols(functions_, function_index_, "function");
    for (std::size_t i = 0; i < constants_.size(); ++i) {
      if (!constant_index_.emplace(constants_[i], static_cast<int>(i)).second)
        fail(ErrorKind::DuplicateSymbol, "constant '" + constants_[i] + "' declared twice");
    }
  }

  const std::string& name() const { return name_; }
  std::span<const Symbol> predicates() const { return predicates_; }
  std::span<const Symbol> functions() const { return functions_; }
  std::span<const std::string> constants() const { return constants_; }

  std::optional<SymbolId> find_predicate(std::string_view name) const {
    return lookup(predicate_index_, name);
  }
  std::optional<SymbolId> find_function(std::string_view name) const {
    return lookup(function_index_, name);
  }
  std::optional<int> find_constant(std::string_view name) const {
    return lookup(constant_index_, name);
  }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.name_ == b.name_ && a.predicates_ == b.predicates_ && a.functions_ == b.functions_ &&
           a.constants_ == b.constants_;
  }

 private:
  using Index = std::map<std::string, int, std::less<>>;

  static void index_symbols(const std::vector<Symbol>& symbols, Index& index, const char* what) {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (symbols[i].arity < 0)
        fail(ErrorKind::ArityMismatch, std::string(what) + " '" + symbols[i].name + "' has negative arity");
      if (!index.emplace(symbols[i].name, static_cast<int>(i)).second)
        fail(ErrorKind::DuplicateSymbol, std::string(what) + " '" + symbols[i].name + "' declared twice");
    }
  }

  static std::optional<int> lookup(const Index& index, std::string_view name) {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::string name_;
  std::vector<Symbol> predicates_;
  std::vector<Symbol> functions_;
  std::vector<std::string> constants_;
  Index predicate_index_;
  Index function_index_;
  Index constant_index_;
};

/// A predicate or function applied to interned object ids. Whether `symbol`
/// indexes predicates or functions is fixed by the container holding the atom.
struct GroundAtom {
  SymbolId symbol = 0;
  std::vector<ObjectId> args;

  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
};

/// Closed-world state: the true propositions and the assigned numeric variables.
class State {
 public:
  State() = default;

  State& add_proposition(GroundAtom atom) {
    auto it = std::lower_bound(propositions_.begin(), propositions_.end(), atom);
    if (it == propositions_.end() || *it != atom) propositions_.insert(it, std::move(atom));
    return *this;
  }

  State& set_value(GroundAtom atom, double value) {
    if (!values_.emplace(std::move(atom), value).second)
      fail(ErrorKind::SchemaError, "numeric variable assigned twice in one state");
    return *this;
  }

  bool holds(const GroundAtom& atom) const {
    return std::binary_search(propositions_.begin(), propositions_.end(), atom);
  }

  std::optional<double> value(const GroundAtom& atom) const {
    auto it = values_.find(atom);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  /// Sorted, duplicate-free.
  std::span<const GroundAtom> propositions() const { return propositions_; }
  const std::map<GroundAtom, double>& values() const { return values_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<GroundAtom> propositions_;
  std::map<GroundAtom, double> values_;
};

enum class Comparator { GE, GT, EQ };

constexpr std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::GE: return ">=";
    case Comparator::GT: return ">";
    case Comparator::EQ: return "=";
  }
  return "?";
}

inline std::optional<Comparator> parse_comparator(std::string_view text) {
  if (text == ">=") return Comparator::GE;
  if (text == ">") return Comparator::GT;
  if (text == "=") return Comparator::EQ;
  return std::nullopt;
}

/// Immutable arithmetic expression tree over numeric variables.
class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Subtract, Multiply, Divide };

  static Expr constant(double value) {
    Expr e(Kind::Constant);
    e.value_ = value;
    return e;
  }

  static Expr variable(GroundAtom atom) {
    Expr e(Kind::Variable);
    e.atom_ = std::move(atom);
    return e;
  }

  static Expr binary(Kind op, Expr lhs, Expr rhs) {
    if (op == Kind::Constant || op == Kind::Variable)
      fail(ErrorKind::SchemaError, "binary expression needs an arithmetic operator");
    Expr e(op);
    e.lhs_ = std::make_shared<const Expr>(std::move(lhs));
    e.rhs_ = std::make_shared<const Expr>(std::move(rhs));
    return e;
  }

  Kind kind() const { return kind_; }
  bool is_binary() const { return lhs_ != nullptr; }
  double constant_value() const { return value_; }
  const GroundAtom& atom() const { return atom_; }
  const Expr& lhs() const { return *lhs_; }
  const Expr& rhs() const { return *rhs_; }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Constant: return a.value_ == b.value_;
      case Kind::Variable: return a.atom_ == b.atom_;
      default: return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
    }
  }

 private:
  explicit Expr(Kind kind) : kind_(kind) {}

  Kind kind_;
  double value_ = 0.0;
  GroundAtom atom_;
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

inline std::string_view operator_symbol(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::Add: return "+";
    case Expr::Kind::Subtract: return "-";
    case Expr::Kind::Multiply: return "*";
    case Expr::Kind::Divide: return "/";
    default: return "";
  }
}

inline std::optional<Expr::Kind> parse_operator(std::string_view text) {
  if (text == "+") return Expr::Kind::Add;
  if (text == "-" || text == "−") return Expr::Kind::Subtract;
  if (text == "*") return Expr::Kind::Multiply;
  if (text == "/") return Expr::Kind::Divide;
  return std::nullopt;
}

namespace detail {
inline void gather_variables(const Expr& e, std::vector<GroundAtom>& out) {
  if (e.kind() == Expr::Kind::Variable) {
    out.push_back(e.atom());
  } else if (e.is_binary()) {
    gather_variables(e.lhs(), out);
    gather_variables(e.rhs(), out);
  }
}
}  // namespace detail

/// The distinct variable leaves of `e`, sorted.
inline std::vector<GroundAtom> variables(const Expr& e) {
  std::vector<GroundAtom> out;
  detail::gather_variables(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double evaluate_expression(const Expr& e, const State& state) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e.constant_value();
    case Expr::Kind::Variable: {
      auto v = state.value(e.atom());
      if (!v) fail(ErrorKind::UnassignedVariable, "numeric variable has no value in state");
      return *v;
    }
    case Expr::Kind::Add: return evaluate_expression(e.lhs(), state) + evaluate_expression(e.rhs(), state);
    case Expr::Kind::Subtract:
      return evaluate_expression(e.lhs(), state) - evaluate_expression(e.rhs(), state);
    case Expr::Kind::Multiply:
      return evaluate_expression(e.lhs(), state) * evaluate_expression(e.rhs(), state);
    case Expr::Kind::Divide: {
      double num = evaluate_expression(e.lhs(), state);
      double den = evaluate_expression(e.rhs(), state);
      if (den == 0.0) fail(ErrorKind::DivisionByZero, "division by zero in numeric expression");
      return num / den;
    }
  }
  return 0.0;
}

/// xi >= 0, xi > 0 or xi = 0.
struct NumericCondition {
  Expr expression;
  Comparator comparator = Comparator::GE;

  friend bool operator==(const NumericCondition&, const NumericCondition&) = default;
};

inline bool compare_to_zero(double value, Comparator c) {
  switch (c) {
    case Comparator::GE: return value >= 0.0;
    case Comparator::GT: return value > 0.0;
    case Comparator::EQ: return value == 0.0;
  }
  return false;
}

inline bool condition_satisfied(const NumericCondition& cond, const State& state) {
  return compare_to_zero(evaluate_expression(cond.expression, state), cond.comparator);
}

struct GoalLiteral {
  bool positive = true;
  GroundAtom atom;

  bool satisfied_by(const State& s) const { return s.holds(atom) == positive; }

  friend bool operator==(const GoalLiteral&, const GoalLiteral&) = default;
};

namespace detail {

inline void check_atom(const GroundAtom& atom, std::span<const Symbol> symbols, std::size_t n_objects,
                       const char* what) {
  if (atom.symbol < 0 || static_cast<std::size_t>(atom.symbol) >= symbols.size())
    fail(ErrorKind::UnknownSymbol, std::string(what) + " id " + std::to_string(atom.symbol) + " out of range");
  const Symbol& sym = symbols[atom.symbol];
  if (static_cast<int>(atom.args.size()) != sym.arity)
    fail(ErrorKind::ArityMismatch, std::string(what) + " '" + sym.name + "' expects " + std::to_string(sym.arity) +
                                       " arguments, got " + std::to_string(atom.args.size()));
  for (ObjectId o : atom.args) {
    if (o < 0 || static_cast<std::size_t>(o) >= n_objects)
      fail(ErrorKind::UnknownSymbol, "object id " + std::to_string(o) + " out of range in '" + sym.name + "'");
  }
}

inline void check_expression(const Expr& e, const Domain& d, std::size_t n_objects) {
  if (e.kind() == Expr::Kind::Variable) {
    check_atom(e.atom(), d.functions(), n_objects, "function");
  } else if (e.is_binary()) {
    check_expression(e.lhs(), d, n_objects);
    check_expression(e.rhs(), d, n_objects);
  }
}

}  // namespace detail

/// Checks that every atom of `state` is well-formed for a task with `n_objects` objects.
inline void validate_state(const Domain& domain, std::size_t n_objects, const State& state) {
  for (const auto& p : state.propositions()) detail::check_atom(p, domain.predicates(), n_objects, "predicate");
  for (const auto& [atom, value] : state.values()) {
    (void)value;
    detail::check_atom(atom, domain.functions(), n_objects, "function");
  }
}

/// A grounded task: objects interned to dense ids, a goal and an initial
/// state. Action schemata are not represented.
class Problem {
 public:
  Problem() = default;

  /// Objects are taken in the given order; domain constants not listed are
  /// appended after them.
  Problem(const Domain& domain, std::vector<std::string> objects, std::vector<GoalLiteral> propositional_goals,
          std::vector<NumericCondition> numeric_goals, State initial_state)
      : domain_name_(domain.name()),
        objects_(std::move(objects)),
        propositional_goals_(std::move(propositional_goals)),
        numeric_goals_(std::move(numeric_goals)),
        initial_state_(std::move(initial_state)) {
    for (const auto& c : domain.constants()) {
      if (std::find(objects_.begin(), objects_.end(), c) == objects_.end()) objects_.push_back(c);
    }
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (!object_index_.emplace(objects_[i], static_cast<ObjectId>(i)).second)
        fail(ErrorKind::DuplicateSymbol, "object '" + objects_[i] + "' declared twice");
    }
    for (const auto& g : propositional_goals_)
      detail::check_atom(g.atom, domain.predicates(), objects_.size(), "predicate");
    for (const auto& g : numeric_goals_) detail::check_expression(g.expression, domain, objects_.size());
    validate_state(domain, objects_.size(), initial_state_);
    check_goal_fluents(domain, initial_state_);
  }

  const std::string& domain_name() const { return domain_name_; }
  std::span<const std::string> objects() const { return objects_; }
  std::size_t object_count() const { return objects_.size(); }
  std::span<const GoalLiteral> propositional_goals() const { return propositional_goals_; }
  std::span<const NumericCondition> numeric_goals() const { return numeric_goals_; }
  const State& initial_state() const { return initial_state_; }

  std::optional<ObjectId> find_object(std::string_view name) const {
    auto it = object_index_.find(name);
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Throws UnassignedGoalFluent if a numeric goal mentions a variable that
  /// `state` does not assign.
  void check_goal_fluents(const Domain& domain, const State& state) const {
    for (const auto& g : numeric_goals_) {
      for (const auto& v : variables(g.expression)) {
        if (!state.value(v)) {
          std::string text = domain.functions()[v.symbol].name + "(";
          for (std::size_t i = 0; i < v.args.size(); ++i) text += (i ? "," : "") + objects_[v.args[i]];
          fail(ErrorKind::UnassignedGoalFluent, "goal mentions unassigned fluent " + text + ")");
        }
      }
    }
  }

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.domain_name_ == b.domain_name_ && a.objects_ == b.objects_ &&
           a.propositional_goals_ == b.propositional_goals_ && a.numeric_goals_ == b.numeric_goals_ &&
           a.initial_state_ == b.initial_state_;
  }

 private:
  std::string domain_name_;
  std::vector<std::string> objects_;
  std::map<std::string, ObjectId, std::less<>> object_index_;
  std::vector<GoalLiteral> propositional_goals_;
  std::vector<NumericCondition> numeric_goals_;
  State initial_state_;
};

inline bool goal_satisfied(const Problem& problem, const State& state) {
  for (const auto& g : problem.propositional_goals())
    if (!g.satisfied_by(state)) return false;
  for (const auto& g : problem.numeric_goals())
    if (!condition_satisfied(g, state)) return false;
  return true;
}

struct DatasetEntry {
  Problem problem;
  std::vector<State> states;
  std::optional<std::vector<double>> labels;

  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

/// States grouped by task, optionally labelled (e.g. with cost-to-go).
struct Dataset {
  Domain domain;
  std::vector<DatasetEntry> entries;

  std::size_t state_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.states.size();
    return n;
  }

  bool fully_labelled() const {
    return std::all_of(entries.begin(), entries.end(), [](const DatasetEntry& e) { return e.labels.has_value(); });
  }

  void validate() const {
    for (const auto& e : entries) {
      if (e.problem.domain_name() != domain.name())
        fail(ErrorKind::DomainMismatch, "problem for domain '" + e.problem.domain_name() +
                                            "' in dataset of domain '" + domain.name() + "'");
      if (e.labels && e.labels->size() != e.states.size())
        fail(ErrorKind::SchemaError, "label count " + std::to_string(e.labels->size()) +
                                         " differs from state count " + std::to_string(e.states.size()));
      for (const auto& s : e.states) validate_state(domain, e.problem.object_count(), s);
    }
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace wlkit

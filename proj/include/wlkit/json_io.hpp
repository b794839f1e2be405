#pragma once

// Canonical JSON encoding of domains, tasks, states and datasets.
//
//   task:    {"domain": D, "problem": P}
//   D:       {"name", "predicates": [[name, arity]...], "functions": [[name, arity]...], "constants": [name...]}
//   P:       {"objects": [...], "init": S, "goal": {"props": [[sign, pred, [args]]...], "numeric": [[cmp, expr]...]}}
//   S:       {"props": [[pred, [args]]...], "fluents": [[[func, [args]], value]...]}
//   expr:    ["const", v] | ["var", func, [args]] | [op, expr, expr]   with op in + - * /
//   dataset: {"domain": D, "entries": [{"problem": P, "states": [S...], "labels": [real...]?}...]}

#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "wlkit/error.hpp"
#include "wlkit/task_model.hpp"

namespace wlkit {

using Json = nlohmann::json;

namespace json_detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::SchemaError, where + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing key \"") + key + "\"");
  return *it;
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  return j;
}

inline std::string string(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

inline Json symbols_to_json(std::span<const Symbol> symbols) {
  Json out = Json::array();
  for (const auto& s : symbols) out.push_back(Json::array({s.name, s.arity}));
  return out;
}

inline std::vector<Symbol> symbols_from_json(const Json& j, const std::string& where) {
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) {
    std::string at = where + "[" + std::to_string(i) + "]";
    const Json& entry = array(j[i], at);
    if (entry.size() != 2) schema_error(at, "expected [name, arity]");
    out.push_back({string(entry[0], at), integer(entry[1], at)});
  }
  return out;
}

/// Resolves names against a domain and a problem's object list.
class Resolver {
 public:
  Resolver(const Domain& domain, std::span<const std::string> objects) : domain_(domain), objects_(objects) {}

  GroundAtom atom(const std::string& name, const Json& args, bool numeric, const std::string& where) const {
    auto id = numeric ? domain_.find_function(name) : domain_.find_predicate(name);
    if (!id)
      fail(ErrorKind::UnknownSymbol,
           where + ": unknown " + (numeric ? "function" : "predicate") + " '" + name + "'");
    const Symbol& sym = numeric ? domain_.functions()[*id] : domain_.predicates()[*id];
    array(args, where);
    if (static_cast<int>(args.size()) != sym.arity)
      fail(ErrorKind::ArityMismatch, where + ": '" + name + "' expects " + std::to_string(sym.arity) +
                                         " arguments, got " + std::to_string(args.size()));
    GroundAtom a{*id, {}};
    for (const auto& arg : args) a.args.push_back(object(string(arg, where), where));
    return a;
  }

  ObjectId object(const std::string& name, const std::string& where) const {
    auto it = std::find(objects_.begin(), objects_.end(), name);
    if (it == objects_.end()) fail(ErrorKind::UnknownSymbol, where + ": unknown object '" + name + "'");
    return static_cast<ObjectId>(it - objects_.begin());
  }

  Json args(const GroundAtom& a) const {
    Json out = Json::array();
    for (ObjectId o : a.args) out.push_back(objects_[o]);
    return out;
  }

  Expr expr(const Json& j, const std::string& where) const {
    if (!j.is_array() || j.empty()) schema_error(where, "expected an expression array");
    std::string head = string(j[0], where);
    if (head == "const") {
      if (j.size() != 2) schema_error(where, "expected [\"const\", value]");
      return Expr::constant(number(j[1], where));
    }
    if (head == "var") {
      if (j.size() != 3) schema_error(where, "expected [\"var\", function, [args]]");
      return Expr::variable(atom(string(j[1], where), j[2], true, where));
    }
    auto op = parse_operator(head);
    if (!op) schema_error(where, "unknown expression operator '" + head + "'");
    if (j.size() != 3) schema_error(where, "binary operator needs two operands");
    return Expr::binary(*op, expr(j[1], where + "[1]"), expr(j[2], where + "[2]"));
  }

  Json expr(const Expr& e) const {
    switch (e.kind()) {
      case Expr::Kind::Constant: return Json::array({"const", e.constant_value()});
      case Expr::Kind::Variable:
        return Json::array({"var", domain_.functions()[e.atom().symbol].name, args(e.atom())});
      default: return Json::array({std::string(operator_symbol(e.kind())), expr(e.lhs()), expr(e.rhs())});
    }
  }

 private:
  const Domain& domain_;
  std::span<const std::string> objects_;
};

inline State state_from_json(const Json& j, const Resolver& r, const std::string& where) {
  State s;
  const Json& props = field(j, "props", where);
  for (std::size_t i = 0; i < array(props, where + ".props").size(); ++i) {
    std::string at = where + ".props[" + std::to_string(i) + "]";
    const Json& p = array(props[i], at);
    if (p.size() != 2) schema_error(at, "expected [predicate, [args]]");
    s.add_proposition(r.atom(string(p[0], at), p[1], false, at));
  }
  const Json& fluents = field(j, "fluents", where);
  for (std::size_t i = 0; i < array(fluents, where + ".fluents").size(); ++i) {
    std::string at = where + ".fluents[" + std::to_string(i) + "]";
    const Json& f = array(fluents[i], at);
    if (f.size() != 2 || !f[0].is_array() || f[0].size() != 2) schema_error(at, "expected [[function, [args]], value]");
    s.set_value(r.atom(string(f[0][0], at), f[0][1], true, at), number(f[1], at));
  }
  return s;
}

inline Json state_to_json(const Domain& d, const State& s, const Resolver& r) {
  Json props = Json::array();
  for (const auto& p : s.propositions()) props.push_back(Json::array({d.predicates()[p.symbol].name, r.args(p)}));
  Json fluents = Json::array();
  for (const auto& [a, v] : s.values())
    fluents.push_back(Json::array({Json::array({d.functions()[a.symbol].name, r.args(a)}), v}));
  return Json{{"props", std::move(props)}, {"fluents", std::move(fluents)}};
}

template <class F>
decltype(auto) translating_json_errors(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorKind::SchemaError, e.what());
  }
}

}  // namespace json_detail

inline Json domain_to_json(const Domain& d) {
  Json constants = Json::array();
  for (const auto& c : d.constants()) constants.push_back(c);
  return Json{{"name", d.name()},
              {"predicates", json_detail::symbols_to_json(d.predicates())},
              {"functions", json_detail::symbols_to_json(d.functions())},
              {"constants", std::move(constants)}};
}

inline Domain domain_from_json(const Json& j) {
  using namespace json_detail;
  std::vector<std::string> constants;
  const Json& cs = field(j, "constants", "domain");
  for (const auto& c : array(cs, "domain.constants")) constants.push_back(string(c, "domain.constants"));
  return Domain(string(field(j, "name", "domain"), "domain.name"),
                symbols_from_json(field(j, "predicates", "domain"), "domain.predicates"),
                symbols_from_json(field(j, "functions", "domain"), "domain.functions"), std::move(constants));
}

inline Json problem_to_json(const Domain& d, const Problem& p) {
  json_detail::Resolver r(d, p.objects());
  Json objects = Json::array();
  for (const auto& o : p.objects()) objects.push_back(o);
  Json props = Json::array();
  for (const auto& g : p.propositional_goals())
    props.push_back(Json::array({g.positive ? "+" : "-", d.predicates()[g.atom.symbol].name, r.args(g.atom)}));
  Json numeric = Json::array();
  for (const auto& g : p.numeric_goals())
    numeric.push_back(Json::array({std::string(to_string(g.comparator)), r.expr(g.expression)}));
  return Json{{"objects", std::move(objects)},
              {"init", json_detail::state_to_json(d, p.initial_state(), r)},
              {"goal", Json{{"props", std::move(props)}, {"numeric", std::move(numeric)}}}};
}

inline Problem problem_from_json(const Json& j, const Domain& d, const std::string& where = "problem") {
  using namespace json_detail;
  std::vector<std::string> objects;
  for (const auto& o : array(field(j, "objects", where), where + ".objects"))
    objects.push_back(string(o, where + ".objects"));
  for (const auto& c : d.constants())
    if (std::find(objects.begin(), objects.end(), c) == objects.end()) objects.push_back(c);
  Resolver r(d, objects);

  State init = state_from_json(field(j, "init", where), r, where + ".init");
  const Json& goal = field(j, "goal", where);
  std::vector<GoalLiteral> props;
  const Json& gp = field(goal, "props", where + ".goal");
  for (std::size_t i = 0; i < array(gp, where + ".goal.props").size(); ++i) {
    std::string at = where + ".goal.props[" + std::to_string(i) + "]";
    const Json& lit = array(gp[i], at);
    if (lit.size() != 3) schema_error(at, "expected [sign, predicate, [args]]");
    std::string sign = string(lit[0], at);
    if (sign != "+" && sign != "-") schema_error(at, "sign must be \"+\" or \"-\"");
    props.push_back({sign == "+", r.atom(string(lit[1], at), lit[2], false, at)});
  }
  std::vector<NumericCondition> numeric;
  const Json& gn = field(goal, "numeric", where + ".goal");
  for (std::size_t i = 0; i < array(gn, where + ".goal.numeric").size(); ++i) {
    std::string at = where + ".goal.numeric[" + std::to_string(i) + "]";
    const Json& c = array(gn[i], at);
    if (c.size() != 2) schema_error(at, "expected [comparator, expr]");
    auto cmp = parse_comparator(string(c[0], at));
    if (!cmp) schema_error(at, "comparator must be one of >=, >, =");
    numeric.push_back({r.expr(c[1], at), *cmp});
  }
  return Problem(d, std::move(objects), std::move(props), std::move(numeric), std::move(init));
}

inline Json state_to_json(const Domain& d, const Problem& p, const State& s) {
  return json_detail::state_to_json(d, s, json_detail::Resolver(d, p.objects()));
}

inline State state_from_json(const Json& j, const Domain& d, const Problem& p, const std::string& where = "state") {
  return json_detail::translating_json_errors(
      [&] { return json_detail::state_from_json(j, json_detail::Resolver(d, p.objects()), where); });
}

inline Json task_to_json(const Domain& d, const Problem& p) {
  return Json{{"domain", domain_to_json(d)}, {"problem", problem_to_json(d, p)}};
}

inline Json dataset_to_json(const Dataset& ds) {
  Json entries = Json::array();
  for (const auto& e : ds.entries) {
    Json states = Json::array();
    for (const auto& s : e.states) states.push_back(state_to_json(ds.domain, e.problem, s));
    Json entry{{"problem", problem_to_json(ds.domain, e.problem)}, {"states", std::move(states)}};
    if (e.labels) entry["labels"] = *e.labels;
    entries.push_back(std::move(entry));
  }
  return Json{{"domain", domain_to_json(ds.domain)}, {"entries", std::move(entries)}};
}

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::SyntaxError, e.what());
  }
}

inline std::pair<Domain, Problem> parse_json_task(std::string_view text) {
  return json_detail::translating_json_errors([&] {
    Json j = parse_json_text(text);
    Domain d = domain_from_json(json_detail::field(j, "domain", "task"));
    Problem p = problem_from_json(json_detail::field(j, "problem", "task"), d);
    return std::pair<Domain, Problem>(std::move(d), std::move(p));
  });
}

inline Dataset dataset_from_json(const Json& j) {
  using namespace json_detail;
  Dataset ds;
  ds.domain = domain_from_json(field(j, "domain", "dataset"));
  const Json& entries = field(j, "entries", "dataset");
  for (std::size_t i = 0; i < array(entries, "dataset.entries").size(); ++i) {
    std::string at = "dataset.entries[" + std::to_string(i) + "]";
    DatasetEntry entry;
    entry.problem = problem_from_json(field(entries[i], "problem", at), ds.domain, at + ".problem");
    const Json& states = field(entries[i], "states", at);
    for (std::size_t k = 0; k < array(states, at + ".states").size(); ++k)
      entry.states.push_back(state_from_json(
          states[k], Resolver(ds.domain, entry.problem.objects()), at + ".states[" + std::to_string(k) + "]"));
    if (auto it = entries[i].find("labels"); it != entries[i].end() && !it->is_null()) {
      std::vector<double> labels;
      for (const auto& l : array(*it, at + ".labels")) labels.push_back(number(l, at + ".labels"));
      entry.labels = std::move(labels);
    }
    ds.entries.push_back(std::move(entry));
  }
  ds.validate();
  return ds;
}

inline Dataset parse_json_dataset(std::string_view text) {
  return json_detail::translating_json_errors([&] { return dataset_from_json(parse_json_text(text)); });
}

/// Two-space indented JSON followed by a newline.
inline std::string to_text(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace wlkit

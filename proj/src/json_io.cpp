#include "wft/json_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace wft {

namespace {

[[noreturn]] void bad(const std::string& what) { throw MalformedInput(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object with \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing \"") + key + "\"");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::uint64_t as_uint(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be a non-negative integer");
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  auto v = j.get<std::int64_t>();
  if (v < 0) bad(std::string(what) + " must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

const Json& as_array(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  return j;
}

template <class T, class F>
std::vector<T> map_array(const Json& j, const char* what, F&& f) {
  std::vector<T> out;
  for (const auto& e : as_array(j, what)) out.push_back(f(e));
  return out;
}

Cond world_of(const FinitePoset& q, const Json& j) {
  Cond c = 0;
  if (j.is_string()) {
    try {
      c = q.index(j.get<std::string>());
    } catch (const Error&) {
      bad("unknown condition " + j.get<std::string>());
    }
  } else {
    c = static_cast<Cond>(as_uint(j, "world"));
    if (c >= q.size()) bad("condition index out of range");
  }
  if (!q.is_world(c)) bad("condition " + q.name(c) + " is not a world");
  return c;
}

template <class V, class F>
QName<V> name_from_json(const FinitePoset& q, const Json& j, F&& value) {
  QName<V> n;
  for (const auto& e : as_array(field(j, "world-values"), "world-values")) {
    auto w = world_of(q, field(e, "world"));
    if (!n.by_world.emplace(w, value(field(e, "value"))).second) bad("world listed twice");
  }
  for (auto w : q.worlds()) {
    if (!n.by_world.count(w)) bad("name has no value at world " + q.name(w));
  }
  return n;
}

std::set<Value> value_set(const Json& j) {
  std::set<Value> s;
  for (const auto& e : as_array(j, "value set")) s.insert(as_int(e, "value"));
  return s;
}

}  // namespace

Json to_json(const Node& n) { return Json(n.path()); }

Node node_from_json(const Json& j) {
  std::vector<Node::value_type> path;
  for (const auto& e : as_array(j, "node path")) {
    auto v = as_uint(e, "path entry");
    if (v > 0xffffffffull) bad("path entry out of range");
    path.push_back(static_cast<Node::value_type>(v));
  }
  return Node(std::move(path));
}

Json to_json(std::span<const Node> ns) {
  Json a = Json::array();
  for (const auto& n : ns) a.push_back(to_json(n));
  return a;
}

std::vector<Node> nodes_from_json(const Json& j) {
  const Json& arr = j.is_object() ? field(j, "nodes") : j;
  return map_array<Node>(arr, "nodes", node_from_json);
}

Json to_json(const WfTree& t) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto idx = static_cast<NodeIndex>(i);
    Json succ = Json::array();
    for (auto s : t.successors(idx)) succ.push_back(to_json(t.node(s)));
    nodes.push_back({{"path", to_json(t.node(idx))}, {"internal", t.is_internal(idx)}, {"succ", std::move(succ)}});
  }
  return {{"root", to_json(t.root())}, {"nodes", std::move(nodes)}};
}

WfTree tree_from_json(const Json& j) {
  std::vector<Node> nodes;
  std::vector<Node> elided;
  std::vector<std::pair<Node, std::vector<Node>>> listed;
  for (const auto& e : as_array(j.is_array() ? j : field(j, "nodes"), "nodes")) {
    if (e.is_array()) {
      nodes.push_back(node_from_json(e));
      continue;
    }
    Node n = node_from_json(field(e, "path"));
    nodes.push_back(n);
    bool internal = false;
    if (const Json* in = optional_field(e, "internal")) {
      if (!in->is_boolean()) bad("\"internal\" must be a boolean");
      internal = in->get<bool>();
    }
    std::vector<Node> succ;
    if (const Json* s = optional_field(e, "succ")) succ = map_array<Node>(*s, "succ", node_from_json);
    if (!succ.empty() && !internal && optional_field(e, "internal")) bad(n.to_string() + " lists successors but is not internal");
    if (internal && succ.empty()) elided.push_back(n);
    listed.emplace_back(n, std::move(succ));
  }
  {
    auto sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("duplicate node");
  }
  WfTree t = WfTree::singleton(Node{});
  try {
    t = WfTree::from_nodes(nodes, {});
  } catch (const Error& e) {
    bad(std::string("not a tree: ") + e.detail());
  }
  // Only leaves of the node set may be declared internal with elided successors.
  std::vector<Node> elided_leaves;
  for (const auto& n : elided) {
    if (t.has_successors(t.index_of(n))) continue;
    elided_leaves.push_back(n);
  }
  t = WfTree::from_nodes(t.nodes(), elided_leaves);
  for (const auto& [n, succ] : listed) {
    if (succ.empty()) continue;
    auto actual = t.successor_nodes(n);
    auto want = succ;
    std::sort(want.begin(), want.end());
    if (want != actual) bad("successors listed for " + n.to_string() + " do not match the node set");
  }
  if (const Json* r = optional_field(j, "root")) {
    if (node_from_json(*r) != t.root()) bad("\"root\" is not the least node");
  }
  auto report = validate_cwt(t, SurrogateParams{});
  for (const auto& v : report.violations) {
    if (v.clause == "a" || v.clause == "b" || v.clause == "c" || v.clause == "e") {
      bad("clause " + v.clause + ": " + v.detail);
    }
  }
  return t;
}

Json to_json(const SbWitness& w) {
  Json pruned = Json::array();
  for (const auto& [at, drop] : w.pruned) pruned.push_back({{"at", to_json(at)}, {"drop", to_json(drop)}});
  return {{"pruned", std::move(pruned)}};
}

SbWitness witness_from_json(const Json& j) {
  SbWitness w;
  for (const auto& e : as_array(field(j, "pruned"), "pruned")) {
    auto at = node_from_json(field(e, "at"));
    auto drop = map_array<Node>(field(e, "drop"), "drop", node_from_json);
    auto& slot = w.pruned[at];
    slot.insert(slot.end(), drop.begin(), drop.end());
  }
  return w;
}

Json to_json(const Coloring& c, const std::string& on, std::span<const Node> front) {
  Json values = Json::array();
  for (const auto& [n, v] : c) values.push_back({{"node", to_json(n)}, {"v", v}});
  Json out{{"on", on}};
  if (on == "front") out["front"] = to_json(front);
  out["values"] = std::move(values);
  return out;
}

Coloring coloring_from_json(const Json& j) {
  if (const Json* on = optional_field(j, "on")) {
    if (!on->is_string() || (*on != "max" && *on != "front")) bad("\"on\" must be \"max\" or \"front\"");
  }
  Coloring c;
  for (const auto& e : as_array(field(j, "values"), "values")) {
    if (!c.emplace(node_from_json(field(e, "node")), as_uint(field(e, "v"), "v")).second) bad("node colored twice");
  }
  if (const Json* f = optional_field(j, "front")) {
    for (const auto& n : map_array<Node>(*f, "front", node_from_json)) {
      if (!c.count(n)) bad("front node " + n.to_string() + " has no value");
    }
  }
  return c;
}

SurrogateParams params_from_json(const Json& j, SurrogateParams base) {
  if (!j.is_object()) bad("params must be an object");
  auto read = [&](const char* key, std::uint32_t& slot) {
    if (const Json* v = optional_field(j, key)) slot = static_cast<std::uint32_t>(as_uint(*v, key));
  };
  read("width", base.width);
  read("budget", base.budget);
  read("keep_min", base.keep_min);
  read("direction_threshold", base.direction_threshold);
  return base;
}

Json to_json(const SurrogateParams& p) {
  return {{"width", p.width}, {"budget", p.budget}, {"keep_min", p.keep_min}, {"direction_threshold", p.direction_threshold}};
}

Config config_from_json(const Json& j, Config base) {
  if (!j.is_object()) bad("config must be an object");
  const Json* nested = optional_field(j, "params");
  base.params = params_from_json(nested ? *nested : j, base.params);
  if (const Json* v = optional_field(j, "seed")) base.seed = as_uint(*v, "seed");
  auto read = [&](const char* key, std::size_t& slot) {
    if (const Json* v = optional_field(j, key)) {
      slot = static_cast<std::size_t>(as_uint(*v, key));
      if (slot == 0) bad(std::string(key) + " must be positive");
    }
  };
  read("cap", base.cap);
  read("coloring_bound", base.coloring_bound);
  read("trials", base.trials);
  return base;
}

Config load_config() {
  const char* path = std::getenv("WFT_CONFIG");
  if (!path || !*path) return {};
  return config_from_json(read_json_file(path));
}

Json to_json(const ApproxSystem& x) {
  Json families = Json::array();
  for (const auto& [at, trees] : x.families) {
    Json ts = Json::array();
    for (const auto& t : trees) ts.push_back(to_json(t));
    families.push_back({{"at", to_json(at)}, {"trees", std::move(ts)}});
  }
  Json order = Json::array();
  for (const auto& [a, b] : x.order) order.push_back(Json::array({to_json(a), to_json(b)}));
  std::vector<Node> ground(x.ground.begin(), x.ground.end());
  return {{"root", to_json(x.root)}, {"ground", to_json(ground)}, {"families", std::move(families)},
          {"order", std::move(order)}};
}

ApproxSystem system_from_json(const Json& j) {
  ApproxSystem x;
  x.root = node_from_json(field(j, "root"));
  x.ground.insert(x.root);
  if (const Json* g = optional_field(j, "ground")) {
    for (const auto& n : nodes_from_json(*g)) x.ground.insert(n);
  }
  for (const auto& f : as_array(field(j, "families"), "families")) {
    auto at = node_from_json(field(f, "at"));
    auto& fam = x.families[at];
    for (const auto& t : as_array(field(f, "trees"), "trees")) {
      auto tree = tree_from_json(t);
      for (const auto& n : tree.nodes()) x.ground.insert(n);
      fam.insert(std::move(tree));
    }
    x.ground.insert(at);
  }
  for (const auto& pr : as_array(field(j, "order"), "order")) {
    if (!pr.is_array() || pr.size() != 2) bad("order entries must be pairs");
    x.order.emplace(tree_from_json(pr[0]), tree_from_json(pr[1]));
  }
  return x;
}

Json to_json(const FinitePoset& q) {
  Json conds = Json::array();
  Json le = Json::array();
  for (Cond a = 0; a < q.size(); ++a) {
    conds.push_back(q.name(a));
    for (Cond b = 0; b < q.size(); ++b) {
      if (a != b && q.leq(a, b)) le.push_back(Json::array({q.name(a), q.name(b)}));
    }
  }
  return {{"conds", std::move(conds)}, {"le", std::move(le)}};
}

FinitePoset poset_from_json(const Json& j) {
  std::vector<std::string> conds;
  for (const auto& c : as_array(field(j, "conds"), "conds")) {
    if (!c.is_string()) bad("condition names must be strings");
    conds.push_back(c.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> le;
  if (const Json* l = optional_field(j, "le")) {
    for (const auto& pr : as_array(*l, "le")) {
      if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
        bad("le entries must be pairs of names");
      }
      le.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
    }
  }
  return FinitePoset(std::move(conds), le);
}

QName<Value> value_name_from_json(const FinitePoset& q, const Json& j) {
  return name_from_json<Value>(q, j, [](const Json& v) { return as_int(v, "value"); });
}

QName<std::set<Value>> set_name_from_json(const FinitePoset& q, const Json& j) {
  return name_from_json<std::set<Value>>(q, j, value_set);
}

QName<std::set<Node>> node_set_name_from_json(const FinitePoset& q, const Json& j) {
  return name_from_json<std::set<Node>>(q, j, [](const Json& v) {
    auto ns = nodes_from_json(v);
    return std::set<Node>(ns.begin(), ns.end());
  });
}

Json to_json(const FinitePoset& q, const QName<Value>& n) {
  Json wv = Json::array();
  for (const auto& [w, v] : n.by_world) wv.push_back({{"world", q.name(w)}, {"value", v}});
  return {{"world-values", std::move(wv)}};
}

Json to_json(const ValidationReport& r) {
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"clause", v.clause}, {"witnesses", to_json(v.witnesses)}, {"detail", v.detail}});
  }
  return {{"verdict", r.valid() ? "valid" : "invalid"}, {"violations", std::move(vs)}};
}

Json to_json(const FrontClassification& c) {
  Json out{{"kind", to_string(c.kind)}};
  if (c.kind == FrontKind::almost_front) out["witness"] = to_json(c.witness);
  return out;
}

Json to_json(const DecisionResult& d) {
  return {{"side", d.side ? "yes" : "no"}, {"subtree", to_json(d.subtree)}};
}

Json to_json(const CanonicalForm& f) {
  Json k = Json::array();
  for (const auto& [n, v] : f.k) k.push_back({{"node", to_json(n)}, {"k", v}});
  return {{"subtree", to_json(f.subtree)}, {"front", to_json(f.front)}, {"k", std::move(k)}};
}

Json to_json(const Uniformized& u) {
  return {{"subtree", to_json(u.subtree)}, {"front", to_json(u.front)}, {"h", to_json(u.h, "front", u.front)}};
}

Json to_json(const FamilyReport& r) {
  Json ces = Json::array();
  for (const auto& c : r.counterexamples) ces.push_back(to_json(c));
  return {{"ok", r.ok}, {"exhaustive", r.exhaustive}, {"checked", r.checked}, {"counterexamples", std::move(ces)}};
}

Json to_json(const AdjectiveFlags& f) {
  auto flag = [](const AdjectiveFlag& a) {
    return Json{{"value", a.value}, {"exhaustive", a.exhaustive}, {"evidence", a.evidence}};
  };
  return {{"fat", flag(f.fat)}, {"big", flag(f.big)}, {"large", flag(f.large)}, {"full", flag(f.full)},
          {"principal", flag(f.principal)}};
}

Json to_json(const Obligation& o) {
  Json out{{"step", o.step}, {"kind", o.kind}, {"status", o.status}, {"detail", o.detail}};
  if (o.target) out["target"] = to_json(*o.target);
  if (o.subtree) out["subtree"] = to_json(*o.subtree);
  if (o.coloring) out["coloring"] = to_json(*o.coloring);
  if (o.at) out["at"] = to_json(*o.at);
  return out;
}

Json to_json(const DriverResult& r) {
  Json ledger = Json::array();
  for (const auto& o : r.ledger) ledger.push_back(to_json(o));
  return {{"steps", r.history.size()}, {"system", to_json(r.system)}, {"ledger", std::move(ledger)}};
}

Json to_json(const OracleReport& r) {
  Json props = Json::array();
  for (const auto& p : r.properties) {
    props.push_back({{"name", p.name},
                     {"pass", p.pass()},
                     {"checked", p.checked},
                     {"failures", p.failures},
                     {"skipped", p.skipped},
                     {"counterexamples", p.counterexamples}});
  }
  return {{"family", r.family}, {"pass", r.pass()}, {"properties", std::move(props)}};
}

Json to_json(const FinitePoset& q, const Homogenized& h) {
  return {{"q", q.name(h.q)}, {"subtree", to_json(h.subtree)}, {"t", h.t}, {"rounds", h.rounds}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  if (path == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return parse_json(text);
  }
  std::ifstream in(path);
  if (!in) bad("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace wft

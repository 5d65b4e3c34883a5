#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/game.hpp"
#include "wft/oracle.hpp"
#include "wft/partition.hpp"
#include "wft/subtree.hpp"
#include "wft/system.hpp"
#include "wft/tree.hpp"

namespace wft {

using Json = nlohmann::ordered_json;

/// Every reader throws MalformedInput when the document does not match its schema.

Json to_json(const Node& n);
Node node_from_json(const Json& j);

Json to_json(std::span<const Node> ns);
/// Accepts a plain array of paths or an object with a "nodes" array.
std::vector<Node> nodes_from_json(const Json& j);

/// {"root":[...],"nodes":[{"path":[...],"internal":bool,"succ":[[...],...]}]}
Json to_json(const WfTree& t);
/// A bare array of paths is also accepted.
/// Listed successors must match the node set; an internal node may elide them.
/// Rejected unless the structural clauses a, b, c and e hold.
WfTree tree_from_json(const Json& j);

/// {"pruned":[{"at":[...],"drop":[[...],...]}]}
Json to_json(const SbWitness& w);
SbWitness witness_from_json(const Json& j);

/// {"on":"max"|"front","front":[[...]],"values":[{"node":[...],"v":int}]}
Json to_json(const Coloring& c, const std::string& on = "max", std::span<const Node> front = {});
Coloring coloring_from_json(const Json& j);

/// {"width","budget","keep_min","direction_threshold"}; missing keys keep `base`.
SurrogateParams params_from_json(const Json& j, SurrogateParams base = {});
Json to_json(const SurrogateParams& p);

struct Config {
  SurrogateParams params;
  std::uint64_t seed = 0;
  /// Largest enumerated family or subtree set.
  std::size_t cap = 1u << 16;
  /// Largest coloring space searched exhaustively.
  std::size_t coloring_bound = 1u << 12;
  std::size_t trials = 1000;
};

/// Reads the file named by WFT_CONFIG when set, otherwise returns defaults.
Config load_config();
/// Parameters may sit under "params" or at the top level.
Config config_from_json(const Json& j, Config base = {});

/// {"root":[...],"families":[{"at":[...],"trees":[<tree>...]}],"order":[[<tree>,<tree>],...]}
Json to_json(const ApproxSystem& x);
ApproxSystem system_from_json(const Json& j);

/// {"conds":[names],"le":[[a,b],...]}
Json to_json(const FinitePoset& q);
FinitePoset poset_from_json(const Json& j);

/// {"world-values":[{"world":name,"value":...}]}; world may be a name or an index.
QName<Value> value_name_from_json(const FinitePoset& q, const Json& j);
QName<std::set<Value>> set_name_from_json(const FinitePoset& q, const Json& j);
QName<std::set<Node>> node_set_name_from_json(const FinitePoset& q, const Json& j);
Json to_json(const FinitePoset& q, const QName<Value>& n);

Json to_json(const ValidationReport& r);
Json to_json(const FrontClassification& c);
Json to_json(const DecisionResult& d);
Json to_json(const CanonicalForm& f);
Json to_json(const Uniformized& u);
Json to_json(const FamilyReport& r);
Json to_json(const AdjectiveFlags& f);
Json to_json(const Obligation& o);
Json to_json(const DriverResult& r);
Json to_json(const OracleReport& r);
Json to_json(const FinitePoset& q, const Homogenized& h);

/// Parses text. Throws MalformedInput.
Json parse_json(const std::string& text);
/// Reads and parses a file, or standard input for "-". Throws MalformedInput.
Json read_json_file(const std::string& path);

}  // namespace wft

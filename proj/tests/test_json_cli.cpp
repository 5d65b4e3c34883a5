#include <doctest.h>

#include <sstream>

#include "wft/cli.hpp"
#include "wft/json_io.hpp"
#include "wft/system.hpp"

using namespace wft;

namespace {

struct Run {
  int code;
  Json out;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  Json j;
  auto text = out.str();
  if (!text.empty() && (text[0] == '{' || text[0] == '[')) j = Json::parse(text);
  return {code, j};
}

const std::string fan4 = "[[],[0],[1],[2],[3]]";
const std::string poset2 = R"({"conds":["p","a","b"],"le":[["p","a"],["p","b"]]})";

}  // namespace

TEST_CASE("tree JSON round trip") {
  auto t = WfTree::uniform(Node{2}, 4, 2);
  CHECK(tree_from_json(to_json(t)) == t);
  auto elided = WfTree::from_nodes({Node{}, Node{0}, Node{1}, Node{2}, Node{3}}, {Node{1}});
  auto back = tree_from_json(to_json(elided));
  CHECK(back == elided);
  CHECK(back.is_internal(back.index_of(Node{1})));
  CHECK(tree_from_json(parse_json(fan4)) == WfTree::uniform(Node{}, 4, 1));
}

TEST_CASE("tree JSON rejects malformed input") {
  CHECK_THROWS_AS(tree_from_json(parse_json("[[],[0],[0]]")), MalformedInput);
  CHECK_THROWS_AS(tree_from_json(parse_json("[[0],[1]]")), MalformedInput);
  CHECK_THROWS_AS(tree_from_json(parse_json(R"({"nodes":[{"path":[],"succ":[[1]]},{"path":[0]}]})")), MalformedInput);
  CHECK_THROWS_AS(tree_from_json(parse_json(R"({"nodes":[[-1]]})")), MalformedInput);
  CHECK_THROWS_AS(parse_json("{oops"), MalformedInput);
}

TEST_CASE("other JSON round trips") {
  SurrogateParams p{5, 2, 2, 3};
  auto q = params_from_json(to_json(p));
  CHECK(q.width == 5);
  CHECK(q.budget == 2);
  CHECK(q.keep_min == 2);
  CHECK(q.direction_threshold == 3);

  Coloring c{{Node{0}, 1}, {Node{1}, 4}};
  CHECK(coloring_from_json(to_json(c)) == c);

  SbWitness w;
  w.pruned[Node{}] = {Node{2}};
  CHECK(witness_from_json(to_json(w)).pruned == w.pruned);

  auto x = run_driver(12, SurrogateParams{}, 1).system;
  CHECK(system_from_json(to_json(x)) == x);

  auto poset = poset_from_json(parse_json(poset2));
  CHECK(poset.size() == 3);
  CHECK(poset.worlds().size() == 2);
  auto name = value_name_from_json(poset, parse_json(R"({"world-values":[{"world":"a","value":3},{"world":"b","value":5}]})"));
  CHECK(name.at(poset.index("b")) == 5);
  CHECK(value_name_from_json(poset, to_json(poset, name)).by_world == name.by_world);
  CHECK_THROWS_AS(value_name_from_json(poset, parse_json(R"({"world-values":[{"world":"z","value":1}]})")),
                  std::exception);
}

TEST_CASE("cli exit codes") {
  auto ok = cli({"tree", "depth", "--in", fan4});
  CHECK(ok.code == 0);
  CHECK(ok.out["depth"] == 1);

  auto domain = cli({"sub", "check-sb", "--sub", "[[1]]", "--in", fan4});
  CHECK(domain.code == 1);
  CHECK(domain.out["error"] == "RootMismatch");

  auto malformed = cli({"tree", "depth", "--in", "{bad"});
  CHECK(malformed.code == 2);
  CHECK(malformed.out["error"] == "MalformedInput");

  CHECK(cli({"nope"}).code == 2);
  CHECK(cli({"tree", "depth"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"tree", "validate", "--in", fan4, "--width", "3", "--budget", "3"}).code == 1);
}

TEST_CASE("cli tree and subtree verbs") {
  auto v = cli({"tree", "validate", "--in", "[[],[0],[1]]"});
  CHECK(v.code == 0);
  CHECK(v.out["verdict"] == "invalid");
  CHECK(v.out["violations"][0]["clause"] == "d");

  auto f = cli({"tree", "front", "--in", fan4, "--nodes", "[[1],[2],[3]]"});
  CHECK(f.code == 0);
  CHECK(f.out.dump().find("almost") != std::string::npos);

  auto l = cli({"sub", "leqstar", "--t1", fan4, "--t2", "[[],[0],[1],[2]]"});
  CHECK(l.code == 0);

  auto i = cli({"sub", "ideal", "--in", fan4, "--at", "[]", "--c", "[[2]]"});
  CHECK(i.out["member"] == true);
  CHECK(i.code == 0);
}

TEST_CASE("cli system verbs chain through JSON") {
  auto seed = cli({"system", "seed"});
  REQUIRE(seed.code == 0);
  auto sp = cli({"system", "sprout", "--system", seed.out.dump(), "--at", "[]"});
  REQUIRE(sp.code == 0);
  auto x = system_from_json(sp.out);
  CHECK(x.top_family().size() == 1);
  auto v = cli({"system", "validate", "--system", sp.out.dump()});
  CHECK(v.code == 0);
  CHECK(v.out["verdict"] == "valid");
  auto again = cli({"system", "sprout", "--system", sp.out.dump(), "--at", "[]"});
  CHECK(again.code == 1);
  CHECK(again.out["error"] == "FamilyNotSingleton");
}

TEST_CASE("cli game and oracle verbs") {
  auto bd = cli({"game", "bd", "--poset", poset2, "--rounds", "3", "--nu", "random", "--bnd", "possible"});
  REQUIRE(bd.code == 0);
  CHECK(bd.out["bnd_wins"] == true);

  auto list = cli({"oracle", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.size() == 8);

  auto h = cli({"game", "homogenize", "--poset", poset2, "--tree", fan4, "--name",
                R"({"world-values":[{"world":"a","value":[[0],[1],[2]]},{"world":"b","value":[[0],[1],[2],[3]]}]})"});
  CHECK(h.code == 0);
  CHECK(h.out["t"] == true);
}

TEST_CASE("config defaults file") {
  auto nested = config_from_json(parse_json(R"({"params":{"width":6,"budget":2},"seed":9,"trials":50})"));
  CHECK(nested.params.width == 6);
  CHECK(nested.params.budget == 2);
  CHECK(nested.seed == 9);
  CHECK(nested.trials == 50);
  auto flat = config_from_json(parse_json(R"({"keep_min":3})"));
  CHECK(flat.params.keep_min == 3);
  CHECK(flat.params.width == 4);
  CHECK_THROWS_AS(config_from_json(parse_json(R"({"trials":0})")), MalformedInput);
}

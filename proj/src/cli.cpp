#include "wft/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <random>

#include "wft/game.hpp"
#include "wft/json_io.hpp"
#include "wft/oracle.hpp"
#include "wft/partition.hpp"
#include "wft/subtree.hpp"
#include "wft/system.hpp"

namespace wft {

namespace {

/// A file path, "-" for standard input, or inline JSON.
Json load(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return parse_json(arg);
  return read_json_file(arg);
}

WfTree load_tree(const std::string& arg) { return tree_from_json(load(arg)); }

std::vector<WfTree> load_trees(const std::string& arg) {
  Json j = load(arg);
  const Json& arr = j.is_object() && j.contains("trees") ? j["trees"] : j;
  if (!arr.is_array()) throw MalformedInput("expected an array of trees or {\"trees\":[...]}");
  std::vector<WfTree> out;
  for (const auto& t : arr) out.push_back(tree_from_json(t));
  return out;
}

/// "max" selects max(t); anything else is a node list.
std::vector<Node> load_front(const std::string& arg, const WfTree& t) {
  if (arg == "max") return t.maximal();
  return nodes_from_json(load(arg));
}

struct Common {
  Config cfg;
  std::optional<std::uint32_t> width, budget, keep_min, threshold;
  std::optional<std::uint64_t> seed;

  SurrogateParams params() const {
    SurrogateParams p = cfg.params;
    if (width) p.width = *width;
    if (budget) p.budget = *budget;
    if (keep_min) p.keep_min = *keep_min;
    if (threshold) p.direction_threshold = *threshold;
    p.check();
    return p;
  }
  std::uint64_t the_seed() const { return seed.value_or(cfg.seed); }
};

void add_params(CLI::App* cmd, Common& c) {
  cmd->add_option("--width", c.width, "successor surrogate w");
  cmd->add_option("--budget", c.budget, "pruning budget k");
  cmd->add_option("--keep-min", c.keep_min, "positive-subtree surrogate m");
  cmd->add_option("--threshold", c.threshold, "direction threshold tau");
  cmd->add_option("--seed", c.seed, "random seed");
}

// ---------------------------------------------------------------------------
// Scripted and built-in strategies for the game verbs.

template <class T>
const T& nth(const std::vector<T>& moves, std::size_t n) {
  if (moves.empty()) throw MalformedInput("strategy has no moves");
  return moves[std::min(n, moves.size() - 1)];
}

Json moves_of(const std::string& arg) {
  Json j = load(arg);
  if (!j.is_object() || !j.contains("moves") || !j["moves"].is_array()) {
    throw MalformedInput("strategy must be {\"moves\":[...]}");
  }
  return j["moves"];
}

QName<Value> random_name(const FinitePoset& q, std::size_t values, std::mt19937_64& rng) {
  QName<Value> n;
  for (auto w : q.worlds()) n.by_world[w] = static_cast<Value>(rng() % values);
  return n;
}

std::set<Value> universe_of(const FinitePoset& q, const QName<Value>& tau) {
  std::set<Value> u;
  for (auto w : q.worlds()) u.insert(tau.at(w));
  return u;
}

struct GameSetup {
  FinitePoset poset;
  Cond p;
  std::size_t rounds;
  std::uint64_t seed;
};

Json transcript_header(const GameSetup& g, bool wins, const std::optional<Cond>& witness,
                       const std::vector<std::size_t>& flagged) {
  Json out{{"bnd_wins", wins}};
  out["witness"] = witness ? Json(g.poset.name(*witness)) : Json(nullptr);
  out["flagged"] = flagged;
  return out;
}

Json run_bd(const GameSetup& g, const std::string& nu_arg, const std::string& bnd_arg) {
  NuStrategy<QName<Value>, std::set<Value>> nu;
  if (nu_arg == "random") {
    nu = [&g](const BdTranscript& tr, std::uint64_t seed) {
      std::mt19937_64 rng(seed * 7919u + tr.rounds.size());
      return random_name(g.poset, 3, rng);
    };
  } else {
    std::vector<QName<Value>> moves;
    for (const auto& m : moves_of(nu_arg)) moves.push_back(value_name_from_json(g.poset, m));
    nu = [moves](const BdTranscript& tr, std::uint64_t) { return nth(moves, tr.rounds.size()); };
  }
  BndStrategy<QName<Value>, std::set<Value>> bnd;
  if (bnd_arg == "possible") {
    bnd = [&g](const BdTranscript&, const QName<Value>& tau, std::uint64_t) {
      return possible_values(g.poset, g.p, tau);
    };
  } else if (bnd_arg == "random") {
    bnd = [&g](const BdTranscript& tr, const QName<Value>& tau, std::uint64_t seed) {
      std::mt19937_64 rng(seed * 104729u + tr.rounds.size());
      std::set<Value> w;
      for (auto v : possible_values(g.poset, g.p, tau)) {
        if (rng() & 1u) w.insert(v);
      }
      return w;
    };
  } else {
    std::vector<std::set<Value>> moves;
    for (const auto& m : moves_of(bnd_arg)) {
      std::set<Value> w;
      if (!m.is_array()) throw MalformedInput("bd answers must be arrays of values");
      for (const auto& v : m) {
        if (!v.is_number_integer()) throw MalformedInput("bd answers must be arrays of values");
        w.insert(v.get<Value>());
      }
      moves.push_back(std::move(w));
    }
    bnd = [moves](const BdTranscript& tr, const QName<Value>&, std::uint64_t) { return nth(moves, tr.rounds.size()); };
  }
  auto tr = play_bd(g.poset, g.p, nu, bnd, g.rounds, g.seed);
  Json out = transcript_header(g, tr.bnd_wins, tr.witness, tr.flagged);
  Json rounds = Json::array();
  for (const auto& [tau, w] : tr.rounds) rounds.push_back({{"nu", to_json(g.poset, tau)}, {"bnd", w}});
  out["rounds"] = std::move(rounds);
  return out;
}

// NU's sb moves are given as bd names and played through the translation.
Json run_sb(const GameSetup& g, const std::string& nu_arg, const std::string& bnd_arg) {
  std::vector<QName<Value>> names;
  if (nu_arg == "random") {
    std::mt19937_64 rng(g.seed);
    for (std::size_t i = 0; i < g.rounds; ++i) names.push_back(random_name(g.poset, 3, rng));
  } else {
    for (const auto& m : moves_of(nu_arg)) names.push_back(value_name_from_json(g.poset, m));
  }
  NuStrategy<SbMove, Seq> nu = [&g, names](const SbTranscript& tr, std::uint64_t) {
    const auto& tau = nth(names, tr.rounds.size());
    return translate_bd_to_sb(universe_of(g.poset, tau), tau);
  };
  BndStrategy<SbMove, Seq> bnd;
  if (bnd_arg == "follow") {
    bnd = [&g](const SbTranscript&, const SbMove& m, std::uint64_t) {
      Seq eta;
      for (auto w : g.poset.worlds_above(g.p)) {
        auto v = m.selector(w, {});
        eta.push_back(v);
        eta.push_back(v);
      }
      return eta;
    };
  } else {
    std::vector<Seq> moves;
    for (const auto& m : moves_of(bnd_arg)) {
      Seq s;
      if (!m.is_array()) throw MalformedInput("sb answers must be arrays of values");
      for (const auto& v : m) {
        if (!v.is_number_integer()) throw MalformedInput("sb answers must be arrays of values");
        s.push_back(v.get<Value>());
      }
      moves.push_back(std::move(s));
    }
    bnd = [moves](const SbTranscript& tr, const SbMove&, std::uint64_t) { return nth(moves, tr.rounds.size()); };
  }
  auto tr = play_sb(g.poset, g.p, nu, bnd, g.rounds, g.seed);
  Json out = transcript_header(g, tr.bnd_wins, tr.witness, tr.flagged);
  Json rounds = Json::array();
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
    rounds.push_back({{"nu", to_json(g.poset, nth(names, i))}, {"bnd", tr.rounds[i].second}});
  }
  out["rounds"] = std::move(rounds);
  return out;
}

FbMove fb_move_from_json(const FinitePoset& q, const Json& j) {
  FbMove m;
  if (!j.is_object()) throw MalformedInput("filter move must be an object");
  for (const auto& v : j.value("index_set", Json::array())) {
    if (!v.is_number_integer()) throw MalformedInput("index_set must hold integers");
    m.index_set.insert(v.get<Value>());
  }
  if (!j.contains("base") || !j["base"].is_array()) throw MalformedInput("filter move needs \"base\"");
  for (const auto& b : j["base"]) {
    std::set<Value> s;
    if (!b.is_array()) throw MalformedInput("base members must be arrays");
    for (const auto& v : b) {
      if (!v.is_number_integer()) throw MalformedInput("base members must hold integers");
      s.insert(v.get<Value>());
    }
    m.base.push_back(std::move(s));
  }
  if (!j.contains("x")) throw MalformedInput("filter move needs \"x\"");
  m.x = set_name_from_json(q, j["x"]);
  if (j.contains("extension")) {
    QName<std::vector<std::set<Value>>> ext;
    if (!j["extension"].is_object() || !j["extension"].contains("world-values")) {
      throw MalformedInput("extension must be a name");
    }
    for (const auto& e : j["extension"]["world-values"]) {
      if (!e.contains("world") || !e.contains("value") || !e["value"].is_array()) {
        throw MalformedInput("extension entries need \"world\" and a list of sets");
      }
      Cond w = e["world"].is_string() ? q.index(e["world"].get<std::string>()) : e["world"].get<Cond>();
      std::vector<std::set<Value>> sets;
      for (const auto& s : e["value"]) {
        std::set<Value> x;
        for (const auto& v : s) x.insert(v.get<Value>());
        sets.push_back(std::move(x));
      }
      ext.by_world[w] = std::move(sets);
    }
    m.extension = std::move(ext);
  }
  return m;
}

Json run_fb(const GameSetup& g, const std::string& nu_arg, const std::string& bnd_arg, bool ultra) {
  std::vector<FbMove> moves;
  std::vector<Json> shown;
  if (nu_arg == "random") {
    std::mt19937_64 rng(g.seed);
    for (std::size_t i = 0; i < g.rounds; ++i) {
      auto tau = random_name(g.poset, 3, rng);
      auto u = universe_of(g.poset, tau);
      auto tr = translate_bd_to_vfbd(g.poset, tau, u, u.size());
      if (ultra) {
        QName<std::vector<std::set<Value>>> ext;
        for (auto w : g.poset.worlds()) {
          auto e = tr.move.base;
          e.push_back(tr.move.x.at(w));
          ext.by_world[w] = e;
        }
        tr.move.extension = ext;
      }
      moves.push_back(tr.move);
      shown.push_back({{"translated_from", to_json(g.poset, tau)}});
    }
  } else {
    for (const auto& m : moves_of(nu_arg)) {
      moves.push_back(fb_move_from_json(g.poset, m));
      shown.push_back(m);
    }
  }
  NuStrategy<FbMove, Value> nu = [moves](const FbTranscript& tr, std::uint64_t) { return nth(moves, tr.rounds.size()); };
  BndStrategy<FbMove, Value> bnd;
  if (bnd_arg == "random") {
    bnd = [](const FbTranscript& tr, const FbMove& m, std::uint64_t seed) {
      std::mt19937_64 rng(seed * 104729u + tr.rounds.size());
      if (m.index_set.empty()) return Value{0};
      auto it = m.index_set.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng() % m.index_set.size()));
      return *it;
    };
  } else {
    std::vector<Value> picks;
    for (const auto& v : moves_of(bnd_arg)) {
      if (!v.is_number_integer()) throw MalformedInput("filter answers must be integers");
      picks.push_back(v.get<Value>());
    }
    bnd = [picks](const FbTranscript& tr, const FbMove&, std::uint64_t) { return nth(picks, tr.rounds.size()); };
  }
  auto tr = ultra ? play_ufbd(g.poset, g.p, nu, bnd, g.rounds, g.seed) : play_vfbd(g.poset, g.p, nu, bnd, g.rounds, g.seed);
  Json out = transcript_header(g, tr.bnd_wins, tr.witness, tr.flagged);
  Json rounds = Json::array();
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) rounds.push_back({{"nu", nth(shown, i)}, {"bnd", tr.rounds[i].second}});
  out["rounds"] = std::move(rounds);
  return out;
}

void write_out(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw MalformedInput("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Well-founded tree calculus, partition procedures, approximation systems and forcing games", "wftool"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));

  Common c;
  std::function<Json()> action;
  auto verb = [&](CLI::App* group, const std::string& name, const std::string& help) {
    auto* cmd = group->add_subcommand(name, help);
    add_params(cmd, c);
    return cmd;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  std::string in, sub, nodes, x, z, coloring, family, mode = "big", system_arg, b1, b2, kind = "psb", at, outfile;
  std::string poset_arg, nu_arg, bnd_arg, name_arg, cond, to = "sb", u_arg, t1, t2;
  std::size_t steps = 50, rounds = 3, cap = 0, depth = 0, trials = 0;
  std::optional<std::uint32_t> target_budget;

  // tree
  auto* tree = group("tree", "well-founded trees");
  auto* tv = verb(tree, "validate", "check the tree clauses and surrogates");
  tv->add_option("--in", in)->required();
  tv->callback([&] { action = [&] { return to_json(validate_cwt(load_tree(in), c.params())); }; });
  auto* td = verb(tree, "depth", "rank of the tree");
  td->add_option("--in", in)->required();
  td->callback([&] { action = [&] { return Json{{"depth", wft::depth(load_tree(in))}}; }; });
  auto* tf = verb(tree, "front", "classify a node set as front, almost front or antichain");
  tf->add_option("--in", in)->required();
  tf->add_option("--nodes", nodes)->required();
  tf->callback([&] {
    action = [&] {
      auto t = load_tree(in);
      return to_json(classify_front(t, load_front(nodes, t), c.params()));
    };
  });

  // sub
  auto* sb = group("sub", "subtree calculus");
  auto* csb = verb(sb, "check-sb", "exhaustive-subtree check");
  csb->add_option("--sub", sub)->required();
  csb->add_option("--in", in)->required();
  csb->callback([&] {
    action = [&] {
      auto w = check_sb(load_tree(sub), load_tree(in), c.params());
      Json o{{"sb", w.has_value()}};
      if (w) o["witness"] = to_json(*w);
      return o;
    };
  });
  auto* cpsb = verb(sb, "check-psb", "positive-subtree check");
  cpsb->add_option("--sub", sub)->required();
  cpsb->add_option("--in", in)->required();
  cpsb->callback([&] { action = [&] { return Json{{"psb", check_psb(load_tree(sub), load_tree(in), c.params())}}; }; });
  auto* lq = verb(sb, "leqstar", "t1 <=* t2");
  lq->add_option("--t1", t1)->required();
  lq->add_option("--t2", t2)->required();
  lq->add_option("--target-budget", target_budget, "almost-front budget on the t2 side");
  lq->callback([&] {
    action = [&] {
      LeqStarOptions o;
      o.target_budget = target_budget;
      auto v = leq_star(load_tree(t1), load_tree(t2), c.params(), o);
      Json r{{"holds", v.holds}};
      if (v.witness) r["witness"] = to_json(*v.witness);
      return r;
    };
  });
  auto* fm = verb(sb, "filter", "membership of X in the filter derived from an almost front");
  fm->add_option("--in", in)->required();
  fm->add_option("--front", nodes)->required();
  fm->add_option("--x", x)->required();
  fm->callback([&] {
    action = [&] {
      auto t = load_tree(in);
      auto d = filter_member(t, load_front(nodes, t), nodes_from_json(load(x)), c.params());
      Json r{{"member", d.member}};
      if (d.witness) r["witness"] = to_json(*d.witness);
      return r;
    };
  });
  auto* im = verb(sb, "ideal", "membership of a successor set in the ideal at a node");
  im->add_option("--in", in)->required();
  im->add_option("--at", at)->required();
  im->add_option("--c", x)->required();
  im->callback([&] {
    action = [&] {
      auto t = load_tree(in);
      return Json{{"member", ideal_member(t, node_from_json(parse_json(at)), nodes_from_json(load(x)), c.params())}};
    };
  });

  // part
  auto* part = group("part", "partition procedures");
  auto* dc = verb(part, "decide", "monochromatic positive subtree for Z inside a front");
  dc->add_option("--tree", in)->required();
  dc->add_option("--front", nodes)->required();
  dc->add_option("--z", z)->required();
  dc->callback([&] {
    action = [&] {
      auto t = load_tree(in);
      return to_json(decide_subset(t, load_front(nodes, t), nodes_from_json(load(z)), c.params()));
    };
  });
  auto* cn = verb(part, "canonize", "canonical thinning of a coloring of max(t)");
  cn->add_option("--tree", in)->required();
  cn->add_option("--coloring", coloring)->required();
  cn->callback([&] { action = [&] { return to_json(canonize(load_tree(in), coloring_from_json(load(coloring)), c.params())); }; });
  auto* un = verb(part, "uniformize", "finite-to-one uniformization of a coloring of a front");
  un->add_option("--tree", in)->required();
  un->add_option("--front", nodes)->required();
  un->add_option("--coloring", coloring)->required();
  un->callback([&] {
    action = [&] {
      auto t = load_tree(in);
      return to_json(uniformize(t, load_front(nodes, t), coloring_from_json(load(coloring)), c.params()));
    };
  });
  auto* cf = verb(part, "check-family", "search for a coloring no member handles");
  cf->add_option("--tree", in)->required();
  cf->add_option("--family", family)->required();
  cf->add_option("--mode", mode)->check(CLI::IsMember({"big", "large"}));
  cf->add_option("--trials", trials);
  cf->callback([&] {
    action = [&] {
      auto m = mode == "big" ? FamilyMode::big : FamilyMode::large;
      return to_json(check_family(load_trees(family), load_tree(in), m, trials ? trials : c.cfg.trials, c.the_seed(),
                                  c.cfg.coloring_bound));
    };
  });

  // system
  auto* sys = group("system", "approximation systems");
  auto* ss = verb(sys, "seed", "the seed system");
  ss->callback([&] { action = [&] { return to_json(seed_system()); }; });
  auto* sv = verb(sys, "validate", "check the system clauses");
  sv->add_option("--system", system_arg)->required();
  sv->callback([&] { action = [&] { return to_json(validate_system(system_from_json(load(system_arg)), c.params())); }; });
  auto* sp = verb(sys, "sprout", "add a fan of fresh children at a node");
  sp->add_option("--system", system_arg)->required();
  sp->add_option("--at", at)->required();
  sp->callback([&] {
    action = [&] { return to_json(sprout(system_from_json(load(system_arg)), node_from_json(parse_json(at)), c.params())); };
  });
  auto* am = verb(sys, "amalgamate", "put a diagonal tree on top of the root family");
  am->add_option("--system", system_arg)->required();
  am->add_option("--chain", family, "increasing chain of root-family trees");
  am->callback([&] {
    action = [&] {
      auto xs = system_from_json(load(system_arg));
      return to_json(amalgamate(xs, c.params(), family.empty() ? std::vector<WfTree>{} : load_trees(family)));
    };
  });
  auto* mx = verb(sys, "maximalize", "thin a maximal member to distinct fresh directions");
  mx->add_option("--system", system_arg)->required();
  mx->add_option("--tree", in)->required();
  mx->callback([&] { action = [&] { return to_json(maximalize(system_from_json(load(system_arg)), load_tree(in), c.params())); }; });
  auto* ad = verb(sys, "adjoin", "add a psb or sb refinement next to a member");
  ad->add_option("--system", system_arg)->required();
  ad->add_option("--b1", b1)->required();
  ad->add_option("--b2", b2)->required();
  ad->add_option("--kind", kind)->check(CLI::IsMember({"psb", "sb"}));
  ad->callback([&] {
    action = [&] {
      auto k = kind == "psb" ? AdjoinKind::psb : AdjoinKind::sb;
      return to_json(adjoin(system_from_json(load(system_arg)), load_tree(b1), load_tree(b2), k, c.params()));
    };
  });
  auto* gr = verb(sys, "graft", "extend the maximum by family members at its leaves");
  gr->add_option("--system", system_arg)->required();
  gr->callback([&] { action = [&] { return to_json(graft(system_from_json(load(system_arg)), c.params())); }; });
  auto* aj = verb(sys, "adjectives", "fat, big, large, full and principal");
  aj->add_option("--system", system_arg)->required();
  aj->callback([&] {
    action = [&] {
      AdjectiveOptions o;
      o.coloring_bound = c.cfg.coloring_bound;
      o.trials = c.cfg.trials;
      o.seed = c.the_seed();
      return to_json(check_adjectives(system_from_json(load(system_arg)), c.params(), o));
    };
  });
  auto* dr = verb(sys, "drive", "run the bookkeeping construction");
  dr->add_option("--steps", steps);
  dr->add_option("--out", outfile, "also write the final system here");
  dr->callback([&] {
    action = [&] {
      auto r = run_driver(steps, c.params(), c.the_seed());
      if (!outfile.empty()) write_out(outfile, to_json(r.system));
      Json j = to_json(r);
      j["valid"] = validate_system(r.system, c.params()).valid();
      return j;
    };
  });

  // game
  auto* game = group("game", "forcing games over finite posets");
  auto add_play = [&](const std::string& name, const std::string& help) {
    auto* g = verb(game, name, help);
    g->add_option("--poset", poset_arg)->required();
    g->add_option("--p", cond, "starting condition (default: the first)");
    g->add_option("--rounds", rounds);
    g->add_option("--nu", nu_arg, "strategy file or random")->required();
    g->add_option("--bnd", bnd_arg, "strategy file or a built-in")->required();
    return g;
  };
  auto setup = [&] {
    auto q = poset_from_json(load(poset_arg));
    Cond p = cond.empty() ? 0 : q.index(cond);
    return GameSetup{std::move(q), p, rounds, c.the_seed()};
  };
  add_play("bd", "bounded game; bnd built-ins: possible, random")->callback([&] {
    action = [&] { return run_bd(setup(), nu_arg, bnd_arg); };
  });
  add_play("sb", "sb game with NU moves given as bd names; bnd built-in: follow")->callback([&] {
    action = [&] { return run_sb(setup(), nu_arg, bnd_arg); };
  });
  add_play("vfbd", "filter game; bnd built-in: random")->callback([&] {
    action = [&] { return run_fb(setup(), nu_arg, bnd_arg, false); };
  });
  add_play("ufbd", "filter game with extensions; bnd built-in: random")->callback([&] {
    action = [&] { return run_fb(setup(), nu_arg, bnd_arg, true); };
  });
  auto* tr = verb(game, "translate", "translate a bd name to sb or vfbd, or a filter move to bd");
  tr->add_option("--poset", poset_arg)->required();
  tr->add_option("--to", to)->check(CLI::IsMember({"sb", "vfbd", "bd"}));
  tr->add_option("--name", name_arg, "bd name, or a filter move for --to bd")->required();
  tr->add_option("--u", u_arg, "value set (default: the values of the name)");
  tr->add_option("--cap", cap, "label size bound c for vfbd");
  tr->add_option("--depth", depth, "sequence length checked for sb");
  tr->callback([&] {
    action = [&]() -> Json {
      auto q = poset_from_json(load(poset_arg));
      if (to == "bd") {
        auto bt = translate_vfbd_to_bd(q, fb_move_from_json(q, load(name_arg)));
        return {{"tau", to_json(q, bt.tau)}, {"base", bt.base}};
      }
      auto tau = value_name_from_json(q, load(name_arg));
      std::set<Value> u = universe_of(q, tau);
      if (!u_arg.empty()) {
        u.clear();
        for (const auto& v : load(u_arg)) u.insert(v.get<Value>());
      }
      if (to == "sb") {
        auto fail = check_range_equivalence(q, u, tau, depth ? depth : 3);
        Json r{{"equivalent", !fail.has_value()}};
        if (fail) r["counterexample"] = {{"q", q.name(fail->first)}, {"eta", fail->second}};
        return r;
      }
      auto vt = translate_bd_to_vfbd(q, tau, u, cap ? cap : u.size());
      Json x = Json::array();
      for (const auto& [w, s] : vt.move.x.by_world) x.push_back({{"world", q.name(w)}, {"value", s}});
      return {{"index_set", vt.move.index_set}, {"labels", vt.labels}, {"base", vt.move.base}, {"x", {{"world-values", x}}}};
    };
  });
  auto* hm = verb(game, "homogenize", "condition, positive subtree and truth value deciding a name");
  hm->add_option("--poset", poset_arg)->required();
  hm->add_option("--p", cond);
  hm->add_option("--tree", in)->required();
  hm->add_option("--name", name_arg, "name of a subset of max(tree)")->required();
  hm->callback([&] {
    action = [&] {
      auto g = setup();
      auto a = node_set_name_from_json(g.poset, load(name_arg));
      return to_json(g.poset, homogenize(g.poset, g.p, load_tree(in), a, c.params()));
    };
  });

  // oracle
  auto* orc = group("oracle", "brute-force oracles");
  OracleConfig oc;
  std::string fam;
  auto* orun = verb(orc, "run", "run one oracle family");
  orun->add_option("family", fam)->required()->check(CLI::IsMember(oracle_families()));
  orun->add_option("--depth", oc.depth);
  orun->add_option("--directions", oc.directions);
  orun->add_option("--max-budget", oc.max_budget);
  orun->add_option("--worlds", oc.worlds);
  orun->add_option("--rounds", oc.rounds);
  orun->add_option("--steps", oc.steps);
  orun->add_option("--seeds", oc.seeds);
  orun->add_option("--samples", oc.samples);
  orun->add_option("--stride", oc.stride);
  orun->add_option("--trials", oc.trials);
  orun->add_option("--cap", oc.cap);
  orun->callback([&] {
    action = [&] {
      oc.params = c.params();
      oc.seed = c.the_seed();
      return to_json(run_oracle(fam, oc));
    };
  });
  auto* olist = orc->add_subcommand("list", "oracle families");
  olist->callback([&] { action = [] { return Json(oracle_families()); }; });

  auto emit = [&](const Json& j) { out << (format == "pretty" ? j.dump(2) : j.dump()) << "\n"; };
  auto fail = [&](int code, const std::string& kind, const std::string& detail) {
    emit(Json{{"error", kind}, {"detail", detail}});
    return code;
  };

  try {
    c.cfg = load_config();
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    if (!action) return fail(2, "MalformedInput", "no command");
    emit(action());
    return 0;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return fail(2, "MalformedInput", e.what());
  } catch (const MalformedInput& e) {
    return fail(2, "MalformedInput", e.what());
  } catch (const Error& e) {
    return fail(1, e.code(), e.detail());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, "MalformedInput", e.what());
  }
}

}  // namespace wft

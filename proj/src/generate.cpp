#include "rrsem/generate.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace rrsem {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Term atom_lit(std::mt19937_64& rng) {
  static const char* kAtoms[] = {"a", "b", "c"};
  return Term::lit(Value::atom(kAtoms[uniform(rng, 0, 2)]));
}

}  // namespace

Scenario random_scenario(std::mt19937_64& rng, const GenOptions& opt) {
  Scenario scn;
  scn.entry = "root";
  int procs = uniform(rng, opt.min_procs, opt.max_procs);
  int workers = procs - 1;

  // Per script: the variables holding pids it may send to.
  std::vector<std::vector<std::string>> known(procs);
  std::vector<Script> scripts(procs);
  scripts[0].name = "root";
  for (int w = 1; w <= workers; ++w) {
    scripts[w].name = "w" + std::to_string(w);
    known[w] = {"Self", "R"};
    for (int j = 1; j < w; ++j) known[w].push_back("W" + std::to_string(j));
  }
  known[0] = {"Self"};
  for (int w = 1; w <= workers; ++w) {
    std::map<std::string, Expr> args{{"R", Term::var("Self")}};
    for (int j = 1; j < w; ++j) args.emplace("W" + std::to_string(j), Term::var("W" + std::to_string(j)));
    scripts[0].actions.push_back(Action::spawn("W" + std::to_string(w), scripts[w].name, std::move(args)));
    known[0].push_back("W" + std::to_string(w));
  }

  int fresh_var = 0;
  for (int p = 0; p < procs; ++p) {
    int total = uniform(rng, std::max<int>(opt.min_actions, scripts[p].actions.size() + 1),
                        std::max<int>(opt.max_actions, scripts[p].actions.size() + 1));
    while (static_cast<int>(scripts[p].actions.size()) < total) {
      int k = uniform(rng, 0, 99);
      if (k < 40) {
        const auto& ks = known[p];
        Term to = Term::var(ks[uniform(rng, 0, static_cast<int>(ks.size()) - 1)]);
        Term v = uniform(rng, 0, 1) ? atom_lit(rng) : Term::tuple({atom_lit(rng), Term::var("Self")});
        scripts[p].actions.push_back(Action::send(std::move(to), std::move(v)));
      } else if (k < 75) {
        int shape = uniform(rng, 0, 3);
        Term pat = shape == 0   ? Term::wild()
                   : shape == 1 ? atom_lit(rng)
                   : shape == 2 ? Term::var("X" + std::to_string(fresh_var++))
                                : Term::tuple({atom_lit(rng), Term::wild()});
        scripts[p].actions.push_back(Action::recv(std::move(pat)));
      } else {
        scripts[p].actions.push_back(Action::seq());
      }
    }
  }

  // Checks replace random non-spawn actions.
  int checks = uniform(rng, opt.min_checks, opt.max_checks);
  for (int c = 0; c < checks; ++c) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      int p = uniform(rng, 0, procs - 1);
      auto& acts = scripts[p].actions;
      int i = uniform(rng, 0, static_cast<int>(acts.size()) - 1);
      if (acts[i].op == Action::Op::Spawn || acts[i].op == Action::Op::Check) continue;
      acts[i] = Action::check("T" + std::to_string(c));
      break;
    }
  }
  scn.scripts = std::move(scripts);
  return scn;
}

}  // namespace rrsem

#pragma once

#include <cstdint>
#include <random>

#include "rrsem/scenario.hpp"

namespace rrsem {

// Shape of a random forward-only scenario: a root that spawns the other
// processes and hands each one the pids spawned before it, then random
// sends, receives, local steps and checks. No commit, rollback or oracle.
struct GenOptions {
  int min_procs = 2;
  int max_procs = 4;
  int min_actions = 4;
  int max_actions = 10;
  int min_checks = 0;
  int max_checks = 2;
};

Scenario random_scenario(std::mt19937_64& rng, const GenOptions& opt = {});

}  // namespace rrsem

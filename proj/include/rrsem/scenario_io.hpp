#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rrsem/scenario.hpp"

namespace rrsem {

// Every problem found while reading a scenario document, each prefixed with
// its location (line:column for syntax errors, a JSON pointer otherwise).
struct ParseError : std::runtime_error {
  explicit ParseError(std::vector<std::string> errs);
  std::vector<std::string> errors;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);  // ParseError, or std::runtime_error when unreadable

std::string scenario_to_json(const Scenario& scn);

std::string read_file(const std::string& path);

}  // namespace rrsem

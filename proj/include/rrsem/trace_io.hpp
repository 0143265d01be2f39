#pragma once

#include <string>

#include "rrsem/runner.hpp"

namespace rrsem {

// Line-delimited JSON: a {"meta": ...} header followed by one
// {"i", "rule", "pid", "payload", "hash"} record per step.
std::string trace_to_jsonl(const Trace& t);
Trace parse_trace(const std::string& text);  // ParseError

}  // namespace rrsem

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "anonlog/event_log.hpp"

namespace anonlog {

// Event Log Abstraction: a privacy header (origin, method, desired analyses)
// plus a tabular data part, for transformed event data that no longer form a
// standard event log. Deliberately contains no trace-level sequences.
struct ElaDocument {
  std::string origin;
  std::string method;
  std::vector<std::string> desired_analyses;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // every row has |columns| cells

  bool operator==(const ElaDocument&) const = default;
};

// Deterministic XML rendering; refuses documents violating the invariants
// (row arity, empty origin/method).
std::string write_ela(const ElaDocument& doc);

ElaDocument read_ela(std::string_view bytes);
ElaDocument read_ela_file(const std::filesystem::path& path);
void write_ela_file(const ElaDocument& doc, const std::filesystem::path& path);

// Directly-follows abstraction: one row per ordered activity pair adjacent in
// some trace, with its total adjacency count; rows sorted lexicographically.
ElaDocument dfg_abstraction(const EventLog& log, const std::string& origin);

}  // namespace anonlog

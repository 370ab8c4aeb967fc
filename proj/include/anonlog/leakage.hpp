#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anonlog/event_log.hpp"
#include "anonlog/privacy_metadata.hpp"

namespace anonlog {

// Signature variants analyzed: type+level only (coarse), the full triple, or
// the triple refined by an activity condition.
struct LeakageSignature {
  OperationType type = OperationType::Suppression;
  OperationLevel level = OperationLevel::Event;
  std::optional<std::string> target;                                // absent = coarse variant
  std::optional<std::pair<std::string, std::string>> condition;     // e.g. {"activity", "r"}
};

struct LeakageQuery {
  EventLog anonymized;
  LeakageSignature signature;
  std::uint64_t universe_size = 1;  // |U_res| bound from background knowledge
};

struct PoOptions {
  // An original log could in principle also have had a null resource; by
  // default the universe holds real values only.
  bool allow_null_fill = false;
};

// Membership test for the potential-original relation, specified for
// (sup, event, resource). Any other signature is an explicit error.
bool po_check(const EventLog& candidate, const EventLog& anonymized,
              const AnonymizerSignature& signature, const PoOptions& options = {});

struct CardinalityEstimate {
  bool unbounded = false;
  std::string note;               // explanation for the unbounded marker
  std::uint64_t slot_count = 0;   // free (null, condition-matching) resource slots
  // Both readings of the cardinality; nullopt on uint64 overflow.
  std::optional<std::uint64_t> paper_estimate;  // slot_count x universe_size
  std::optional<std::uint64_t> exact_count;     // universe_size ^ slot_count
};

CardinalityEstimate estimate_ol_cardinality(const LeakageQuery& query);

// Pull-based enumeration of every potential original log for the
// unconditioned (sup, event, resource) signature over an explicit universe.
// Candidates appear in lexicographic order of their fill assignments.
class OriginalLogEnumerator {
 public:
  // Refuses construction when the candidate count exceeds `cap`.
  OriginalLogEnumerator(EventLog anonymized, std::vector<std::string> universe, std::uint64_t cap);

  std::uint64_t total() const { return total_; }
  std::optional<EventLog> next();

 private:
  EventLog base_;
  std::vector<std::string> slots_;     // event ids with a null resource, trace order
  std::vector<std::string> universe_;  // sorted, deduplicated
  std::vector<std::size_t> odometer_;
  std::uint64_t total_ = 0;
  bool exhausted_ = false;
};

}  // namespace anonlog

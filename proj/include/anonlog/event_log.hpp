#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anonlog/attribute.hpp"

namespace anonlog {

// Standard event attribute keys. The formal roles activity/time/resource are
// realized by the usual XES extension keys.
namespace keys {
inline constexpr std::string_view kActivity = "concept:name";
inline constexpr std::string_view kTimestamp = "time:timestamp";
inline constexpr std::string_view kResource = "org:resource";
}  // namespace keys

struct Event {
  std::string id;
  AttributeMap attributes;

  // #n(e): absent and explicit null are indistinguishable.
  AttributeValue value(std::string_view name) const;

  bool operator==(const Event&) const = default;
};

struct Case {
  std::string id;
  AttributeMap attributes;
  std::vector<std::string> trace;  // event ids, time order

  AttributeValue value(std::string_view name) const;

  bool operator==(const Case&) const = default;
};

class EventLog {
 public:
  Case& add_case(std::string id);
  Event& add_event(std::string id);
  void append_to_trace(const std::string& case_id, const std::string& event_id);

  const std::vector<Case>& cases() const { return cases_; }
  const std::vector<Event>& events() const { return events_; }
  std::vector<Case>& cases() { return cases_; }
  std::vector<Event>& events() { return events_; }

  const Case* find_case(std::string_view id) const;
  const Event* find_event(std::string_view id) const;
  Case* find_case(std::string_view id);
  Event* find_event(std::string_view id);

  // The two halves of N are kept explicitly and must stay disjoint.
  const std::set<std::string, std::less<>>& event_attribute_names() const {
    return event_attr_names_;
  }
  const std::set<std::string, std::less<>>& case_attribute_names() const {
    return case_attr_names_;
  }
  void declare_event_attribute(std::string name);
  void declare_case_attribute(std::string name);

  // Setters declare the attribute name and replace the whole entry; setting a
  // Null value erases it, so maps never store explicit nulls.
  void set_event_attribute(const std::string& event_id, const std::string& name, Attribute attr);
  void set_event_value(const std::string& event_id, const std::string& name, AttributeValue v);
  void erase_event_attribute(const std::string& event_id, const std::string& name);
  void set_case_attribute(const std::string& case_id, const std::string& name, Attribute attr);
  void set_case_value(const std::string& case_id, const std::string& name, AttributeValue v);
  void erase_case_attribute(const std::string& case_id, const std::string& name);

  // Formal attribute lookups; Null when absent or when the stored attribute is
  // a list/container.
  AttributeValue event_value(std::string_view event_id, std::string_view name) const;
  AttributeValue case_value(std::string_view case_id, std::string_view name) const;

  // Role accessors over the standard keys. Null-safe: empty optional when the
  // attribute is absent or not of the expected kind.
  std::optional<std::string> activity_of(const Event& e) const;
  std::optional<Timestamp> timestamp_of(const Event& e) const;
  std::optional<std::string> resource_of(const Event& e) const;

  bool operator==(const EventLog&) const;

 private:
  std::vector<Case> cases_;
  std::vector<Event> events_;
  std::map<std::string, std::size_t, std::less<>> case_index_;
  std::map<std::string, std::size_t, std::less<>> event_index_;
  std::set<std::string, std::less<>> event_attr_names_;
  std::set<std::string, std::less<>> case_attr_names_;
};

enum class ViolationCode {
  DuplicateEventInTrace,
  EventInMultipleTraces,
  UnknownTraceEvent,
  OrphanEvent,
  TimestampOrder,
  AttributePartitionOverlap,
  StandardAttributeType,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
  std::string case_id;   // empty when not applicable
  std::string event_id;  // empty when not applicable
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_text() const;
};

// Checks every structural invariant; never throws, malformedness is the output.
ValidationReport validate(const EventLog& log);

// Throws ValidationError when the log is not well-formed.
void require_valid(const EventLog& log);

// Restricts the trace of `case_id` to the events in `keep`, preserving order.
// The log's event set is re-derived from the surviving traces.
EventLog project_trace(const EventLog& log, const std::string& case_id,
                       const std::set<std::string>& keep);

// Equality up to event-id renaming: same case ids and attributes, traces of
// equal length whose events match positionally on their attributes, and the
// renaming is consistent across the whole log.
bool structurally_equal(const EventLog& a, const EventLog& b);

}  // namespace anonlog

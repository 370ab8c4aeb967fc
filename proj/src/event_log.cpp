#include "anonlog/event_log.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace anonlog {

AttributeValue Event::value(std::string_view name) const {
  auto it = attributes.find(name);
  if (it == attributes.end()) return AttributeValue::null();
  return it->second.value;
}

AttributeValue Case::value(std::string_view name) const {
  auto it = attributes.find(name);
  if (it == attributes.end()) return AttributeValue::null();
  return it->second.value;
}

Case& EventLog::add_case(std::string id) {
  if (case_index_.count(id)) {
    throw ConfigError("duplicate case id '" + id + "'");
  }
  case_index_.emplace(id, cases_.size());
  cases_.push_back(Case{std::move(id), {}, {}});
  return cases_.back();
}

Event& EventLog::add_event(std::string id) {
  if (event_index_.count(id)) {
    throw ConfigError("duplicate event id '" + id + "'");
  }
  event_index_.emplace(id, events_.size());
  events_.push_back(Event{std::move(id), {}});
  return events_.back();
}

void EventLog::append_to_trace(const std::string& case_id, const std::string& event_id) {
  Case* c = find_case(case_id);
  if (!c) throw ConfigError("unknown case id '" + case_id + "'");
  c->trace.push_back(event_id);
}

const Case* EventLog::find_case(std::string_view id) const {
  auto it = case_index_.find(id);
  return it == case_index_.end() ? nullptr : &cases_[it->second];
}

const Event* EventLog::find_event(std::string_view id) const {
  auto it = event_index_.find(id);
  return it == event_index_.end() ? nullptr : &events_[it->second];
}

Case* EventLog::find_case(std::string_view id) {
  auto it = case_index_.find(id);
  return it == case_index_.end() ? nullptr : &cases_[it->second];
}

Event* EventLog::find_event(std::string_view id) {
  auto it = event_index_.find(id);
  return it == event_index_.end() ? nullptr : &events_[it->second];
}

void EventLog::declare_event_attribute(std::string name) {
  event_attr_names_.insert(std::move(name));
}

void EventLog::declare_case_attribute(std::string name) {
  case_attr_names_.insert(std::move(name));
}

void EventLog::set_event_attribute(const std::string& event_id, const std::string& name,
                                   Attribute attr) {
  Event* e = find_event(event_id);
  if (!e) throw ConfigError("unknown event id '" + event_id + "'");
  event_attr_names_.insert(name);
  e->attributes.insert_or_assign(name, std::move(attr));
}

void EventLog::set_event_value(const std::string& event_id, const std::string& name,
                               AttributeValue v) {
  if (v.is_null()) {
    erase_event_attribute(event_id, name);
    return;
  }
  set_event_attribute(event_id, name, Attribute::from_value(std::move(v)));
}

void EventLog::erase_event_attribute(const std::string& event_id, const std::string& name) {
  Event* e = find_event(event_id);
  if (!e) throw ConfigError("unknown event id '" + event_id + "'");
  e->attributes.erase(name);
}

void EventLog::set_case_attribute(const std::string& case_id, const std::string& name,
                                  Attribute attr) {
  Case* c = find_case(case_id);
  if (!c) throw ConfigError("unknown case id '" + case_id + "'");
  case_attr_names_.insert(name);
  c->attributes.insert_or_assign(name, std::move(attr));
}

void EventLog::set_case_value(const std::string& case_id, const std::string& name,
                              AttributeValue v) {
  if (v.is_null()) {
    erase_case_attribute(case_id, name);
    return;
  }
  set_case_attribute(case_id, name, Attribute::from_value(std::move(v)));
}

void EventLog::erase_case_attribute(const std::string& case_id, const std::string& name) {
  Case* c = find_case(case_id);
  if (!c) throw ConfigError("unknown case id '" + case_id + "'");
  c->attributes.erase(name);
}

AttributeValue EventLog::event_value(std::string_view event_id, std::string_view name) const {
  const Event* e = find_event(event_id);
  if (!e) return AttributeValue::null();
  return e->value(name);
}

AttributeValue EventLog::case_value(std::string_view case_id, std::string_view name) const {
  const Case* c = find_case(case_id);
  if (!c) return AttributeValue::null();
  return c->value(name);
}

std::optional<std::string> EventLog::activity_of(const Event& e) const {
  AttributeValue v = e.value(keys::kActivity);
  if (v.kind() != ValueKind::Text) return std::nullopt;
  return v.as_text();
}

std::optional<Timestamp> EventLog::timestamp_of(const Event& e) const {
  AttributeValue v = e.value(keys::kTimestamp);
  if (v.kind() != ValueKind::Timestamp) return std::nullopt;
  return v.as_timestamp();
}

std::optional<std::string> EventLog::resource_of(const Event& e) const {
  AttributeValue v = e.value(keys::kResource);
  if (v.kind() != ValueKind::Text) return std::nullopt;
  return v.as_text();
}

bool EventLog::operator==(const EventLog& other) const {
  return cases_ == other.cases_ && events_ == other.events_ &&
         event_attr_names_ == other.event_attr_names_ &&
         case_attr_names_ == other.case_attr_names_;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::DuplicateEventInTrace: return "duplicate-event-in-trace";
    case ViolationCode::EventInMultipleTraces: return "event-in-multiple-traces";
    case ViolationCode::UnknownTraceEvent: return "unknown-trace-event";
    case ViolationCode::OrphanEvent: return "orphan-event";
    case ViolationCode::TimestampOrder: return "timestamp-order";
    case ViolationCode::AttributePartitionOverlap: return "attribute-partition-overlap";
    case ViolationCode::StandardAttributeType: return "standard-attribute-type";
  }
  return "?";
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.code) << ": " << v.message << "\n";
  }
  return out.str();
}

ValidationReport validate(const EventLog& log) {
  ValidationReport report;
  auto add = [&](ViolationCode code, std::string message, std::string case_id = "",
                 std::string event_id = "") {
    report.violations.push_back(
        Violation{code, std::move(message), std::move(case_id), std::move(event_id)});
  };

  // Trace membership: each event in at most one trace, at most once, and known.
  std::unordered_map<std::string, const Case*> owner;
  for (const auto& c : log.cases()) {
    std::unordered_set<std::string> seen_in_trace;
    for (const auto& event_id : c.trace) {
      if (!log.find_event(event_id)) {
        add(ViolationCode::UnknownTraceEvent,
            "trace of case '" + c.id + "' references unknown event '" + event_id + "'", c.id,
            event_id);
        continue;
      }
      if (!seen_in_trace.insert(event_id).second) {
        add(ViolationCode::DuplicateEventInTrace,
            "event '" + event_id + "' appears more than once in trace of case '" + c.id + "'",
            c.id, event_id);
        continue;
      }
      auto [it, inserted] = owner.emplace(event_id, &c);
      if (!inserted) {
        add(ViolationCode::EventInMultipleTraces,
            "event '" + event_id + "' appears in traces of cases '" + it->second->id + "' and '" +
                c.id + "'",
            c.id, event_id);
      }
    }
  }
  for (const auto& e : log.events()) {
    if (!owner.count(e.id)) {
      add(ViolationCode::OrphanEvent, "event '" + e.id + "' belongs to no trace", "", e.id);
    }
  }

  // Standard attribute kinds, where present.
  for (const auto& e : log.events()) {
    auto check = [&](std::string_view key, ValueKind expected) {
      auto it = e.attributes.find(key);
      if (it == e.attributes.end()) return;
      if (it->second.is_collection() || it->second.value.kind() != expected) {
        add(ViolationCode::StandardAttributeType,
            "event '" + e.id + "' attribute '" + std::string(key) + "' is not of kind " +
                std::string(to_string(expected)),
            "", e.id);
      }
    };
    check(keys::kActivity, ValueKind::Text);
    check(keys::kTimestamp, ValueKind::Timestamp);
    check(keys::kResource, ValueKind::Text);
  }

  // Trace order must respect timestamps when both are present and well-typed.
  for (const auto& c : log.cases()) {
    std::optional<Timestamp> last;
    std::string last_event;
    for (const auto& event_id : c.trace) {
      const Event* e = log.find_event(event_id);
      if (!e) continue;
      AttributeValue v = e->value(keys::kTimestamp);
      if (v.kind() != ValueKind::Timestamp) continue;  // Null timestamps are skipped
      Timestamp ts = v.as_timestamp();
      if (last && ts < *last) {
        add(ViolationCode::TimestampOrder,
            "case '" + c.id + "': event '" + event_id + "' (" + format_timestamp(ts) +
                ") precedes its predecessor '" + last_event + "' (" + format_timestamp(*last) +
                ")",
            c.id, event_id);
      }
      last = ts;
      last_event = event_id;
    }
  }

  for (const auto& name : log.event_attribute_names()) {
    if (log.case_attribute_names().count(name)) {
      add(ViolationCode::AttributePartitionOverlap,
          "attribute '" + name + "' is declared at both event and case scope");
    }
  }

  return report;
}

void require_valid(const EventLog& log) {
  ValidationReport report = validate(log);
  if (!report.ok()) {
    throw ValidationError("event log is not well-formed:\n" + report.to_text());
  }
}

EventLog project_trace(const EventLog& log, const std::string& case_id,
                       const std::set<std::string>& keep) {
  if (!log.find_case(case_id)) {
    throw ConfigError("unknown case id '" + case_id + "'");
  }

  EventLog result;
  for (const auto& name : log.event_attribute_names()) result.declare_event_attribute(name);
  for (const auto& name : log.case_attribute_names()) result.declare_case_attribute(name);

  std::unordered_set<std::string> surviving;
  for (const auto& c : log.cases()) {
    Case& copy = result.add_case(c.id);
    copy.attributes = c.attributes;
    for (const auto& event_id : c.trace) {
      if (c.id == case_id && !keep.count(event_id)) continue;
      copy.trace.push_back(event_id);
      surviving.insert(event_id);
    }
  }
  for (const auto& e : log.events()) {
    if (surviving.count(e.id)) {
      result.add_event(e.id).attributes = e.attributes;
    }
  }
  return result;
}

bool structurally_equal(const EventLog& a, const EventLog& b) {
  if (a.cases().size() != b.cases().size() || a.events().size() != b.events().size()) {
    return false;
  }
  if (a.event_attribute_names() != b.event_attribute_names() ||
      a.case_attribute_names() != b.case_attribute_names()) {
    return false;
  }
  // Cases are a set keyed by id; order is not semantic.
  std::unordered_map<std::string, std::string> fwd, rev;
  for (const auto& ca : a.cases()) {
    const Case* cb = b.find_case(ca.id);
    if (!cb) return false;
    if (ca.attributes != cb->attributes) return false;
    if (ca.trace.size() != cb->trace.size()) return false;
    for (std::size_t i = 0; i < ca.trace.size(); ++i) {
      const Event* ea = a.find_event(ca.trace[i]);
      const Event* eb = b.find_event(cb->trace[i]);
      if (!ea || !eb) return false;
      if (ea->attributes != eb->attributes) return false;
      auto [fit, finserted] = fwd.emplace(ea->id, eb->id);
      if (!finserted && fit->second != eb->id) return false;
      auto [rit, rinserted] = rev.emplace(eb->id, ea->id);
      if (!rinserted && rit->second != ea->id) return false;
    }
  }
  return true;
}

}  // namespace anonlog

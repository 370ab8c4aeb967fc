#include "anonlog/anonymize.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

namespace anonlog {

namespace {

// Copies the log keeping declarations; cases and events are filtered by the
// predicates, and the event set is re-derived from the surviving traces.
template <typename KeepCase, typename KeepEvent>
EventLog filter_log(const EventLog& log, KeepCase&& keep_case, KeepEvent&& keep_event) {
  EventLog result;
  for (const auto& name : log.event_attribute_names()) result.declare_event_attribute(name);
  for (const auto& name : log.case_attribute_names()) result.declare_case_attribute(name);

  std::unordered_set<std::string> surviving;
  for (const auto& c : log.cases()) {
    if (!keep_case(c)) continue;
    Case& copy = result.add_case(c.id);
    copy.attributes = c.attributes;
    for (const auto& event_id : c.trace) {
      const Event* e = log.find_event(event_id);
      if (!keep_event(*e)) continue;
      copy.trace.push_back(event_id);
      surviving.insert(event_id);
    }
  }
  for (const auto& e : log.events()) {
    if (surviving.count(e.id)) result.add_event(e.id).attributes = e.attributes;
  }
  return result;
}

EventLog copy_log(const EventLog& log) {
  return filter_log(
      log, [](const Case&) { return true; }, [](const Event&) { return true; });
}

bool has_activity(const EventLog& log, const Event& e, const std::string& activity) {
  auto act = log.activity_of(e);
  return act && *act == activity;
}

// Cluster bookkeeping shared by condensation and swapping.
std::unordered_map<std::string, std::size_t> cluster_membership(const EventLog& log,
                                                                const ClusterSpec& spec) {
  std::unordered_map<std::string, std::size_t> member_of;
  for (std::size_t i = 0; i < spec.clusters.size(); ++i) {
    if (spec.clusters[i].empty()) {
      throw ConfigError("cluster " + std::to_string(i + 1) + " is empty");
    }
    for (const auto& case_id : spec.clusters[i]) {
      if (!log.find_case(case_id)) {
        throw ConfigError("cluster " + std::to_string(i + 1) + " references unknown case '" +
                          case_id + "'");
      }
      auto [it, inserted] = member_of.emplace(case_id, i);
      if (!inserted) {
        throw ConfigError("case '" + case_id + "' appears in more than one cluster");
      }
    }
  }
  return member_of;
}

void require_case_attribute(const EventLog& log, const std::string& attribute) {
  if (!log.case_attribute_names().count(attribute)) {
    throw ConfigError("'" + attribute + "' is not a declared case attribute");
  }
}

struct TotalOrderLess {
  bool operator()(const AttributeValue& a, const AttributeValue& b) const {
    return total_order_less(a, b);
  }
};

}  // namespace

std::string_view to_token(TimeLevel level) {
  switch (level) {
    case TimeLevel::Seconds: return "seconds";
    case TimeLevel::Minutes: return "minutes";
    case TimeLevel::Hours: return "hours";
    case TimeLevel::Days: return "days";
    case TimeLevel::Months: return "months";
    case TimeLevel::Years: return "years";
  }
  return "?";
}

std::optional<TimeLevel> time_level_from_token(std::string_view token) {
  if (token == "seconds") return TimeLevel::Seconds;
  if (token == "minutes") return TimeLevel::Minutes;
  if (token == "hours") return TimeLevel::Hours;
  if (token == "days") return TimeLevel::Days;
  if (token == "months") return TimeLevel::Months;
  if (token == "years") return TimeLevel::Years;
  return std::nullopt;
}

Timestamp floor_timestamp(Timestamp ts, TimeLevel level) {
  using namespace std::chrono;
  sys_time<milliseconds> tp{milliseconds{ts.millis}};
  switch (level) {
    case TimeLevel::Seconds:
      return Timestamp{duration_cast<milliseconds>(floor<seconds>(tp).time_since_epoch()).count()};
    case TimeLevel::Minutes:
      return Timestamp{duration_cast<milliseconds>(floor<minutes>(tp).time_since_epoch()).count()};
    case TimeLevel::Hours:
      return Timestamp{duration_cast<milliseconds>(floor<hours>(tp).time_since_epoch()).count()};
    case TimeLevel::Days:
      return Timestamp{duration_cast<milliseconds>(floor<days>(tp).time_since_epoch()).count()};
    case TimeLevel::Months:
    case TimeLevel::Years: {
      year_month_day ymd{floor<days>(tp)};
      year_month_day floored = level == TimeLevel::Months
                                   ? year_month_day{ymd.year(), ymd.month(), day{1}}
                                   : year_month_day{ymd.year(), month{1}, day{1}};
      return Timestamp{
          duration_cast<milliseconds>(sys_days{floored}.time_since_epoch()).count()};
    }
  }
  return ts;
}

EventLog suppress_events_by_activity(const EventLog& log, const std::string& activity) {
  require_valid(log);
  return filter_log(
      log, [](const Case&) { return true; },
      [&](const Event& e) { return !has_activity(log, e, activity); });
}

EventLog suppress_cases_by_trace_length(const EventLog& log, std::int64_t length) {
  if (length < 1) {
    throw ConfigError("trace length must be at least 1, got " + std::to_string(length));
  }
  require_valid(log);
  return filter_log(
      log,
      [&](const Case& c) { return static_cast<std::int64_t>(c.trace.size()) != length; },
      [](const Event&) { return true; });
}

EventLog suppress_resource_by_activity(const EventLog& log, const std::string& activity) {
  require_valid(log);
  if (!log.event_attribute_names().count(std::string(keys::kResource))) {
    throw ConfigError("'org:resource' is not a declared event attribute of this log");
  }
  EventLog result = copy_log(log);
  for (const auto& e : log.events()) {
    if (has_activity(log, e, activity)) {
      result.erase_event_attribute(e.id, std::string(keys::kResource));
    }
  }
  return result;
}

EventLog add_trailing_event(const EventLog& log, const std::string& trigger_activity,
                            const std::string& activity, const std::string& resource) {
  require_valid(log);
  for (std::string_view key : {keys::kActivity, keys::kTimestamp, keys::kResource}) {
    if (!log.event_attribute_names().count(std::string(key))) {
      throw ConfigError("'" + std::string(key) + "' is not a declared event attribute of this log");
    }
  }

  // Resolve the affected cases and their trailing timestamps before mutating
  // anything, so the error path leaves no partial result behind.
  std::vector<std::pair<std::string, Timestamp>> pending;
  for (const auto& c : log.cases()) {
    if (c.trace.empty()) continue;
    const Event* last = log.find_event(c.trace.back());
    if (!has_activity(log, *last, trigger_activity)) continue;
    auto ts = log.timestamp_of(*last);
    if (!ts) {
      throw ConfigError("case '" + c.id +
                        "' matches the trigger but its last event has no timestamp; "
                        "the +1ms increment is undefined");
    }
    pending.emplace_back(c.id, Timestamp{ts->millis + 1});
  }

  EventLog result = copy_log(log);
  std::size_t counter = log.events().size() + 1;
  for (const auto& [case_id, ts] : pending) {
    std::string fresh_id;
    do {
      fresh_id = "e" + std::to_string(counter++);
    } while (log.find_event(fresh_id));
    result.add_event(fresh_id);
    result.set_event_value(fresh_id, std::string(keys::kActivity), AttributeValue::text(activity));
    result.set_event_value(fresh_id, std::string(keys::kResource), AttributeValue::text(resource));
    result.set_event_value(fresh_id, std::string(keys::kTimestamp), AttributeValue::timestamp(ts));
    result.append_to_trace(case_id, fresh_id);
  }
  return result;
}

EventLog substitute_activities(const EventLog& log, const SubstitutionSpec& spec, SeededRng& rng) {
  require_valid(log);
  for (const auto& label : spec.substitutes) {
    if (spec.sensitive.count(label)) {
      throw ConfigError("label '" + label + "' is both sensitive and a substitute");
    }
  }
  for (const auto& e : log.events()) {
    auto act = log.activity_of(e);
    if (act && spec.substitutes.count(*act)) {
      throw ConfigError("substitute label '" + *act + "' already occurs in the log");
    }
  }

  std::vector<std::string> pool(spec.substitutes.begin(), spec.substitutes.end());
  EventLog result = copy_log(log);
  for (const auto& c : log.cases()) {
    for (const auto& event_id : c.trace) {
      const Event* e = log.find_event(event_id);
      auto act = log.activity_of(*e);
      if (!act || !spec.sensitive.count(*act)) continue;
      if (pool.empty()) {
        throw ConfigError("a sensitive activity matched but the substitute set is empty");
      }
      result.set_event_value(event_id, std::string(keys::kActivity),
                             AttributeValue::text(pool[rng.next_below(pool.size())]));
    }
  }
  return result;
}

EventLog condense_case_attribute(const EventLog& log, const ClusterSpec& spec,
                                 const std::string& attribute) {
  require_valid(log);
  require_case_attribute(log, attribute);
  auto member_of = cluster_membership(log, spec);
  for (const auto& c : log.cases()) {
    if (!member_of.count(c.id)) {
      throw ConfigError("case '" + c.id + "' is not covered by any cluster");
    }
  }

  // Mode of the original values per cluster; ties go to the smallest value
  // under the attribute-value total order.
  std::vector<AttributeValue> modes(spec.clusters.size());
  for (std::size_t i = 0; i < spec.clusters.size(); ++i) {
    std::map<AttributeValue, std::size_t, TotalOrderLess> counts;
    for (const auto& case_id : spec.clusters[i]) {
      counts[log.case_value(case_id, attribute)]++;
    }
    std::size_t best = 0;
    for (const auto& [value, count] : counts) {
      if (count > best) {
        best = count;
        modes[i] = value;
      }
    }
  }

  EventLog result = copy_log(log);
  for (const auto& c : log.cases()) {
    result.set_case_value(c.id, attribute, modes[member_of.at(c.id)]);
  }
  return result;
}

EventLog swap_case_attribute(const EventLog& log, const ClusterSpec& spec,
                             const std::string& attribute, SeededRng& rng) {
  require_valid(log);
  require_case_attribute(log, attribute);
  auto member_of = cluster_membership(log, spec);
  for (std::size_t i = 0; i < spec.clusters.size(); ++i) {
    if (spec.clusters[i].size() < 2) {
      throw ConfigError("cluster " + std::to_string(i + 1) +
                        " has fewer than two cases; swapping is undefined");
    }
  }

  // Cluster members in log order, so draws are reproducible.
  std::vector<std::vector<std::string>> members(spec.clusters.size());
  for (const auto& c : log.cases()) {
    auto it = member_of.find(c.id);
    if (it != member_of.end()) members[it->second].push_back(c.id);
  }

  EventLog result = copy_log(log);
  for (const auto& c : log.cases()) {
    auto it = member_of.find(c.id);
    if (it == member_of.end()) continue;  // uncovered cases keep their value
    std::vector<const std::string*> others;
    for (const auto& id : members[it->second]) {
      if (id != c.id) others.push_back(&id);
    }
    const std::string& donor = *others[rng.next_below(others.size())];
    // Draw against the original values: no cascading.
    result.set_case_value(c.id, attribute, log.case_value(donor, attribute));
  }
  return result;
}

EventLog encrypt_activity(const EventLog& log, const CipherSpec& cipher) {
  require_valid(log);
  if (cipher.key.empty()) {
    throw ConfigError("cipher key must not be empty");
  }
  EventLog result = copy_log(log);
  for (const auto& e : log.events()) {
    auto act = log.activity_of(e);
    if (!act) continue;
    result.set_event_value(e.id, std::string(keys::kActivity),
                           AttributeValue::text(encrypt_value(*act, cipher)));
  }
  return result;
}

EventLog generalize_time(const EventLog& log, TimeLevel level) {
  require_valid(log);
  EventLog result = copy_log(log);
  for (const auto& e : log.events()) {
    auto ts = log.timestamp_of(e);
    if (!ts) continue;
    result.set_event_value(e.id, std::string(keys::kTimestamp),
                           AttributeValue::timestamp(floor_timestamp(*ts, level)));
  }
  return result;
}

namespace {

struct OpSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, OpSchema>& op_schemas() {
  static const std::map<std::string, OpSchema> schemas = {
      {"suppress_events_by_activity", {{"activity"}, {}}},
      {"suppress_cases_by_trace_length", {{"length"}, {}}},
      {"suppress_resource_by_activity", {{"activity"}, {}}},
      {"add_trailing_event", {{"trigger_activity", "activity", "resource"}, {}}},
      {"substitute_activities", {{"sensitive", "substitutes"}, {}}},
      {"condense_case_attribute", {{"attribute", "clusters"}, {}}},
      {"swap_case_attribute", {{"attribute", "clusters"}, {}}},
      {"encrypt_activity", {{"method", "key"}, {}}},
      {"generalize_time", {{"level"}, {"scheme"}}},
  };
  return schemas;
}

const std::string& require_param(const AnonymizerStep& step, const std::string& name) {
  auto it = step.params.find(name);
  if (it == step.params.end()) {
    throw ConfigError("operation '" + step.op + "' requires parameter '" + name + "'");
  }
  return it->second;
}

std::set<std::string> parse_label_set(const std::string& csv) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    std::string label = csv.substr(start, end - start);
    if (!label.empty()) out.insert(std::move(label));
    start = end + 1;
  }
  return out;
}

ClusterSpec parse_clusters(const std::string& text) {
  ClusterSpec spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('|', start);
    if (end == std::string::npos) end = text.size();
    std::set<std::string> cluster = parse_label_set(text.substr(start, end - start));
    if (cluster.empty()) {
      throw ConfigError("clusters specification contains an empty cluster");
    }
    spec.clusters.push_back(std::move(cluster));
    start = end + 1;
  }
  return spec;
}

std::int64_t parse_int_param(const AnonymizerStep& step, const std::string& name) {
  const std::string& text = require_param(step, name);
  try {
    std::size_t used = 0;
    std::int64_t value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("parameter '" + name + "' of '" + step.op + "' is not an integer: '" +
                      text + "'");
  }
}

TimeLevel parse_level_param(const AnonymizerStep& step) {
  const std::string& token = require_param(step, "level");
  auto level = time_level_from_token(token);
  if (!level) {
    throw ConfigError("unknown time level '" + token +
                      "' (expected seconds|minutes|hours|days|months|years)");
  }
  return *level;
}

void check_scheme_param(const AnonymizerStep& step) {
  auto it = step.params.find("scheme");
  if (it == step.params.end() || it->second == "full_domain") return;
  if (it->second == "subtree" || it->second == "sibling" || it->second == "cell") {
    throw UnsupportedError("generalization scheme '" + it->second +
                           "' is recognized but not implemented; only full_domain is available");
  }
  throw ConfigError("unknown generalization scheme '" + it->second + "'");
}

}  // namespace

void validate_step(const AnonymizerStep& step) {
  auto it = op_schemas().find(step.op);
  if (it == op_schemas().end()) {
    throw ConfigError("unknown operation '" + step.op + "'");
  }
  const OpSchema& schema = it->second;
  for (const auto& name : schema.required) {
    require_param(step, name);
  }
  for (const auto& [name, value] : step.params) {
    bool known = std::find(schema.required.begin(), schema.required.end(), name) !=
                     schema.required.end() ||
                 std::find(schema.optional.begin(), schema.optional.end(), name) !=
                     schema.optional.end();
    if (!known) {
      throw ConfigError("unknown parameter '" + name + "' for operation '" + step.op + "'");
    }
  }
  // Value shapes that do not depend on the log.
  if (step.op == "suppress_cases_by_trace_length") {
    if (parse_int_param(step, "length") < 1) {
      throw ConfigError("parameter 'length' must be at least 1");
    }
  } else if (step.op == "generalize_time") {
    parse_level_param(step);
    check_scheme_param(step);
  } else if (step.op == "condense_case_attribute" || step.op == "swap_case_attribute") {
    parse_clusters(require_param(step, "clusters"));
  }
}

AnonymizerSignature signature_for_step(const AnonymizerStep& step) {
  validate_step(step);
  if (step.op == "suppress_events_by_activity") {
    return {OperationType::Suppression, OperationLevel::Event, "event"};
  }
  if (step.op == "suppress_cases_by_trace_length") {
    return {OperationType::Suppression, OperationLevel::Case, "case"};
  }
  if (step.op == "suppress_resource_by_activity") {
    return {OperationType::Suppression, OperationLevel::Event, "resource"};
  }
  if (step.op == "add_trailing_event") {
    return {OperationType::Addition, OperationLevel::Case, "trace"};
  }
  if (step.op == "substitute_activities") {
    return {OperationType::Substitution, OperationLevel::Event, "activity"};
  }
  if (step.op == "condense_case_attribute") {
    return {OperationType::Condensation, OperationLevel::Case, require_param(step, "attribute")};
  }
  if (step.op == "swap_case_attribute") {
    return {OperationType::Swapping, OperationLevel::Case, require_param(step, "attribute")};
  }
  if (step.op == "encrypt_activity") {
    return {OperationType::Cryptography, OperationLevel::Event, "activity"};
  }
  return {OperationType::Generalization, OperationLevel::Event, "time"};
}

EventLog apply_step(const EventLog& log, const AnonymizerStep& step, SeededRng& rng) {
  validate_step(step);
  if (step.op == "suppress_events_by_activity") {
    return suppress_events_by_activity(log, require_param(step, "activity"));
  }
  if (step.op == "suppress_cases_by_trace_length") {
    return suppress_cases_by_trace_length(log, parse_int_param(step, "length"));
  }
  if (step.op == "suppress_resource_by_activity") {
    return suppress_resource_by_activity(log, require_param(step, "activity"));
  }
  if (step.op == "add_trailing_event") {
    return add_trailing_event(log, require_param(step, "trigger_activity"),
                              require_param(step, "activity"), require_param(step, "resource"));
  }
  if (step.op == "substitute_activities") {
    SubstitutionSpec spec;
    spec.sensitive = parse_label_set(require_param(step, "sensitive"));
    spec.substitutes = parse_label_set(require_param(step, "substitutes"));
    return substitute_activities(log, spec, rng);
  }
  if (step.op == "condense_case_attribute") {
    return condense_case_attribute(log, parse_clusters(require_param(step, "clusters")),
                                   require_param(step, "attribute"));
  }
  if (step.op == "swap_case_attribute") {
    return swap_case_attribute(log, parse_clusters(require_param(step, "clusters")),
                               require_param(step, "attribute"), rng);
  }
  if (step.op == "encrypt_activity") {
    return encrypt_activity(log,
                            CipherSpec{require_param(step, "method"), require_param(step, "key")});
  }
  return generalize_time(log, parse_level_param(step));
}

XesDocument apply_pipeline(const XesDocument& doc, const std::vector<AnonymizerStep>& steps,
                           SeededRng& rng) {
  // Validate the whole plan first: a config error in step 3 must not leave
  // steps 1-2 applied.
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      validate_step(steps[i]);
    } catch (const Error& e) {
      throw PipelineError(i + 1, e.kind(), e.what());
    }
  }

  XesDocument out = doc;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      out.log = apply_step(out.log, steps[i], rng);
      set_anonymizer(out, signature_for_step(steps[i]));
    } catch (const Error& e) {
      throw PipelineError(i + 1, e.kind(), e.what());
    }
  }
  return out;
}

}  // namespace anonlog

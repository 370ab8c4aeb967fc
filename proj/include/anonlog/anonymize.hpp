#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anonlog/event_log.hpp"
#include "anonlog/privacy_metadata.hpp"
#include "anonlog/rng.hpp"
#include "anonlog/xes.hpp"

namespace anonlog {

// Activity substitution: sensitive labels are replaced by draws from the
// substitute set, which must be disjoint from the labels present in the log.
struct SubstitutionSpec {
  std::set<std::string> sensitive;
  std::set<std::string> substitutes;
};

// Disjoint clusters of case ids for condensation and swapping.
struct ClusterSpec {
  std::vector<std::set<std::string>> clusters;
};

struct CipherSpec {
  std::string method;
  std::string key;
};

enum class TimeLevel { Seconds, Minutes, Hours, Days, Months, Years };

std::string_view to_token(TimeLevel level);
std::optional<TimeLevel> time_level_from_token(std::string_view token);

enum class GeneralizationScheme { FullDomain, Subtree, Sibling, Cell };

// Zeroes/floors every calendar field strictly finer than `level`.
Timestamp floor_timestamp(Timestamp ts, TimeLevel level);

// The nine anonymization operations. Each one requires a well-formed log,
// returns a fresh log and leaves the input untouched; none of them records
// metadata (the pipeline layer does).

// (sup, event, event)
EventLog suppress_events_by_activity(const EventLog& log, const std::string& activity);

// (sup, case, case)
EventLog suppress_cases_by_trace_length(const EventLog& log, std::int64_t length);

// (sup, event, resource)
EventLog suppress_resource_by_activity(const EventLog& log, const std::string& activity);

// (add, case, trace): appends a fresh event (activity/resource as given,
// timestamp one millisecond after the previous trace end) to every case whose
// last activity is `trigger_activity`.
EventLog add_trailing_event(const EventLog& log, const std::string& trigger_activity,
                            const std::string& activity, const std::string& resource);

// (sub, event, activity): independent draw per sensitive event.
EventLog substitute_activities(const EventLog& log, const SubstitutionSpec& spec, SeededRng& rng);

// (con, case, <attr>): cluster mode, ties broken by the smallest value under
// the attribute-value total order. Every case must be covered by a cluster.
EventLog condense_case_attribute(const EventLog& log, const ClusterSpec& spec,
                                 const std::string& attribute);

// (swa, case, <attr>): each covered case draws the original value of another
// member of its cluster; clusters of fewer than two cases are rejected.
EventLog swap_case_attribute(const EventLog& log, const ClusterSpec& spec,
                             const std::string& attribute, SeededRng& rng);

// (cry, event, activity): deterministic per (value, method, key).
EventLog encrypt_activity(const EventLog& log, const CipherSpec& cipher);

// (gen, event, time): full-domain flooring; Null timestamps pass through.
EventLog generalize_time(const EventLog& log, TimeLevel level);

// Cipher registry. Ships "hmac_sha256" (keyed hash rendered as lowercase hex);
// further methods may be registered at startup.
using CipherFn = std::function<std::string(const std::string& value, const std::string& key)>;
void register_cipher_method(const std::string& name, CipherFn fn);
std::vector<std::string> registered_cipher_methods();
std::string encrypt_value(const std::string& value, const CipherSpec& cipher);

// One pipeline layer: an operation name plus textual parameters. Canonical
// operation names are the function names above.
struct AnonymizerStep {
  std::string op;
  std::map<std::string, std::string> params;
};

// Schema check (operation known, parameter names and shapes valid) that needs
// no log; value checks against a concrete log happen on execution.
void validate_step(const AnonymizerStep& step);

AnonymizerSignature signature_for_step(const AnonymizerStep& step);

EventLog apply_step(const EventLog& log, const AnonymizerStep& step, SeededRng& rng);

// Applies the steps strictly in order, appending one metadata record per
// layer. A failing layer aborts the whole pipeline (the input document is
// never half-modified) and reports its 1-based index.
XesDocument apply_pipeline(const XesDocument& doc, const std::vector<AnonymizerStep>& steps,
                           SeededRng& rng);

}  // namespace anonlog

#include "anonlog/leakage.hpp"

#include <algorithm>

namespace anonlog {

namespace {

bool is_resource_suppression(OperationType type, OperationLevel level,
                             const std::string* target) {
  return type == OperationType::Suppression && level == OperationLevel::Event &&
         (!target || *target == "resource");
}

void require_supported(const AnonymizerSignature& signature) {
  if (signature.type != OperationType::Suppression ||
      signature.level != OperationLevel::Event || signature.target != "resource") {
    throw UnsupportedError("potential-original analysis is only specified for "
                           "(sup, event, resource); got (" +
                           std::string(to_token(signature.type)) + ", " +
                           std::string(to_token(signature.level)) + ", " + signature.target + ")");
  }
}

// Free slots: events whose resource is null, in trace order, optionally
// restricted to an activity condition.
std::vector<std::string> null_resource_slots(
    const EventLog& log, const std::optional<std::pair<std::string, std::string>>& condition) {
  if (condition && condition->first != "activity") {
    throw UnsupportedError("only activity conditions are supported, got '" + condition->first +
                           "'");
  }
  std::vector<std::string> slots;
  for (const auto& c : log.cases()) {
    for (const auto& event_id : c.trace) {
      const Event* e = log.find_event(event_id);
      if (e->value(keys::kResource).kind() != ValueKind::Null) continue;
      if (condition) {
        auto act = log.activity_of(*e);
        if (!act || *act != condition->second) continue;
      }
      slots.push_back(event_id);
    }
  }
  return slots;
}

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    auto next = checked_mul(result, base);
    if (!next) return std::nullopt;
    result = *next;
  }
  return result;
}

}  // namespace

bool po_check(const EventLog& candidate, const EventLog& anonymized,
              const AnonymizerSignature& signature, const PoOptions& options) {
  require_supported(signature);

  // C = C', E = E', N = N'. The signature itself asserts that the resource
  // attribute belongs to N on both sides, so its declaration is normalized
  // away before comparing: a round-tripped log whose resources were all
  // suppressed no longer carries any occurrence of the name.
  if (candidate.cases().size() != anonymized.cases().size() ||
      candidate.events().size() != anonymized.events().size()) {
    return false;
  }
  auto event_names = [](const EventLog& log) {
    std::set<std::string, std::less<>> names = log.event_attribute_names();
    names.insert(std::string(keys::kResource));
    return names;
  };
  if (event_names(candidate) != event_names(anonymized) ||
      candidate.case_attribute_names() != anonymized.case_attribute_names()) {
    return false;
  }

  // Cases agree on every attribute including the trace.
  for (const auto& ca : anonymized.cases()) {
    const Case* cc = candidate.find_case(ca.id);
    if (!cc || cc->attributes != ca.attributes || cc->trace != ca.trace) return false;
  }

  for (const auto& ea : anonymized.events()) {
    const Event* ec = candidate.find_event(ea.id);
    if (!ec) return false;

    // Agreement on everything except the resource.
    AttributeMap anonymized_rest = ea.attributes;
    AttributeMap candidate_rest = ec->attributes;
    anonymized_rest.erase(std::string(keys::kResource));
    candidate_rest.erase(std::string(keys::kResource));
    if (anonymized_rest != candidate_rest) return false;

    auto anon_res = ea.attributes.find(keys::kResource);
    auto cand_res = ec->attributes.find(keys::kResource);
    if (anon_res == ea.attributes.end()) {
      // Suppressed slot: the original must hold a universe value.
      if (cand_res == ec->attributes.end()) {
        if (!options.allow_null_fill) return false;
      } else if (cand_res->second.is_collection() || cand_res->second.value.is_null()) {
        return false;
      }
    } else {
      // Untouched slot: must agree exactly.
      if (cand_res == ec->attributes.end() || !(cand_res->second == anon_res->second)) {
        return false;
      }
    }
  }
  return true;
}

CardinalityEstimate estimate_ol_cardinality(const LeakageQuery& query) {
  if (query.universe_size < 1) {
    throw ConfigError("universe size must be at least 1");
  }
  const LeakageSignature& sig = query.signature;
  if (!is_resource_suppression(sig.type, sig.level,
                               sig.target ? &*sig.target : nullptr)) {
    throw UnsupportedError(
        "cardinality analysis is only specified for (sup, event[, resource]); got (" +
        std::string(to_token(sig.type)) + ", " + std::string(to_token(sig.level)) +
        (sig.target ? ", " + *sig.target : "") + ")");
  }

  CardinalityEstimate estimate;
  if (!sig.target) {
    // Without the target the suppressed dimension itself is unknown: the
    // original could differ in events or in any null-bearing attribute.
    estimate.unbounded = true;
    estimate.note =
        "signature (sup, event) carries no target; the suppressed data could be whole "
        "events or any event attribute, so the candidate set is unbounded";
    return estimate;
  }

  std::vector<std::string> slots = null_resource_slots(query.anonymized, sig.condition);
  estimate.slot_count = slots.size();
  estimate.paper_estimate = checked_mul(estimate.slot_count, query.universe_size);
  estimate.exact_count = checked_pow(query.universe_size, estimate.slot_count);
  return estimate;
}

OriginalLogEnumerator::OriginalLogEnumerator(EventLog anonymized,
                                             std::vector<std::string> universe,
                                             std::uint64_t cap)
    : base_(std::move(anonymized)) {
  // The signature implies the resource attribute is part of the log's schema
  // even when every occurrence was suppressed.
  base_.declare_event_attribute(std::string(keys::kResource));
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  universe_ = std::move(universe);

  slots_ = null_resource_slots(base_, std::nullopt);
  odometer_.assign(slots_.size(), 0);

  auto count = checked_pow(universe_.size(), slots_.size());
  if (!count || *count > cap) {
    throw ConfigError("enumeration would yield " +
                      (count ? std::to_string(*count) : std::string("more than 2^64")) +
                      " candidate logs, exceeding the cap of " + std::to_string(cap));
  }
  total_ = *count;
  exhausted_ = (total_ == 0);
}

std::optional<EventLog> OriginalLogEnumerator::next() {
  if (exhausted_) return std::nullopt;

  EventLog candidate = base_;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    candidate.set_event_value(slots_[i], std::string(keys::kResource),
                              AttributeValue::text(universe_[odometer_[i]]));
  }

  // Advance the odometer, least significant digit last: lexicographic order
  // over fill assignments.
  exhausted_ = true;
  for (std::size_t i = slots_.size(); i-- > 0;) {
    if (++odometer_[i] < universe_.size()) {
      exhausted_ = false;
      break;
    }
    odometer_[i] = 0;
  }
  if (slots_.empty()) exhausted_ = true;  // the single candidate is the log itself
  return candidate;
}

}  // namespace anonlog

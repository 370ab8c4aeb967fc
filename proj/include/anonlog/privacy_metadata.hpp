#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anonlog/xes.hpp"

namespace anonlog {

enum class OperationType {
  Suppression,     // sup
  Addition,        // add
  Substitution,    // sub
  Condensation,    // con
  Swapping,        // swa
  Generalization,  // gen
  Cryptography,    // cry
};

enum class OperationLevel { Case, Event };

std::string_view to_token(OperationType type);
std::string_view to_token(OperationLevel level);
std::optional<OperationType> operation_type_from_token(std::string_view token);
std::optional<OperationLevel> operation_level_from_token(std::string_view token);

// (operation type, level, target): the minimum disclosed about one applied
// operation. The target is "case", "event", one of the standard roles
// activity/time/resource, or a declared attribute name.
struct AnonymizerSignature {
  OperationType type = OperationType::Suppression;
  OperationLevel level = OperationLevel::Event;
  std::string target;

  bool operator==(const AnonymizerSignature&) const = default;
  std::string to_display() const;  // "type=sup level=event target=resource"
};

// Optional per-layer attributes. Never filled in automatically: recording
// operation conditions is the caller's deliberate choice.
struct OptionalAttributes {
  std::vector<std::pair<std::string, std::string>> operation_parameters;
  std::vector<std::pair<std::string, std::string>> statistics;
  std::vector<std::string> desired_analyses;

  bool empty() const {
    return operation_parameters.empty() && statistics.empty() && desired_analyses.empty();
  }
};

struct AnonymizationRecord {
  std::size_t layer = 0;  // 1-based position in the anonymizations list
  AnonymizerSignature signature;
  std::vector<std::pair<std::string, std::string>> operation_parameters;
  std::vector<std::pair<std::string, std::string>> statistics;
  std::vector<std::string> desired_analyses;

  bool operator==(const AnonymizationRecord&) const = default;
};

struct AnonymizationsList {
  std::vector<AnonymizationRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

// Extension declaration and payload keys. The whole payload lives in a single
// log-level list attribute; layer order is the list order.
extern const XesExtension kPrivacyExtension;

namespace privacy_keys {
inline constexpr std::string_view kAnonymizations = "privacy:anonymizations";
inline constexpr std::string_view kAnonymizer = "privacy:anonymizer";
inline constexpr std::string_view kOperationType = "privacy:operation_type";
inline constexpr std::string_view kLevel = "privacy:level";
inline constexpr std::string_view kTarget = "privacy:target";
inline constexpr std::string_view kOperationParameters = "privacy:operation_parameters";
inline constexpr std::string_view kStatistics = "privacy:statistics";
inline constexpr std::string_view kDesiredAnalyses = "privacy:desired_analyses";
inline constexpr std::string_view kAnalysis = "analysis";
}  // namespace privacy_keys

// Appends one anonymizer record; declares the privacy extension and creates
// the anonymizations list on first use. Returns the new 1-based layer index.
std::size_t set_anonymizer(XesDocument& doc, const AnonymizerSignature& signature);

// Merges optional attributes into an existing layer; mandatory fields are
// untouched. The layer must be in range.
void set_optional_anonymizer(XesDocument& doc, std::size_t layer,
                             const OptionalAttributes& optionals);

// Empty list when the document carries no privacy metadata.
AnonymizationsList get_anonymizations(const XesDocument& doc);

AnonymizationRecord get_anonymizer(const XesDocument& doc, std::size_t layer);

}  // namespace anonlog

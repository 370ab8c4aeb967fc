#include "anonlog/privacy_metadata.hpp"

namespace anonlog {

namespace {

using namespace privacy_keys;

Attribute* find_anonymizations(XesDocument& doc) {
  auto it = doc.log_attributes.find(kAnonymizations);
  return it == doc.log_attributes.end() ? nullptr : &it->second;
}

const Attribute* find_anonymizations(const XesDocument& doc) {
  auto it = doc.log_attributes.find(kAnonymizations);
  return it == doc.log_attributes.end() ? nullptr : &it->second;
}

std::string layer_prefix(std::size_t layer) {
  return "privacy metadata layer " + std::to_string(layer);
}

std::string mandatory_string(const Attribute& anonymizer, std::size_t layer,
                             std::string_view key) {
  const Attribute* child = anonymizer.find_child(key);
  if (!child || child->is_collection() || child->value.kind() != ValueKind::Text) {
    throw ParseError(layer_prefix(layer) + ": missing mandatory key '" + std::string(key) + "'");
  }
  return child->value.as_text();
}

std::vector<std::pair<std::string, std::string>> read_pairs(const Attribute& anonymizer,
                                                            std::string_view key) {
  std::vector<std::pair<std::string, std::string>> out;
  const Attribute* list = anonymizer.find_child(key);
  if (!list) return out;
  for (const auto& entry : list->children) {
    out.emplace_back(entry.key, entry.attr.value.to_text());
  }
  return out;
}

Attribute& optional_list(Attribute& anonymizer, std::string_view key) {
  for (auto& entry : anonymizer.children) {
    if (entry.key == key) return entry.attr;
  }
  return anonymizer.add_child(std::string(key), Attribute::list());
}

void check_layer_range(std::size_t layer, std::size_t size) {
  if (size == 0) {
    throw ConfigError("layer " + std::to_string(layer) +
                      " is out of range; the document has no anonymization layers");
  }
  if (layer < 1 || layer > size) {
    throw ConfigError("layer " + std::to_string(layer) + " is out of range; valid range is 1.." +
                      std::to_string(size));
  }
}

}  // namespace

const XesExtension kPrivacyExtension{"Privacy", "privacy",
                                     "http://www.xes-standard.org/privacy.xesext"};

std::string_view to_token(OperationType type) {
  switch (type) {
    case OperationType::Suppression: return "sup";
    case OperationType::Addition: return "add";
    case OperationType::Substitution: return "sub";
    case OperationType::Condensation: return "con";
    case OperationType::Swapping: return "swa";
    case OperationType::Generalization: return "gen";
    case OperationType::Cryptography: return "cry";
  }
  return "?";
}

std::string_view to_token(OperationLevel level) {
  return level == OperationLevel::Case ? "case" : "event";
}

std::optional<OperationType> operation_type_from_token(std::string_view token) {
  if (token == "sup") return OperationType::Suppression;
  if (token == "add") return OperationType::Addition;
  if (token == "sub") return OperationType::Substitution;
  if (token == "con") return OperationType::Condensation;
  if (token == "swa") return OperationType::Swapping;
  if (token == "gen") return OperationType::Generalization;
  if (token == "cry") return OperationType::Cryptography;
  return std::nullopt;
}

std::optional<OperationLevel> operation_level_from_token(std::string_view token) {
  if (token == "case") return OperationLevel::Case;
  if (token == "event") return OperationLevel::Event;
  return std::nullopt;
}

std::string AnonymizerSignature::to_display() const {
  return "type=" + std::string(to_token(type)) + " level=" + std::string(to_token(level)) +
         " target=" + target;
}

std::size_t set_anonymizer(XesDocument& doc, const AnonymizerSignature& signature) {
  if (signature.target.empty()) {
    throw ConfigError("anonymizer signature target must not be empty");
  }
  static const std::set<std::string_view> role_tokens{"case", "event", "activity", "time",
                                                      "resource"};
  if (!role_tokens.count(signature.target) &&
      !doc.log.event_attribute_names().count(signature.target) &&
      !doc.log.case_attribute_names().count(signature.target)) {
    throw ConfigError("signature target '" + signature.target +
                      "' is neither a level token nor a declared attribute of the log");
  }

  doc.ensure_extension(kPrivacyExtension);
  Attribute* list = find_anonymizations(doc);
  if (!list) {
    auto [it, inserted] =
        doc.log_attributes.emplace(std::string(kAnonymizations), Attribute::list());
    list = &it->second;
  } else if (list->type != AttrType::List) {
    throw ParseError("log attribute '" + std::string(kAnonymizations) + "' is not a list");
  }

  Attribute record = Attribute::container();
  record.add_child(std::string(kOperationType),
                   Attribute::text(std::string(to_token(signature.type))));
  record.add_child(std::string(kLevel), Attribute::text(std::string(to_token(signature.level))));
  record.add_child(std::string(kTarget), Attribute::text(signature.target));
  list->add_child(std::string(kAnonymizer), std::move(record));
  return list->children.size();
}

void set_optional_anonymizer(XesDocument& doc, std::size_t layer,
                             const OptionalAttributes& optionals) {
  Attribute* list = find_anonymizations(doc);
  check_layer_range(layer, list ? list->children.size() : 0);
  if (optionals.empty()) return;

  Attribute& record = list->children[layer - 1].attr;
  if (!optionals.operation_parameters.empty()) {
    Attribute& params = optional_list(record, kOperationParameters);
    for (const auto& [name, value] : optionals.operation_parameters) {
      params.add_child(name, Attribute::text(value));
    }
  }
  if (!optionals.statistics.empty()) {
    Attribute& stats = optional_list(record, kStatistics);
    for (const auto& [name, value] : optionals.statistics) {
      stats.add_child(name, Attribute::text(value));
    }
  }
  if (!optionals.desired_analyses.empty()) {
    Attribute& analyses = optional_list(record, kDesiredAnalyses);
    for (const auto& label : optionals.desired_analyses) {
      analyses.add_child(std::string(kAnalysis), Attribute::text(label));
    }
  }
}

AnonymizationsList get_anonymizations(const XesDocument& doc) {
  AnonymizationsList result;
  const Attribute* list = find_anonymizations(doc);
  if (!list) return result;
  if (list->type != AttrType::List) {
    throw ParseError("log attribute '" + std::string(kAnonymizations) + "' is not a list");
  }

  std::size_t layer = 0;
  for (const auto& entry : list->children) {
    ++layer;
    if (entry.key != kAnonymizer || entry.attr.type != AttrType::Container) {
      throw ParseError(layer_prefix(layer) + ": expected a '" + std::string(kAnonymizer) +
                       "' container");
    }
    AnonymizationRecord record;
    record.layer = layer;

    std::string type_token = mandatory_string(entry.attr, layer, kOperationType);
    auto type = operation_type_from_token(type_token);
    if (!type) {
      throw ParseError(layer_prefix(layer) + ": unknown operation type '" + type_token + "'");
    }
    std::string level_token = mandatory_string(entry.attr, layer, kLevel);
    auto level = operation_level_from_token(level_token);
    if (!level) {
      throw ParseError(layer_prefix(layer) + ": unknown level '" + level_token + "'");
    }
    record.signature.type = *type;
    record.signature.level = *level;
    record.signature.target = mandatory_string(entry.attr, layer, kTarget);

    record.operation_parameters = read_pairs(entry.attr, kOperationParameters);
    record.statistics = read_pairs(entry.attr, kStatistics);
    for (auto& [name, value] : read_pairs(entry.attr, kDesiredAnalyses)) {
      record.desired_analyses.push_back(std::move(value));
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

AnonymizationRecord get_anonymizer(const XesDocument& doc, std::size_t layer) {
  AnonymizationsList list = get_anonymizations(doc);
  check_layer_range(layer, list.size());
  return list.records[layer - 1];
}

}  // namespace anonlog

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "anonlog/event_log.hpp"

namespace anonlog {

struct XesExtension {
  std::string name;
  std::string prefix;
  std::string uri;

  bool operator==(const XesExtension&) const = default;
};

struct XesClassifier {
  std::string name;
  std::string scope;  // empty = event (the XES default)
  std::vector<std::string> keys;

  bool operator==(const XesClassifier&) const = default;
};

struct XesGlobals {
  AttributeMap trace_scope;
  AttributeMap event_scope;

  bool operator==(const XesGlobals&) const = default;
};

// In-memory form of one XES file. Event identifiers are synthesized in
// document order when parsing ("e1", "e2", ...); case identifiers come from
// the trace's concept:name, which is lifted out of the case attribute map.
struct XesDocument {
  std::string xes_version;
  std::string xes_features;
  std::vector<XesExtension> extensions;
  XesGlobals globals;
  std::vector<XesClassifier> classifiers;
  AttributeMap log_attributes;
  EventLog log;

  // Parser diagnostics (dirty input that was accepted); not part of equality.
  std::vector<std::string> warnings;

  const XesExtension* find_extension(std::string_view prefix) const;

  // Declares an extension if the prefix is not present yet.
  void ensure_extension(const XesExtension& ext);

  static XesDocument with_standard_declarations();
};

// Extension declarations written by with_standard_declarations().
extern const XesExtension kConceptExtension;
extern const XesExtension kTimeExtension;
extern const XesExtension kOrganizationalExtension;

XesDocument parse_xes(std::string_view bytes);

// Reads the file (transparently gunzipping when it starts with the gzip magic).
XesDocument parse_xes_file(const std::filesystem::path& path);

// Deterministic: the same document always yields byte-identical output.
// Refuses documents whose log fails validate().
std::string serialize_xes(const XesDocument& doc);

void write_xes_file(const XesDocument& doc, const std::filesystem::path& path);

// Document equality up to event-id renaming (see structurally_equal on logs).
bool structurally_equal(const XesDocument& a, const XesDocument& b);

// Small file helpers shared by the XES and ELA front ends.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace anonlog

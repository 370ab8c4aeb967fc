#include <expat.h>
#include <zlib.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "anonlog/xes.hpp"

namespace anonlog {

namespace {

struct RawAttr {
  AttrType type = AttrType::String;
  std::string key;
  std::string value;
  std::vector<RawAttr> children;
  std::size_t line = 0;
  std::size_t col = 0;
};

struct RawEvent {
  std::vector<RawAttr> attrs;
};

struct RawTrace {
  std::vector<RawAttr> attrs;
  std::vector<RawEvent> events;
};

bool attr_type_from_name(std::string_view name, AttrType& out) {
  if (name == "string") out = AttrType::String;
  else if (name == "int") out = AttrType::Int;
  else if (name == "float") out = AttrType::Float;
  else if (name == "date") out = AttrType::Date;
  else if (name == "boolean") out = AttrType::Boolean;
  else if (name == "id") out = AttrType::Id;
  else if (name == "list") out = AttrType::List;
  else if (name == "container") out = AttrType::Container;
  else return false;
  return true;
}

struct Builder {
  XML_Parser parser = nullptr;

  std::string error;
  std::size_t error_line = 0;
  std::size_t error_col = 0;

  enum class Ctx { Log, Trace, Event, Global, Values, Leaf };
  std::vector<Ctx> ctx;
  std::vector<RawAttr> attr_stack;
  std::vector<std::size_t> values_depths;

  bool saw_log = false;
  std::string xes_version;
  std::string xes_features;
  std::vector<XesExtension> extensions;
  std::vector<XesClassifier> classifiers;
  std::vector<RawAttr> globals_trace;
  std::vector<RawAttr> globals_event;
  std::vector<RawAttr>* global_target = nullptr;
  std::vector<RawAttr> log_attrs;
  std::vector<RawTrace> traces;
  std::vector<std::string> warnings;

  void fail(std::string message) {
    if (!error.empty()) return;
    error = std::move(message);
    error_line = XML_GetCurrentLineNumber(parser);
    error_col = XML_GetCurrentColumnNumber(parser) + 1;
    XML_StopParser(parser, XML_FALSE);
  }
};

const char* find_xml_att(const char** atts, std::string_view name) {
  for (std::size_t i = 0; atts[i]; i += 2) {
    if (name == atts[i]) return atts[i + 1];
  }
  return nullptr;
}

// Classifier keys are space separated; keys containing spaces are quoted
// with single quotes.
std::vector<std::string> split_classifier_keys(std::string_view spec) {
  std::vector<std::string> keys;
  std::size_t i = 0;
  while (i < spec.size()) {
    if (spec[i] == ' ') {
      ++i;
      continue;
    }
    if (spec[i] == '\'') {
      std::size_t close = spec.find('\'', i + 1);
      if (close == std::string_view::npos) {
        keys.emplace_back(spec.substr(i + 1));
        break;
      }
      keys.emplace_back(spec.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      std::size_t end = spec.find(' ', i);
      if (end == std::string_view::npos) end = spec.size();
      keys.emplace_back(spec.substr(i, end - i));
      i = end;
    }
  }
  return keys;
}

void XMLCALL on_start_element(void* user, const char* raw_name, const char** atts) {
  auto& b = *static_cast<Builder*>(user);
  if (!b.error.empty()) return;
  std::string_view name(raw_name);

  if (b.ctx.empty()) {
    if (name != "log") {
      b.fail("root element must be <log>, found <" + std::string(name) + ">");
      return;
    }
    b.saw_log = true;
    if (const char* v = find_xml_att(atts, "xes.version")) b.xes_version = v;
    if (const char* v = find_xml_att(atts, "xes.features")) b.xes_features = v;
    b.ctx.push_back(Builder::Ctx::Log);
    return;
  }

  AttrType attr_type;
  if (attr_type_from_name(name, attr_type)) {
    if (b.ctx.back() == Builder::Ctx::Leaf) {
      b.fail("<" + std::string(name) + "> is not allowed inside <extension>/<classifier>");
      return;
    }
    RawAttr attr;
    attr.type = attr_type;
    attr.line = XML_GetCurrentLineNumber(b.parser);
    attr.col = XML_GetCurrentColumnNumber(b.parser) + 1;
    const char* key = find_xml_att(atts, "key");
    if (!key) {
      b.fail("<" + std::string(name) + "> element is missing its key");
      return;
    }
    attr.key = key;
    const char* value = find_xml_att(atts, "value");
    if (attr_type == AttrType::List || attr_type == AttrType::Container) {
      if (value) {
        b.fail("<" + std::string(name) + " key=\"" + attr.key + "\"> must not carry a value");
        return;
      }
    } else if (!value) {
      b.fail("<" + std::string(name) + " key=\"" + attr.key + "\"> is missing its value");
      return;
    } else {
      attr.value = value;
    }
    b.attr_stack.push_back(std::move(attr));
    return;
  }

  if (name == "values") {
    if (b.attr_stack.empty() || !(b.attr_stack.back().type == AttrType::List ||
                                  b.attr_stack.back().type == AttrType::Container)) {
      b.fail("<values> is only allowed inside a list or container attribute");
      return;
    }
    if (!b.values_depths.empty() && b.values_depths.back() == b.attr_stack.size()) {
      b.fail("nested <values> wrapper");
      return;
    }
    b.values_depths.push_back(b.attr_stack.size());
    b.ctx.push_back(Builder::Ctx::Values);
    return;
  }

  if (!b.attr_stack.empty()) {
    b.fail("unexpected <" + std::string(name) + "> inside an attribute element");
    return;
  }

  switch (b.ctx.back()) {
    case Builder::Ctx::Log:
      if (name == "extension") {
        const char* ext_name = find_xml_att(atts, "name");
        const char* prefix = find_xml_att(atts, "prefix");
        const char* uri = find_xml_att(atts, "uri");
        if (!ext_name || !prefix || !uri) {
          b.fail("<extension> requires name, prefix and uri");
          return;
        }
        for (const auto& e : b.extensions) {
          if (e.prefix == prefix) {
            b.fail("duplicate extension prefix '" + std::string(prefix) + "'");
            return;
          }
        }
        b.extensions.push_back(XesExtension{ext_name, prefix, uri});
        b.ctx.push_back(Builder::Ctx::Leaf);
        return;
      }
      if (name == "global") {
        const char* scope = find_xml_att(atts, "scope");
        std::string_view sc = scope ? scope : "event";
        if (sc == "trace") b.global_target = &b.globals_trace;
        else if (sc == "event") b.global_target = &b.globals_event;
        else {
          b.fail("unknown <global> scope '" + std::string(sc) + "'");
          return;
        }
        b.ctx.push_back(Builder::Ctx::Global);
        return;
      }
      if (name == "classifier") {
        const char* cls_name = find_xml_att(atts, "name");
        const char* keys = find_xml_att(atts, "keys");
        if (!cls_name || !keys) {
          b.fail("<classifier> requires name and keys");
          return;
        }
        const char* scope = find_xml_att(atts, "scope");
        b.classifiers.push_back(
            XesClassifier{cls_name, scope ? scope : "", split_classifier_keys(keys)});
        b.ctx.push_back(Builder::Ctx::Leaf);
        return;
      }
      if (name == "trace") {
        b.traces.emplace_back();
        b.ctx.push_back(Builder::Ctx::Trace);
        return;
      }
      break;
    case Builder::Ctx::Trace:
      if (name == "event") {
        b.traces.back().events.emplace_back();
        b.ctx.push_back(Builder::Ctx::Event);
        return;
      }
      break;
    default:
      break;
  }
  b.fail("unexpected element <" + std::string(name) + ">");
}

void XMLCALL on_end_element(void* user, const char* raw_name) {
  auto& b = *static_cast<Builder*>(user);
  if (!b.error.empty()) return;
  std::string_view name(raw_name);

  AttrType attr_type;
  if (attr_type_from_name(name, attr_type)) {
    RawAttr done = std::move(b.attr_stack.back());
    b.attr_stack.pop_back();
    if (!b.attr_stack.empty()) {
      b.attr_stack.back().children.push_back(std::move(done));
      return;
    }
    switch (b.ctx.back()) {
      case Builder::Ctx::Log: b.log_attrs.push_back(std::move(done)); break;
      case Builder::Ctx::Trace: b.traces.back().attrs.push_back(std::move(done)); break;
      case Builder::Ctx::Event: b.traces.back().events.back().attrs.push_back(std::move(done)); break;
      case Builder::Ctx::Global: b.global_target->push_back(std::move(done)); break;
      default: b.fail("internal: attribute closed in unexpected context"); break;
    }
    return;
  }

  if (name == "values") {
    b.values_depths.pop_back();
    b.ctx.pop_back();
    return;
  }
  if (name == "global") b.global_target = nullptr;
  b.ctx.pop_back();
}

void XMLCALL on_character_data(void* user, const char* data, int len) {
  auto& b = *static_cast<Builder*>(user);
  if (!b.error.empty()) return;
  for (int i = 0; i < len; ++i) {
    char c = data[i];
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      b.fail("unexpected text content in XES document");
      return;
    }
  }
}

Attribute convert_attr(const RawAttr& raw);

void convert_children(const RawAttr& raw, Attribute& out) {
  for (const auto& child : raw.children) {
    out.add_child(child.key, convert_attr(child));
  }
}

Attribute convert_attr(const RawAttr& raw) {
  auto bad_value = [&](std::string_view what) -> ParseError {
    return ParseError("attribute '" + raw.key + "': invalid " + std::string(what) + " value '" +
                          raw.value + "'",
                      raw.line, raw.col);
  };

  Attribute out;
  switch (raw.type) {
    case AttrType::String:
      out = Attribute::text(raw.value);
      break;
    case AttrType::Id:
      out = Attribute::id(raw.value);
      break;
    case AttrType::Int: {
      std::int64_t v = 0;
      auto res = std::from_chars(raw.value.data(), raw.value.data() + raw.value.size(), v);
      if (res.ec != std::errc() || res.ptr != raw.value.data() + raw.value.size()) {
        throw bad_value("int");
      }
      out = Attribute::integer(v);
      break;
    }
    case AttrType::Float: {
      double v = 0;
      auto res = std::from_chars(raw.value.data(), raw.value.data() + raw.value.size(), v);
      if (res.ec != std::errc() || res.ptr != raw.value.data() + raw.value.size() ||
          !std::isfinite(v)) {
        throw bad_value("float");
      }
      out = Attribute::real(v);
      break;
    }
    case AttrType::Date:
      try {
        out = Attribute::date(parse_timestamp(raw.value));
      } catch (const ParseError&) {
        throw bad_value("date");
      }
      break;
    case AttrType::Boolean:
      if (raw.value == "true") out = Attribute::boolean(true);
      else if (raw.value == "false") out = Attribute::boolean(false);
      else throw bad_value("boolean");
      break;
    case AttrType::List:
      out = Attribute::list();
      break;
    case AttrType::Container:
      out = Attribute::container();
      break;
  }
  convert_children(raw, out);
  return out;
}

AttributeMap convert_attr_map(const std::vector<RawAttr>& raws, std::string_view owner,
                              std::vector<std::string>& warnings) {
  AttributeMap map;
  for (const auto& raw : raws) {
    Attribute converted = convert_attr(raw);
    auto [it, inserted] = map.insert_or_assign(raw.key, std::move(converted));
    if (!inserted) {
      warnings.push_back("duplicate attribute key '" + raw.key + "' on " + std::string(owner) +
                         "; last occurrence wins");
    }
  }
  return map;
}

std::string gunzip(std::string_view bytes) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) {
    throw IoError("failed to initialize gzip decoder");
  }
  std::string out;
  char buf[1 << 16];
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw IoError("corrupt gzip stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (rc != Z_STREAM_END && zs.avail_in > 0);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw IoError("truncated gzip stream");
  return out;
}

}  // namespace

const XesExtension* XesDocument::find_extension(std::string_view prefix) const {
  for (const auto& e : extensions) {
    if (e.prefix == prefix) return &e;
  }
  return nullptr;
}

void XesDocument::ensure_extension(const XesExtension& ext) {
  if (!find_extension(ext.prefix)) extensions.push_back(ext);
}

const XesExtension kConceptExtension{"Concept", "concept",
                                     "http://www.xes-standard.org/concept.xesext"};
const XesExtension kTimeExtension{"Time", "time", "http://www.xes-standard.org/time.xesext"};
const XesExtension kOrganizationalExtension{"Organizational", "org",
                                            "http://www.xes-standard.org/org.xesext"};

XesDocument XesDocument::with_standard_declarations() {
  XesDocument doc;
  doc.xes_version = "1849-2016";
  doc.xes_features = "nested-attributes";
  doc.extensions = {kConceptExtension, kTimeExtension, kOrganizationalExtension};
  return doc;
}

XesDocument parse_xes(std::string_view bytes) {
  // Strip a UTF-8 BOM if present.
  if (bytes.size() >= 3 && std::memcmp(bytes.data(), "\xef\xbb\xbf", 3) == 0) {
    bytes.remove_prefix(3);
  }

  XML_Parser parser = XML_ParserCreate(nullptr);
  if (!parser) throw IoError("failed to create XML parser");

  Builder b;
  b.parser = parser;
  XML_SetUserData(parser, &b);
  XML_SetElementHandler(parser, on_start_element, on_end_element);
  XML_SetCharacterDataHandler(parser, on_character_data);

  XML_Status status =
      XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), /*isFinal=*/XML_TRUE);
  if (!b.error.empty()) {
    std::string message = b.error;
    std::size_t line = b.error_line, col = b.error_col;
    XML_ParserFree(parser);
    throw ParseError(message + " (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")",
                     line, col);
  }
  if (status != XML_STATUS_OK) {
    std::size_t line = XML_GetCurrentLineNumber(parser);
    std::size_t col = XML_GetCurrentColumnNumber(parser) + 1;
    std::string detail = XML_ErrorString(XML_GetErrorCode(parser));
    XML_ParserFree(parser);
    throw ParseError("malformed XML: " + detail + " (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")",
                     line, col);
  }
  XML_ParserFree(parser);

  XesDocument doc;
  doc.xes_version = std::move(b.xes_version);
  doc.xes_features = std::move(b.xes_features);
  doc.extensions = std::move(b.extensions);
  doc.classifiers = std::move(b.classifiers);
  doc.warnings = std::move(b.warnings);
  doc.globals.trace_scope = convert_attr_map(b.globals_trace, "trace globals", doc.warnings);
  doc.globals.event_scope = convert_attr_map(b.globals_event, "event globals", doc.warnings);
  doc.log_attributes = convert_attr_map(b.log_attrs, "log", doc.warnings);

  // Case ids come from each trace's concept:name; unnamed traces get a
  // synthesized id that avoids the used names.
  std::unordered_set<std::string> used_case_ids;
  std::vector<std::optional<std::string>> trace_names(b.traces.size());
  for (std::size_t i = 0; i < b.traces.size(); ++i) {
    for (const auto& attr : b.traces[i].attrs) {
      if (attr.key == keys::kActivity && attr.type != AttrType::List &&
          attr.type != AttrType::Container) {
        trace_names[i] = attr.value;
        used_case_ids.insert(attr.value);
        break;
      }
    }
  }
  std::size_t synth_counter = 1;
  auto synthesize_case_id = [&]() {
    std::string candidate;
    do {
      candidate = "c" + std::to_string(synth_counter++);
    } while (used_case_ids.count(candidate));
    used_case_ids.insert(candidate);
    return candidate;
  };

  std::size_t event_counter = 1;
  for (std::size_t i = 0; i < b.traces.size(); ++i) {
    const RawTrace& raw_trace = b.traces[i];
    bool named = trace_names[i].has_value();
    std::string case_id = named ? *trace_names[i] : synthesize_case_id();

    if (doc.log.find_case(case_id)) {
      // Duplicate trace name: keep the data under a fresh id, including the
      // clashing concept:name as an ordinary case attribute.
      doc.warnings.push_back("duplicate trace name '" + case_id + "'");
      case_id = synthesize_case_id();
      named = false;
    }

    Case& c = doc.log.add_case(case_id);
    AttributeMap case_attrs =
        convert_attr_map(raw_trace.attrs, "trace '" + case_id + "'", doc.warnings);
    if (named) case_attrs.erase(std::string(keys::kActivity));
    for (auto& [key, attr] : case_attrs) {
      doc.log.declare_case_attribute(key);
    }
    c.attributes = std::move(case_attrs);

    for (const auto& raw_event : raw_trace.events) {
      std::string event_id = "e" + std::to_string(event_counter++);
      Event& e = doc.log.add_event(event_id);
      e.attributes = convert_attr_map(raw_event.attrs, "event " + event_id, doc.warnings);
      for (const auto& [key, attr] : e.attributes) {
        doc.log.declare_event_attribute(key);
      }
      c.trace.push_back(event_id);
    }
  }

  for (const auto& [key, attr] : doc.globals.event_scope) {
    doc.log.declare_event_attribute(key);
  }
  for (const auto& [key, attr] : doc.globals.trace_scope) {
    if (key != keys::kActivity) doc.log.declare_case_attribute(key);
  }

  // Dirty logs (out-of-order timestamps and the like) parse with warnings;
  // operations that need a valid log refuse later.
  ValidationReport report = validate(doc.log);
  for (const auto& v : report.violations) {
    doc.warnings.push_back("validation: " + v.message);
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed to read '" + path.string() + "'");
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed to write '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("failed to move output into place at '" + path.string() + "'");
  }
}

XesDocument parse_xes_file(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
      static_cast<unsigned char>(bytes[1]) == 0x8b) {
    bytes = gunzip(bytes);
  }
  try {
    return parse_xes(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

}  // namespace anonlog

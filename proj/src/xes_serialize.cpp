#include <charconv>

#include "anonlog/xes.hpp"

namespace anonlog {

namespace {

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

void append_indent(std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

std::string scalar_to_xml(const Attribute& attr) {
  switch (attr.type) {
    case AttrType::String:
    case AttrType::Id:
      return attr.value.as_text();
    case AttrType::Int:
      return std::to_string(attr.value.as_integer());
    case AttrType::Float: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), attr.value.as_real());
      return std::string(buf, res.ptr);
    }
    case AttrType::Date:
      return format_timestamp(attr.value.as_timestamp());
    case AttrType::Boolean:
      return attr.value.as_boolean() ? "true" : "false";
    case AttrType::List:
    case AttrType::Container:
      break;
  }
  return {};
}

void write_attribute(std::string& out, int depth, const std::string& key, const Attribute& attr) {
  append_indent(out, depth);
  out += '<';
  out += to_string(attr.type);
  out += " key=\"";
  append_escaped(out, key);
  out += '"';
  if (!attr.is_collection()) {
    out += " value=\"";
    append_escaped(out, scalar_to_xml(attr));
    out += '"';
  }
  if (attr.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& child : attr.children) {
    write_attribute(out, depth + 1, child.key, child.attr);
  }
  append_indent(out, depth);
  out += "</";
  out += to_string(attr.type);
  out += ">\n";
}

void write_attr_map(std::string& out, int depth, const AttributeMap& map) {
  for (const auto& [key, attr] : map) {
    write_attribute(out, depth, key, attr);
  }
}

std::string classifier_keys_to_string(const std::vector<std::string>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ' ';
    if (keys[i].find(' ') != std::string::npos) {
      out += '\'';
      out += keys[i];
      out += '\'';
    } else {
      out += keys[i];
    }
  }
  return out;
}

}  // namespace

std::string serialize_xes(const XesDocument& doc) {
  ValidationReport report = validate(doc.log);
  if (!report.ok()) {
    throw ValidationError("refusing to serialize an invalid event log:\n" + report.to_text());
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<log";
  if (!doc.xes_version.empty()) {
    out += " xes.version=\"";
    append_escaped(out, doc.xes_version);
    out += '"';
  }
  if (!doc.xes_features.empty()) {
    out += " xes.features=\"";
    append_escaped(out, doc.xes_features);
    out += '"';
  }
  out += ">\n";

  for (const auto& ext : doc.extensions) {
    append_indent(out, 1);
    out += "<extension name=\"";
    append_escaped(out, ext.name);
    out += "\" prefix=\"";
    append_escaped(out, ext.prefix);
    out += "\" uri=\"";
    append_escaped(out, ext.uri);
    out += "\"/>\n";
  }

  if (!doc.globals.trace_scope.empty()) {
    append_indent(out, 1);
    out += "<global scope=\"trace\">\n";
    write_attr_map(out, 2, doc.globals.trace_scope);
    append_indent(out, 1);
    out += "</global>\n";
  }
  if (!doc.globals.event_scope.empty()) {
    append_indent(out, 1);
    out += "<global scope=\"event\">\n";
    write_attr_map(out, 2, doc.globals.event_scope);
    append_indent(out, 1);
    out += "</global>\n";
  }

  for (const auto& cls : doc.classifiers) {
    append_indent(out, 1);
    out += "<classifier name=\"";
    append_escaped(out, cls.name);
    out += '"';
    if (!cls.scope.empty()) {
      out += " scope=\"";
      append_escaped(out, cls.scope);
      out += '"';
    }
    out += " keys=\"";
    append_escaped(out, classifier_keys_to_string(cls.keys));
    out += "\"/>\n";
  }

  write_attr_map(out, 1, doc.log_attributes);

  for (const auto& c : doc.log.cases()) {
    append_indent(out, 1);
    out += "<trace>\n";
    // The case id is the trace's concept:name and always leads.
    append_indent(out, 2);
    out += "<string key=\"concept:name\" value=\"";
    append_escaped(out, c.id);
    out += "\"/>\n";
    write_attr_map(out, 2, c.attributes);
    for (const auto& event_id : c.trace) {
      const Event* e = doc.log.find_event(event_id);
      append_indent(out, 2);
      if (e->attributes.empty()) {
        out += "<event/>\n";
        continue;
      }
      out += "<event>\n";
      write_attr_map(out, 3, e->attributes);
      append_indent(out, 2);
      out += "</event>\n";
    }
    append_indent(out, 1);
    out += "</trace>\n";
  }

  out += "</log>\n";
  return out;
}

void write_xes_file(const XesDocument& doc, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_xes(doc));
}

bool structurally_equal(const XesDocument& a, const XesDocument& b) {
  return a.xes_version == b.xes_version && a.xes_features == b.xes_features &&
         a.extensions == b.extensions && a.globals == b.globals &&
         a.classifiers == b.classifiers && a.log_attributes == b.log_attributes &&
         structurally_equal(a.log, b.log);
}

}  // namespace anonlog

#include <expat.h>

#include <algorithm>
#include <map>

#include "anonlog/ela.hpp"
#include "anonlog/xes.hpp"

namespace anonlog {

namespace {

void append_escaped_text(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

void check_invariants(const ElaDocument& doc) {
  if (doc.origin.empty()) throw ConfigError("ELA origin must not be empty");
  if (doc.method.empty()) throw ConfigError("ELA method must not be empty");
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    if (doc.rows[i].size() != doc.columns.size()) {
      throw ConfigError("ELA row " + std::to_string(i + 1) + " has " +
                        std::to_string(doc.rows[i].size()) + " cells, expected " +
                        std::to_string(doc.columns.size()));
    }
  }
}

// Element paths of the ELA grammar; anything else is a parse error.
struct ElaBuilder {
  XML_Parser parser = nullptr;
  std::string error;
  std::size_t error_line = 0, error_col = 0;

  std::vector<std::string> path;
  std::string text;
  ElaDocument doc;
  bool seen_header = false, seen_data = false;

  void fail(std::string message) {
    if (!error.empty()) return;
    error = std::move(message);
    error_line = XML_GetCurrentLineNumber(parser);
    error_col = XML_GetCurrentColumnNumber(parser) + 1;
    XML_StopParser(parser, XML_FALSE);
  }

  std::string joined_path() const {
    std::string out;
    for (const auto& p : path) {
      out += '/';
      out += p;
    }
    return out;
  }
};

bool path_is(const ElaBuilder& b, std::initializer_list<const char*> expected) {
  if (b.path.size() != expected.size()) return false;
  std::size_t i = 0;
  for (const char* name : expected) {
    if (b.path[i++] != name) return false;
  }
  return true;
}

void XMLCALL ela_start(void* user, const char* raw_name, const char** atts) {
  auto& b = *static_cast<ElaBuilder*>(user);
  if (!b.error.empty()) return;
  (void)atts;
  std::string name(raw_name);
  b.path.push_back(name);
  b.text.clear();

  if (path_is(b, {"ela"}) || path_is(b, {"ela", "header"}) || path_is(b, {"ela", "data"}) ||
      path_is(b, {"ela", "header", "origin"}) || path_is(b, {"ela", "header", "method"}) ||
      path_is(b, {"ela", "header", "desired_analyses"}) ||
      path_is(b, {"ela", "header", "desired_analyses", "analysis"}) ||
      path_is(b, {"ela", "data", "columns"}) ||
      path_is(b, {"ela", "data", "columns", "column"}) || path_is(b, {"ela", "data", "row"}) ||
      path_is(b, {"ela", "data", "row", "cell"})) {
    if (path_is(b, {"ela", "header"})) b.seen_header = true;
    if (path_is(b, {"ela", "data"})) b.seen_data = true;
    if (path_is(b, {"ela", "data", "row"})) b.doc.rows.emplace_back();
    return;
  }
  b.fail("unexpected element at " + b.joined_path());
}

void XMLCALL ela_end(void* user, const char* raw_name) {
  auto& b = *static_cast<ElaBuilder*>(user);
  if (!b.error.empty()) return;
  (void)raw_name;

  if (path_is(b, {"ela", "header", "origin"})) b.doc.origin = b.text;
  else if (path_is(b, {"ela", "header", "method"})) b.doc.method = b.text;
  else if (path_is(b, {"ela", "header", "desired_analyses", "analysis"}))
    b.doc.desired_analyses.push_back(b.text);
  else if (path_is(b, {"ela", "data", "columns", "column"})) b.doc.columns.push_back(b.text);
  else if (path_is(b, {"ela", "data", "row", "cell"})) b.doc.rows.back().push_back(b.text);

  b.text.clear();
  b.path.pop_back();
}

void XMLCALL ela_text(void* user, const char* data, int len) {
  auto& b = *static_cast<ElaBuilder*>(user);
  if (!b.error.empty()) return;
  b.text.append(data, static_cast<std::size_t>(len));
}

}  // namespace

std::string write_ela(const ElaDocument& doc) {
  check_invariants(doc);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<ela>\n";
  out += "  <header>\n";
  out += "    <origin>";
  append_escaped_text(out, doc.origin);
  out += "</origin>\n";
  out += "    <method>";
  append_escaped_text(out, doc.method);
  out += "</method>\n";
  if (doc.desired_analyses.empty()) {
    out += "    <desired_analyses/>\n";
  } else {
    out += "    <desired_analyses>\n";
    for (const auto& analysis : doc.desired_analyses) {
      out += "      <analysis>";
      append_escaped_text(out, analysis);
      out += "</analysis>\n";
    }
    out += "    </desired_analyses>\n";
  }
  out += "  </header>\n";
  if (doc.columns.empty() && doc.rows.empty()) {
    out += "  <data/>\n";
  } else {
    out += "  <data>\n";
    out += "    <columns>\n";
    for (const auto& column : doc.columns) {
      out += "      <column>";
      append_escaped_text(out, column);
      out += "</column>\n";
    }
    out += "    </columns>\n";
    for (const auto& row : doc.rows) {
      out += "    <row>\n";
      for (const auto& cell : row) {
        out += "      <cell>";
        append_escaped_text(out, cell);
        out += "</cell>\n";
      }
      out += "    </row>\n";
    }
    out += "  </data>\n";
  }
  out += "</ela>\n";
  return out;
}

ElaDocument read_ela(std::string_view bytes) {
  XML_Parser parser = XML_ParserCreate(nullptr);
  if (!parser) throw IoError("failed to create XML parser");

  ElaBuilder b;
  b.parser = parser;
  XML_SetUserData(parser, &b);
  XML_SetElementHandler(parser, ela_start, ela_end);
  XML_SetCharacterDataHandler(parser, ela_text);

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
    throw ParseError("malformed XML: " + detail + " (line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ")",
                     line, col);
  }
  XML_ParserFree(parser);

  if (!b.seen_header || !b.seen_data) {
    throw ParseError("ELA document requires <header> and <data> parts");
  }
  check_invariants(b.doc);
  return b.doc;
}

ElaDocument read_ela_file(const std::filesystem::path& path) {
  try {
    return read_ela(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

void write_ela_file(const ElaDocument& doc, const std::filesystem::path& path) {
  write_file_atomic(path, write_ela(doc));
}

ElaDocument dfg_abstraction(const EventLog& log, const std::string& origin) {
  require_valid(log);

  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  for (const auto& c : log.cases()) {
    for (std::size_t i = 1; i < c.trace.size(); ++i) {
      const Event* predecessor = log.find_event(c.trace[i - 1]);
      const Event* successor = log.find_event(c.trace[i]);
      // Events without an activity participate with the empty label so the
      // adjacency total stays exact.
      std::string from = log.activity_of(*predecessor).value_or("");
      std::string to = log.activity_of(*successor).value_or("");
      counts[{std::move(from), std::move(to)}]++;
    }
  }

  ElaDocument doc;
  doc.origin = origin;
  doc.method = "dfg_abstraction";
  doc.desired_analyses = {"process discovery"};
  doc.columns = {"antecedent", "consequent", "frequency"};
  for (const auto& [pair, count] : counts) {
    doc.rows.push_back({pair.first, pair.second, std::to_string(count)});
  }
  return doc;
}

}  // namespace anonlog

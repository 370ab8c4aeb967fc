#include "anonlog/pipeline_config.hpp"

#include <charconv>

#include "anonlog/xes.hpp"

namespace anonlog {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

ConfigError at_line(std::size_t line, const std::string& message) {
  return ConfigError("pipeline config line " + std::to_string(line) + ": " + message);
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view text) {
  PipelineConfig config;
  bool in_step = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;

    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw at_line(line_no, "unterminated section header");
      std::string_view inner = trim(line.substr(1, line.size() - 2));
      if (inner.substr(0, 4) != "step") {
        throw at_line(line_no, "unknown section '" + std::string(inner) + "'");
      }
      std::string_view number = trim(inner.substr(4));
      std::size_t value = 0;
      auto res = std::from_chars(number.data(), number.data() + number.size(), value);
      if (res.ec != std::errc() || res.ptr != number.data() + number.size()) {
        throw at_line(line_no, "step sections must be numbered: '[step N]'");
      }
      if (value != config.steps.size() + 1) {
        throw at_line(line_no, "expected [step " + std::to_string(config.steps.size() + 1) +
                                   "], found [step " + std::to_string(value) + "]");
      }
      config.steps.emplace_back();
      in_step = true;
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw at_line(line_no, "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw at_line(line_no, "empty key");

    if (!in_step) {
      if (key == "seed") {
        std::uint64_t seed = 0;
        auto res = std::from_chars(value.data(), value.data() + value.size(), seed);
        if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
          throw at_line(line_no, "seed must be an unsigned integer, got '" + value + "'");
        }
        config.seed = seed;
        config.seed_set = true;
        continue;
      }
      throw at_line(line_no, "unknown top-level key '" + key + "' (only 'seed' is allowed)");
    }

    AnonymizerStep& step = config.steps.back();
    if (key == "op") {
      if (!step.op.empty()) throw at_line(line_no, "duplicate 'op' in step");
      step.op = value;
      continue;
    }
    if (step.params.count(key)) {
      throw at_line(line_no, "duplicate parameter '" + key + "' in step");
    }
    step.params.emplace(std::move(key), std::move(value));
  }

  // Per-step schema validation, reported with the 1-based step index.
  for (std::size_t i = 0; i < config.steps.size(); ++i) {
    try {
      if (config.steps[i].op.empty()) {
        throw ConfigError("missing 'op'");
      }
      validate_step(config.steps[i]);
    } catch (const UnsupportedError& e) {
      throw UnsupportedError("step " + std::to_string(i + 1) + ": " + e.what());
    } catch (const Error& e) {
      throw ConfigError("step " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return config;
}

PipelineConfig parse_pipeline_config_file(const std::filesystem::path& path) {
  try {
    return parse_pipeline_config(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(path.string() + ": " + e.what());
  }
}

}  // namespace anonlog

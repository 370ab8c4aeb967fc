#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "anonlog/anonymize.hpp"

namespace anonlog {

// Declarative pipeline description parsed from the line-oriented config
// format:
//
//   # comment
//   seed = 42
//
//   [step 1]
//   op = substitute_activities
//   sensitive = f
//   substitutes = g,k
//
// Steps must be numbered 1..n in order; `seed` is optional and defaults to 0.
struct PipelineConfig {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<AnonymizerStep> steps;
};

PipelineConfig parse_pipeline_config(std::string_view text);
PipelineConfig parse_pipeline_config_file(const std::filesystem::path& path);

}  // namespace anonlog

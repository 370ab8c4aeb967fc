#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "anonlog/anonymize.hpp"
#include "anonlog/ela.hpp"
#include "anonlog/leakage.hpp"
#include "anonlog/pipeline_config.hpp"
#include "anonlog/privacy_metadata.hpp"
#include "anonlog/xes.hpp"

namespace {

// 0 success, 1 I/O or parse, 2 config/usage, 3 unsupported feature.
int exit_code_for(anonlog::ErrorKind kind) {
  switch (kind) {
    case anonlog::ErrorKind::Io:
    case anonlog::ErrorKind::Parse:
    case anonlog::ErrorKind::Validation:
      return 1;
    case anonlog::ErrorKind::Config:
      return 2;
    case anonlog::ErrorKind::Unsupported:
      return 3;
  }
  return 1;
}

void print_warnings(const anonlog::XesDocument& doc) {
  for (const auto& w : doc.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

struct AnonymizeArgs {
  std::string input, pipeline, output;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run_anonymize(const AnonymizeArgs& args) {
  anonlog::XesDocument doc = anonlog::parse_xes_file(args.input);
  print_warnings(doc);
  anonlog::PipelineConfig config = anonlog::parse_pipeline_config_file(args.pipeline);
  std::uint64_t seed = args.seed_given ? args.seed : config.seed;
  anonlog::SeededRng rng(seed);
  anonlog::XesDocument result = anonlog::apply_pipeline(doc, config.steps, rng);
  anonlog::write_xes_file(result, args.output);
  return 0;
}

struct MetadataArgs {
  std::string input;
  std::size_t layer = 0;
  bool layer_given = false;
};

void print_record(const anonlog::AnonymizationRecord& record) {
  std::cout << "layer " << record.layer << ": " << record.signature.to_display() << "\n";
  auto print_pairs = [](const char* label, const auto& pairs) {
    if (pairs.empty()) return;
    std::cout << "  " << label << ":";
    for (const auto& [name, value] : pairs) {
      std::cout << " " << name << "=" << value;
    }
    std::cout << "\n";
  };
  print_pairs("operation_parameters", record.operation_parameters);
  print_pairs("statistics", record.statistics);
  if (!record.desired_analyses.empty()) {
    std::cout << "  desired_analyses:";
    for (const auto& label : record.desired_analyses) {
      std::cout << " " << label << ";";
    }
    std::cout << "\n";
  }
}

int run_metadata(const MetadataArgs& args) {
  anonlog::XesDocument doc = anonlog::parse_xes_file(args.input);
  print_warnings(doc);
  if (args.layer_given) {
    print_record(anonlog::get_anonymizer(doc, args.layer));
    return 0;
  }
  anonlog::AnonymizationsList list = anonlog::get_anonymizations(doc);
  if (list.empty()) {
    std::cout << "no privacy metadata\n";
    return 0;
  }
  for (const auto& record : list.records) {
    print_record(record);
  }
  return 0;
}

struct ElaExportArgs {
  std::string input, method, origin, output;
};

int run_ela_export(const ElaExportArgs& args) {
  if (args.method != "dfg") {
    throw anonlog::UnsupportedError("unsupported abstraction method '" + args.method +
                                    "'; supported methods: dfg");
  }
  anonlog::XesDocument doc = anonlog::parse_xes_file(args.input);
  print_warnings(doc);
  anonlog::ElaDocument ela = anonlog::dfg_abstraction(doc.log, args.origin);
  anonlog::write_ela_file(ela, args.output);
  return 0;
}

struct LeakageArgs {
  std::string input;
  std::string signature;
  std::uint64_t universe_size = 1;
  std::string condition;
  bool enumerate = false;
  std::string universe_csv;
  std::uint64_t cap = 10000;
  std::string output_dir;
};

anonlog::LeakageSignature parse_signature(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    tokens.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (tokens.size() != 2 && tokens.size() != 3) {
    throw anonlog::ConfigError("--signature expects 'type,level[,target]', got '" + text + "'");
  }
  anonlog::LeakageSignature sig;
  auto type = anonlog::operation_type_from_token(tokens[0]);
  if (!type) throw anonlog::ConfigError("unknown operation type '" + tokens[0] + "'");
  auto level = anonlog::operation_level_from_token(tokens[1]);
  if (!level) throw anonlog::ConfigError("unknown level '" + tokens[1] + "'");
  sig.type = *type;
  sig.level = *level;
  if (tokens.size() == 3) sig.target = tokens[2];
  return sig;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::string print_count(const std::optional<std::uint64_t>& count) {
  return count ? std::to_string(*count) : "overflow (exceeds 2^64-1)";
}

int run_leakage(const LeakageArgs& args) {
  anonlog::XesDocument doc = anonlog::parse_xes_file(args.input);
  print_warnings(doc);

  anonlog::LeakageQuery query;
  query.signature = parse_signature(args.signature);
  query.universe_size = args.universe_size;
  if (!args.condition.empty()) {
    std::size_t eq = args.condition.find('=');
    if (eq == std::string::npos) {
      throw anonlog::ConfigError("--condition expects 'act=VALUE'");
    }
    std::string key = args.condition.substr(0, eq);
    if (key != "act" && key != "activity") {
      throw anonlog::UnsupportedError("only activity conditions are supported, got '" + key +
                                      "'");
    }
    query.signature.condition = {{"activity", args.condition.substr(eq + 1)}};
  }
  query.anonymized = doc.log;

  anonlog::CardinalityEstimate estimate = anonlog::estimate_ol_cardinality(query);
  if (estimate.unbounded) {
    std::cout << "paper_estimate: unbounded\n";
    std::cout << "note: " << estimate.note << "\n";
    return 0;
  }
  std::cout << "null_resource_slots: " << estimate.slot_count << "\n";
  std::cout << "universe_size: " << query.universe_size << "\n";
  std::cout << "paper_estimate: " << print_count(estimate.paper_estimate) << "\n";
  std::cout << "exact_count: " << print_count(estimate.exact_count) << "\n";

  if (!args.enumerate) return 0;
  if (query.signature.condition) {
    throw anonlog::UnsupportedError("enumeration with a conditioned signature is not supported");
  }
  if (args.universe_csv.empty()) {
    throw anonlog::ConfigError("--enumerate requires --universe a,b,c");
  }

  anonlog::OriginalLogEnumerator enumerator(doc.log, split_csv(args.universe_csv), args.cap);

  // Candidate files, when requested, describe hypothetical originals: the
  // document shell is kept but the privacy metadata is stripped.
  anonlog::XesDocument shell = doc;
  shell.log_attributes.erase(std::string(anonlog::privacy_keys::kAnonymizations));
  std::erase_if(shell.extensions, [](const anonlog::XesExtension& e) {
    return e.prefix == anonlog::kPrivacyExtension.prefix;
  });

  int digits = static_cast<int>(std::to_string(enumerator.total()).size());
  std::uint64_t written = 0;
  while (auto candidate = enumerator.next()) {
    ++written;
    if (!args.output_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "candidate_%0*llu.xes", digits,
                    static_cast<unsigned long long>(written));
      shell.log = std::move(*candidate);
      std::filesystem::create_directories(args.output_dir);
      anonlog::write_xes_file(shell, std::filesystem::path(args.output_dir) / name);
    }
  }
  std::cout << "candidates: " << written;
  if (!args.output_dir.empty()) std::cout << " (written to " << args.output_dir << ")";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-aware XES event log anonymization toolkit"};
  app.require_subcommand(1);

  AnonymizeArgs anonymize_args;
  auto* anonymize = app.add_subcommand(
      "anonymize", "Apply a pipeline of anonymization operations to an XES log");
  anonymize->add_option("--input", anonymize_args.input, "Input XES file")->required();
  anonymize->add_option("--pipeline", anonymize_args.pipeline, "Pipeline config file")
      ->required();
  anonymize->add_option("--output", anonymize_args.output, "Output XES file")->required();
  auto* seed_opt =
      anonymize->add_option("--seed", anonymize_args.seed, "Overrides the config seed");

  MetadataArgs metadata_args;
  auto* metadata =
      app.add_subcommand("metadata", "Show the anonymization layers recorded in an XES log");
  metadata->add_option("--input", metadata_args.input, "Input XES file")->required();
  auto* layer_opt =
      metadata->add_option("--layer", metadata_args.layer, "Show one layer (1-based)");

  ElaExportArgs ela_args;
  auto* ela_export =
      app.add_subcommand("ela-export", "Export a non-log abstraction in the ELA format");
  ela_export->add_option("--input", ela_args.input, "Input XES file")->required();
  ela_export->add_option("--method", ela_args.method, "Abstraction method (dfg)")->required();
  ela_export->add_option("--origin", ela_args.origin, "Origin log name for the ELA header")
      ->required();
  ela_export->add_option("--output", ela_args.output, "Output ELA file")->required();

  LeakageArgs leakage_args;
  auto* leakage = app.add_subcommand(
      "leakage", "Estimate how many potential original logs a published log admits");
  leakage->add_option("--input", leakage_args.input, "Anonymized XES file")->required();
  leakage
      ->add_option("--signature", leakage_args.signature,
                   "Anonymizer signature, e.g. sup,event,resource")
      ->required();
  leakage
      ->add_option("--universe-size", leakage_args.universe_size,
                   "Assumed size of the resource universe")
      ->required();
  leakage->add_option("--condition", leakage_args.condition,
                      "Operation condition, e.g. act=r");
  leakage->add_flag("--enumerate", leakage_args.enumerate,
                    "Materialize every potential original log");
  leakage->add_option("--universe", leakage_args.universe_csv,
                      "Explicit resource universe for enumeration, e.g. a,b,c");
  leakage->add_option("--cap", leakage_args.cap,
                      "Refuse enumerations above this many candidates");
  leakage->add_option("--output-dir", leakage_args.output_dir,
                      "Write enumerated candidates as XES files into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  anonymize_args.seed_given = seed_opt->count() > 0;
  metadata_args.layer_given = layer_opt->count() > 0;

  try {
    if (anonymize->parsed()) return run_anonymize(anonymize_args);
    if (metadata->parsed()) return run_metadata(metadata_args);
    if (ela_export->parsed()) return run_ela_export(ela_args);
    if (leakage->parsed()) return run_leakage(leakage_args);
  } catch (const anonlog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include <doctest.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "anonlog/ela.hpp"
#include "anonlog/privacy_metadata.hpp"
#include "anonlog/xes.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() /
           ("anonlog_cli_" + std::to_string(static_cast<unsigned>(::getpid())));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path file(const std::string& name, std::string_view contents) const {
    fs::path p = path(name);
    std::ofstream out(p, std::ios::binary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    return p;
  }

 private:
  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

CliResult run_cli(const Scratch& scratch, const std::string& args) {
  fs::path out_file = scratch.path("_stdout.txt");
  fs::path err_file = scratch.path("_stderr.txt");
  std::string command = std::string(ANONLOG_BIN) + " " + args + " > " + out_file.string() +
                        " 2> " + err_file.string();
  int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

}  // namespace

TEST_CASE("anonymize applies the pipeline and writes the published log") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);
  fs::path pipeline = scratch.file("pipeline.conf", testutil::kTableLogPipeline);
  fs::path output = scratch.path("published.xes");

  CliResult r = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                     pipeline.string() + " --output " + output.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(output));

  anonlog::XesDocument published = anonlog::parse_xes_file(output);
  anonlog::AnonymizationsList list = anonlog::get_anonymizations(published);
  REQUIRE(list.size() == 3);
  CHECK(anonlog::to_token(list.records[0].signature.type) == "sub");
  CHECK(anonlog::to_token(list.records[1].signature.type) == "gen");
  CHECK(anonlog::to_token(list.records[2].signature.type) == "sup");
  CHECK(published.log.event_value("e17", anonlog::keys::kResource).is_null());

  SUBCASE("the input file is never mutated") {
    CHECK(slurp(input) == testutil::kHospitalLogXes);
  }
  SUBCASE("identical invocations are byte identical") {
    fs::path output2 = scratch.path("published2.xes");
    CliResult r2 = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                        pipeline.string() + " --output " + output2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(output) == slurp(output2));
  }
  SUBCASE("--seed overrides the config seed deterministically") {
    fs::path output3 = scratch.path("published3.xes");
    CliResult r3 =
        run_cli(scratch, "anonymize --seed 99 --input " + input.string() + " --pipeline " +
                             pipeline.string() + " --output " + output3.string());
    REQUIRE(r3.exit_code == 0);
    anonlog::XesDocument reseeded = anonlog::parse_xes_file(output3);
    // Still a valid Table-2 shape; the draw may differ but stays in {g,k}.
    auto act = reseeded.log.activity_of(*reseeded.log.find_event("e6"));
    CHECK((*act == "g" || *act == "k"));
  }
}

TEST_CASE("anonymize with an empty pipeline reproduces the serialized input") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);
  fs::path pipeline = scratch.file("empty.conf", "# no steps\n");
  fs::path output = scratch.path("copy.xes");

  CliResult r = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                     pipeline.string() + " --output " + output.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(output) == anonlog::serialize_xes(anonlog::parse_xes(testutil::kHospitalLogXes)));
}

TEST_CASE("anonymize failure paths") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);

  SUBCASE("an invalid op name exits 2 and names the step") {
    fs::path pipeline =
        scratch.file("bad.conf", "[step 1]\nop = generalize_time\nlevel = days\n[step 2]\nop = frobnicate\n");
    fs::path output = scratch.path("never.xes");
    CliResult r = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                       pipeline.string() + " --output " + output.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("step 2") != std::string::npos);
    CHECK_FALSE(fs::exists(output));
  }
  SUBCASE("a runtime layer failure leaves no partial output") {
    fs::path pipeline = scratch.file(
        "singleton.conf", "[step 1]\nop = swap_case_attribute\nattribute = Age\nclusters = 1\n");
    fs::path output = scratch.path("never.xes");
    CliResult r = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                       pipeline.string() + " --output " + output.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("layer 1") != std::string::npos);
    CHECK_FALSE(fs::exists(output));
  }
  SUBCASE("missing input exits 1") {
    fs::path pipeline = scratch.file("empty.conf", "");
    CliResult r = run_cli(scratch, "anonymize --input /nonexistent.xes --pipeline " +
                                       pipeline.string() + " --output " +
                                       scratch.path("x.xes").string());
    CHECK(r.exit_code == 1);
  }
  SUBCASE("an unsupported scheme exits 3") {
    fs::path pipeline = scratch.file(
        "scheme.conf", "[step 1]\nop = generalize_time\nlevel = days\nscheme = sibling\n");
    CliResult r = run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                                       pipeline.string() + " --output " +
                                       scratch.path("x.xes").string());
    CHECK(r.exit_code == 3);
  }
  SUBCASE("malformed XML exits 1 with a position") {
    fs::path broken = scratch.file("broken.xes", "<log><trace></log>");
    fs::path pipeline = scratch.file("empty.conf", "");
    CliResult r = run_cli(scratch, "anonymize --input " + broken.string() + " --pipeline " +
                                       pipeline.string() + " --output " +
                                       scratch.path("x.xes").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("line") != std::string::npos);
  }
}

TEST_CASE("metadata prints the recorded layers") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);
  fs::path pipeline = scratch.file("pipeline.conf", testutil::kTableLogPipeline);
  fs::path published = scratch.path("published.xes");
  REQUIRE(run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                               pipeline.string() + " --output " + published.string())
              .exit_code == 0);

  SUBCASE("all layers in order") {
    CliResult r = run_cli(scratch, "metadata --input " + published.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "layer 1: type=sub level=event target=activity\n"
          "layer 2: type=gen level=event target=time\n"
          "layer 3: type=sup level=event target=resource\n");
  }
  SUBCASE("a single layer") {
    CliResult r = run_cli(scratch, "metadata --input " + published.string() + " --layer 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "layer 2: type=gen level=event target=time\n");
  }
  SUBCASE("layer out of range exits nonzero") {
    CliResult r = run_cli(scratch, "metadata --input " + published.string() + " --layer 4");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("1..3") != std::string::npos);
  }
  SUBCASE("a log without metadata reports that and exits 0") {
    CliResult r = run_cli(scratch, "metadata --input " + input.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "no privacy metadata\n");
  }
}

TEST_CASE("ela-export writes the directly-follows abstraction") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);
  fs::path output = scratch.path("abstraction.ela");

  SUBCASE("frequencies match the brute-force oracle") {
    CliResult r = run_cli(scratch, "ela-export --input " + input.string() +
                                       " --method dfg --origin \"hospital log\" --output " +
                                       output.string());
    REQUIRE(r.exit_code == 0);
    anonlog::ElaDocument doc = anonlog::read_ela_file(output);
    CHECK(doc.origin == "hospital log");
    CHECK(doc.method == "dfg_abstraction");

    auto oracle = testutil::brute_force_dfg(anonlog::parse_xes(testutil::kHospitalLogXes).log);
    REQUIRE(doc.rows.size() == oracle.size());
    for (const auto& row : doc.rows) {
      CHECK(std::to_string(oracle.at({row[0], row[1]})) == row[2]);
    }
  }
  SUBCASE("an empty log exports a header-only abstraction") {
    fs::path empty = scratch.file("empty.xes", "<log/>");
    CliResult r = run_cli(scratch, "ela-export --input " + empty.string() +
                                       " --method dfg --origin none --output " + output.string());
    REQUIRE(r.exit_code == 0);
    CHECK(anonlog::read_ela_file(output).rows.empty());
  }
  SUBCASE("missing --origin is a usage error") {
    CliResult r = run_cli(scratch, "ela-export --input " + input.string() +
                                       " --method dfg --output " + output.string());
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown methods list the supported ones and exit 3") {
    CliResult r = run_cli(scratch, "ela-export --input " + input.string() +
                                       " --method magic --origin x --output " + output.string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("dfg") != std::string::npos);
  }
}

TEST_CASE("leakage reports both cardinality readings") {
  Scratch scratch;
  fs::path input = scratch.file("hospital.xes", testutil::kHospitalLogXes);
  fs::path pipeline = scratch.file("pipeline.conf", testutil::kTableLogPipeline);
  fs::path published = scratch.path("published.xes");
  REQUIRE(run_cli(scratch, "anonymize --input " + input.string() + " --pipeline " +
                               pipeline.string() + " --output " + published.string())
              .exit_code == 0);

  SUBCASE("two null slots at universe size 5") {
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature sup,event,resource --universe-size 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "null_resource_slots: 2\n"
          "universe_size: 5\n"
          "paper_estimate: 10\n"
          "exact_count: 25\n");
  }
  SUBCASE("the activity condition narrows the estimate") {
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature sup,event,resource --universe-size 5 "
                                       "--condition act=r");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("paper_estimate: 5\n") != std::string::npos);
    CHECK(r.out.find("exact_count: 5\n") != std::string::npos);
  }
  SUBCASE("a log without null resources is pinned down") {
    fs::path clean = scratch.file("clean.xes", testutil::kOneTraceXes);
    CliResult r = run_cli(scratch, "leakage --input " + clean.string() +
                                       " --signature sup,event,resource --universe-size 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("paper_estimate: 0\n") != std::string::npos);
    CHECK(r.out.find("exact_count: 1\n") != std::string::npos);
  }
  SUBCASE("the coarse signature is unbounded") {
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature sup,event --universe-size 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("paper_estimate: unbounded\n") != std::string::npos);
  }
  SUBCASE("unsupported signatures exit 3") {
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature gen,event,time --universe-size 5");
    CHECK(r.exit_code == 3);
  }
  SUBCASE("enumeration writes pairwise-distinct candidates") {
    fs::path outdir = scratch.path("candidates");
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature sup,event,resource --universe-size 3 "
                                       "--enumerate --universe B1,B2,B3 --cap 100 --output-dir " +
                                       outdir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("candidates: 9") != std::string::npos);
    std::vector<std::string> serialized;
    for (int i = 1; i <= 9; ++i) {
      fs::path candidate = outdir / ("candidate_" + std::to_string(i) + ".xes");
      REQUIRE(fs::exists(candidate));
      serialized.push_back(slurp(candidate));
      // Candidate files carry no privacy metadata.
      CHECK(serialized.back().find("privacy:anonymizations") == std::string::npos);
    }
    std::sort(serialized.begin(), serialized.end());
    CHECK(std::unique(serialized.begin(), serialized.end()) == serialized.end());
  }
  SUBCASE("the cap refuses with the exact count") {
    CliResult r = run_cli(scratch, "leakage --input " + published.string() +
                                       " --signature sup,event,resource --universe-size 3 "
                                       "--enumerate --universe B1,B2,B3 --cap 5");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("9") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 2") {
  Scratch scratch;
  CliResult r = run_cli(scratch, "anonymize");
  CHECK(r.exit_code == 2);
  CliResult unknown = run_cli(scratch, "fly");
  CHECK(unknown.exit_code == 2);
}

#include <doctest.h>

#include "anonlog/anonymize.hpp"
#include "anonlog/privacy_metadata.hpp"
#include "testutil.hpp"

using namespace anonlog;

namespace {

AnonymizerSignature substitution_sig() {
  return {OperationType::Substitution, OperationLevel::Event, "activity"};
}
AnonymizerSignature generalization_sig() {
  return {OperationType::Generalization, OperationLevel::Event, "time"};
}
AnonymizerSignature suppression_sig() {
  return {OperationType::Suppression, OperationLevel::Event, "resource"};
}

}  // namespace

TEST_CASE("set_anonymizer creates the extension and list on first use") {
  XesDocument doc = testutil::hospital_document();
  CHECK(doc.find_extension("privacy") == nullptr);

  std::size_t layer = set_anonymizer(doc, substitution_sig());
  CHECK(layer == 1);
  REQUIRE(doc.find_extension("privacy") != nullptr);
  CHECK(doc.find_extension("privacy")->name == "Privacy");

  AnonymizationsList list = get_anonymizations(doc);
  REQUIRE(list.size() == 1);
  CHECK(list.records[0].signature == substitution_sig());
  CHECK(list.records[0].layer == 1);
}

TEST_CASE("records append in call order") {
  XesDocument doc = testutil::hospital_document();
  set_anonymizer(doc, substitution_sig());
  set_anonymizer(doc, generalization_sig());

  std::size_t layer = set_anonymizer(doc, suppression_sig());
  CHECK(layer == 3);

  AnonymizationsList list = get_anonymizations(doc);
  REQUIRE(list.size() == 3);
  CHECK(list.records[0].signature == substitution_sig());
  CHECK(list.records[1].signature == generalization_sig());
  CHECK(list.records[2].signature == suppression_sig());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(list.records[i].layer == i + 1);
  }
}

TEST_CASE("signature targets must be level tokens or declared attributes") {
  XesDocument doc = testutil::hospital_document();
  CHECK_THROWS_AS(
      set_anonymizer(doc, {OperationType::Condensation, OperationLevel::Case, "Undeclared"}),
      ConfigError);
  CHECK_THROWS_AS(set_anonymizer(doc, {OperationType::Condensation, OperationLevel::Case, ""}),
                  ConfigError);
  // "Disease" is a declared case attribute of the fixture.
  CHECK(set_anonymizer(doc, {OperationType::Condensation, OperationLevel::Case, "Disease"}) == 1);
}

TEST_CASE("optional attributes merge into their layer") {
  XesDocument doc = testutil::hospital_document();
  set_anonymizer(doc, substitution_sig());

  SUBCASE("statistics readable through get_anonymizer") {
    OptionalAttributes optionals;
    optionals.statistics = {{"events_modified", "3"}};
    set_optional_anonymizer(doc, 1, optionals);

    AnonymizationRecord record = get_anonymizer(doc, 1);
    REQUIRE(record.statistics.size() == 1);
    CHECK(record.statistics[0] == std::pair<std::string, std::string>{"events_modified", "3"});
    CHECK(record.signature == substitution_sig());  // mandatory part untouched
  }
  SUBCASE("empty optionals change nothing") {
    XesDocument before = doc;
    set_optional_anonymizer(doc, 1, {});
    CHECK(serialize_xes(doc) == serialize_xes(before));
  }
  SUBCASE("layer 0 is out of range") {
    CHECK_THROWS_WITH_AS(set_optional_anonymizer(doc, 0, {}), doctest::Contains("1..1"),
                         ConfigError);
  }
  SUBCASE("layer past the end is out of range") {
    CHECK_THROWS_AS(set_optional_anonymizer(doc, 2, {}), ConfigError);
  }
  SUBCASE("repeated merge appends") {
    OptionalAttributes optionals;
    optionals.operation_parameters = {{"method", "hmac_sha256"}};
    set_optional_anonymizer(doc, 1, optionals);
    set_optional_anonymizer(doc, 1, optionals);
    CHECK(get_anonymizer(doc, 1).operation_parameters.size() == 2);
  }
}

TEST_CASE("get_anonymizations on a document without metadata is empty") {
  XesDocument doc = parse_xes(testutil::kOneTraceXes);
  CHECK(get_anonymizations(doc).empty());
}

TEST_CASE("get_anonymizer range checks") {
  XesDocument doc = testutil::hospital_document();
  set_anonymizer(doc, substitution_sig());
  CHECK(get_anonymizer(doc, 1).signature == substitution_sig());
  CHECK_THROWS_AS(get_anonymizer(doc, 2), ConfigError);
  CHECK_THROWS_AS(get_anonymizer(doc, 0), ConfigError);
}

TEST_CASE("metadata survives the XES round trip exactly") {
  XesDocument doc = testutil::hospital_document();
  set_anonymizer(doc, substitution_sig());
  set_anonymizer(doc, generalization_sig());
  OptionalAttributes optionals;
  optionals.operation_parameters = {{"level", "minutes"}};
  optionals.desired_analyses = {"process discovery", "performance"};
  set_optional_anonymizer(doc, 2, optionals);

  XesDocument back = parse_xes(serialize_xes(doc));
  CHECK(get_anonymizations(back).records == get_anonymizations(doc).records);
}

TEST_CASE("payload layout is the canonical nested list") {
  XesDocument doc = XesDocument::with_standard_declarations();
  set_anonymizer(doc, suppression_sig());
  OptionalAttributes optionals;
  optionals.statistics = {{"events_modified", "1"}};
  optionals.desired_analyses = {"process discovery"};
  set_optional_anonymizer(doc, 1, optionals);

  std::string expected_block =
      "  <list key=\"privacy:anonymizations\">\n"
      "    <container key=\"privacy:anonymizer\">\n"
      "      <string key=\"privacy:operation_type\" value=\"sup\"/>\n"
      "      <string key=\"privacy:level\" value=\"event\"/>\n"
      "      <string key=\"privacy:target\" value=\"resource\"/>\n"
      "      <list key=\"privacy:statistics\">\n"
      "        <string key=\"events_modified\" value=\"1\"/>\n"
      "      </list>\n"
      "      <list key=\"privacy:desired_analyses\">\n"
      "        <string key=\"analysis\" value=\"process discovery\"/>\n"
      "      </list>\n"
      "    </container>\n"
      "  </list>\n";
  std::string bytes = serialize_xes(doc);
  CHECK(bytes.find(expected_block) != std::string::npos);
  CHECK(bytes.find("privacy.xesext") != std::string::npos);
}

TEST_CASE("malformed payloads are reported with layer and key") {
  XesDocument doc = XesDocument::with_standard_declarations();
  set_anonymizer(doc, substitution_sig());
  set_anonymizer(doc, suppression_sig());

  Attribute& list = doc.log_attributes.at(std::string(privacy_keys::kAnonymizations));
  SUBCASE("missing mandatory key") {
    // Drop privacy:target from layer 2.
    auto& children = list.children[1].attr.children;
    children.erase(children.begin() + 2);
    try {
      get_anonymizations(doc);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      std::string message = e.what();
      CHECK(message.find("layer 2") != std::string::npos);
      CHECK(message.find("privacy:target") != std::string::npos);
    }
  }
  SUBCASE("unknown operation type token") {
    list.children[0].attr.children[0].attr = Attribute::text("zap");
    CHECK_THROWS_WITH_AS(get_anonymizations(doc), doctest::Contains("zap"), ParseError);
  }
  SUBCASE("stray entry in the list") {
    list.add_child("oops", Attribute::text("x"));
    CHECK_THROWS_WITH_AS(get_anonymizations(doc), doctest::Contains("layer 3"), ParseError);
  }
}

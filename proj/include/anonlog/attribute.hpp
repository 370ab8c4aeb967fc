#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "anonlog/error.hpp"

namespace anonlog {

// UTC instant with millisecond precision.
struct Timestamp {
  std::int64_t millis = 0;

  auto operator<=>(const Timestamp&) const = default;
};

// Renders as ISO-8601 with explicit UTC offset, e.g. "2019-01-01T08:30:10.000+00:00".
std::string format_timestamp(Timestamp ts);

// Accepts ISO-8601 with 'Z', '+HH:MM', '+HHMM' or no offset (read as UTC);
// fractional seconds beyond milliseconds are truncated.
Timestamp parse_timestamp(std::string_view text);

enum class ValueKind { Null, Boolean, Integer, Real, Text, Timestamp };

std::string_view to_string(ValueKind kind);

// A value from the attribute universe. Null is its own variant; it never
// aliases an empty string or zero.
class AttributeValue {
 public:
  AttributeValue() = default;  // Null

  static AttributeValue null() { return AttributeValue(); }
  static AttributeValue boolean(bool b) { return AttributeValue(Storage(b)); }
  static AttributeValue integer(std::int64_t i) { return AttributeValue(Storage(i)); }
  static AttributeValue real(double d) { return AttributeValue(Storage(d)); }
  static AttributeValue text(std::string s) { return AttributeValue(Storage(std::move(s))); }
  static AttributeValue timestamp(Timestamp ts) { return AttributeValue(Storage(ts)); }

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
  bool is_null() const { return kind() == ValueKind::Null; }

  bool as_boolean() const { return get<bool>(ValueKind::Boolean); }
  std::int64_t as_integer() const { return get<std::int64_t>(ValueKind::Integer); }
  double as_real() const { return get<double>(ValueKind::Real); }
  const std::string& as_text() const { return get<std::string>(ValueKind::Text); }
  Timestamp as_timestamp() const { return get<Timestamp>(ValueKind::Timestamp); }

  // Text rendering used for diagnostics and ELA cells. Null renders as "".
  std::string to_text() const;

  bool operator==(const AttributeValue&) const = default;

 private:
  struct NullTag {
    auto operator<=>(const NullTag&) const = default;
  };
  // Alternative order defines the cross-kind rank used by total_order_less.
  using Storage = std::variant<NullTag, bool, std::int64_t, double, std::string, Timestamp>;

  explicit AttributeValue(Storage v) : v_(std::move(v)) {}

  template <typename T>
  const T& get(ValueKind expected) const {
    if (kind() != expected) {
      throw ConfigError("attribute value is " + std::string(to_string(kind())) + ", expected " +
                        std::string(to_string(expected)));
    }
    return std::get<T>(v_);
  }

  friend int compare(const AttributeValue& a, const AttributeValue& b);
  friend bool total_order_less(const AttributeValue& a, const AttributeValue& b);

  Storage v_;
};

// Three-way comparison within one kind; comparing distinct kinds is an error,
// not false. Null compares equal to Null.
int compare(const AttributeValue& a, const AttributeValue& b);

// Deterministic total order across kinds, used only for tie-breaking:
// Null < Boolean < Integer < Real < Text < Timestamp, natural order within a kind.
bool total_order_less(const AttributeValue& a, const AttributeValue& b);

// Attribute payload types. Scalars carry a value; List and Container carry
// ordered child attributes whose keys may repeat.
enum class AttrType { String, Int, Float, Date, Boolean, Id, List, Container };

std::string_view to_string(AttrType type);

struct AttributeEntry;

struct Attribute {
  AttrType type = AttrType::String;
  AttributeValue value;                  // Null for List/Container
  std::vector<AttributeEntry> children;  // nested attributes, document order

  // Derives the attribute type from the value kind; the value must be non-null.
  static Attribute from_value(AttributeValue v);

  static Attribute text(std::string s) { return from_value(AttributeValue::text(std::move(s))); }
  static Attribute integer(std::int64_t i) { return from_value(AttributeValue::integer(i)); }
  static Attribute real(double d) { return from_value(AttributeValue::real(d)); }
  static Attribute boolean(bool b) { return from_value(AttributeValue::boolean(b)); }
  static Attribute date(Timestamp ts) { return from_value(AttributeValue::timestamp(ts)); }
  static Attribute id(std::string s);
  static Attribute list();
  static Attribute container();

  bool is_collection() const { return type == AttrType::List || type == AttrType::Container; }

  Attribute& add_child(std::string key, Attribute attr);
  const Attribute* find_child(std::string_view key) const;

  bool operator==(const Attribute&) const;
};

struct AttributeEntry {
  std::string key;
  Attribute attr;

  bool operator==(const AttributeEntry&) const = default;
};

using AttributeMap = std::map<std::string, Attribute, std::less<>>;

}  // namespace anonlog

#include "anonlog/attribute.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace anonlog {

namespace {

using days_ms = std::chrono::duration<std::int64_t, std::ratio<86400>>;

struct CivilTime {
  int year;
  unsigned month, day, hour, minute, second, millis;
};

CivilTime split_timestamp(Timestamp ts) {
  using namespace std::chrono;
  sys_time<milliseconds> tp{milliseconds{ts.millis}};
  auto day_point = floor<days>(tp);
  year_month_day ymd{day_point};
  auto tod = tp - day_point;
  auto h = duration_cast<hours>(tod);
  auto m = duration_cast<minutes>(tod - h);
  auto s = duration_cast<seconds>(tod - h - m);
  auto ms = duration_cast<milliseconds>(tod - h - m - s);
  return CivilTime{static_cast<int>(ymd.year()),
                   static_cast<unsigned>(ymd.month()),
                   static_cast<unsigned>(ymd.day()),
                   static_cast<unsigned>(h.count()),
                   static_cast<unsigned>(m.count()),
                   static_cast<unsigned>(s.count()),
                   static_cast<unsigned>(ms.count())};
}

bool parse_fixed_uint(std::string_view text, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > text.size()) return false;
  unsigned value = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  out = value;
  return true;
}

}  // namespace

std::string format_timestamp(Timestamp ts) {
  CivilTime c = split_timestamp(ts);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02u.%03u+00:00", c.year, c.month,
                c.day, c.hour, c.minute, c.second, c.millis);
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  auto fail = [&]() -> ParseError {
    return ParseError("invalid timestamp: '" + std::string(text) + "'");
  };

  std::size_t pos = 0;
  bool negative_year = false;
  if (pos < text.size() && text[pos] == '-') {
    negative_year = true;
    ++pos;
  }
  std::size_t year_start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos - year_start < 4) throw fail();
  int year_value = 0;
  std::from_chars(text.data() + year_start, text.data() + pos, year_value);
  if (negative_year) year_value = -year_value;

  unsigned month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (pos >= text.size() || text[pos] != '-') throw fail();
  if (!parse_fixed_uint(text, pos + 1, 2, month)) throw fail();
  pos += 3;
  if (pos >= text.size() || text[pos] != '-') throw fail();
  if (!parse_fixed_uint(text, pos + 1, 2, day)) throw fail();
  pos += 3;
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) throw fail();
  if (!parse_fixed_uint(text, pos + 1, 2, hour)) throw fail();
  pos += 3;
  if (pos >= text.size() || text[pos] != ':') throw fail();
  if (!parse_fixed_uint(text, pos + 1, 2, minute)) throw fail();
  pos += 3;
  if (pos >= text.size() || text[pos] != ':') throw fail();
  if (!parse_fixed_uint(text, pos + 1, 2, second)) throw fail();
  pos += 3;

  unsigned millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_start) throw fail();
    // Millisecond precision: extra digits are truncated.
    for (std::size_t i = 0; i < 3; ++i) {
      millis *= 10;
      if (digits_start + i < pos) millis += static_cast<unsigned>(text[digits_start + i] - '0');
    }
  }

  std::int64_t offset_minutes = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == 'Z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int sign = (c == '-') ? -1 : 1;
      unsigned oh = 0, om = 0;
      if (!parse_fixed_uint(text, pos + 1, 2, oh)) throw fail();
      pos += 3;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!parse_fixed_uint(text, pos, 2, om)) throw fail();
      pos += 2;
      offset_minutes = sign * (static_cast<std::int64_t>(oh) * 60 + om);
    }
  }
  if (pos != text.size()) throw fail();

  year_month_day ymd{std::chrono::year{year_value}, std::chrono::month{month},
                     std::chrono::day{day}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) throw fail();

  auto tp = sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second} +
            milliseconds{millis} - minutes{offset_minutes};
  return Timestamp{duration_cast<milliseconds>(tp.time_since_epoch()).count()};
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Null: return "null";
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Integer: return "integer";
    case ValueKind::Real: return "real";
    case ValueKind::Text: return "text";
    case ValueKind::Timestamp: return "timestamp";
  }
  return "?";
}

std::string AttributeValue::to_text() const {
  switch (kind()) {
    case ValueKind::Null: return "";
    case ValueKind::Boolean: return as_boolean() ? "true" : "false";
    case ValueKind::Integer: return std::to_string(as_integer());
    case ValueKind::Real: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), as_real());
      return std::string(buf, res.ptr);
    }
    case ValueKind::Text: return as_text();
    case ValueKind::Timestamp: return format_timestamp(as_timestamp());
  }
  return "";
}

int compare(const AttributeValue& a, const AttributeValue& b) {
  if (a.kind() != b.kind()) {
    throw ConfigError("cannot compare " + std::string(to_string(a.kind())) + " with " +
                      std::string(to_string(b.kind())));
  }
  if (a.v_ == b.v_) return 0;
  return a.v_ < b.v_ ? -1 : 1;
}

bool total_order_less(const AttributeValue& a, const AttributeValue& b) {
  // variant operator< orders by index first, then by value within the
  // alternative, which is exactly the documented rank.
  return a.v_ < b.v_;
}

std::string_view to_string(AttrType type) {
  switch (type) {
    case AttrType::String: return "string";
    case AttrType::Int: return "int";
    case AttrType::Float: return "float";
    case AttrType::Date: return "date";
    case AttrType::Boolean: return "boolean";
    case AttrType::Id: return "id";
    case AttrType::List: return "list";
    case AttrType::Container: return "container";
  }
  return "?";
}

Attribute Attribute::from_value(AttributeValue v) {
  Attribute a;
  switch (v.kind()) {
    case ValueKind::Null:
      throw ConfigError("an explicit attribute cannot hold null; absence encodes null");
    case ValueKind::Boolean: a.type = AttrType::Boolean; break;
    case ValueKind::Integer: a.type = AttrType::Int; break;
    case ValueKind::Real: a.type = AttrType::Float; break;
    case ValueKind::Text: a.type = AttrType::String; break;
    case ValueKind::Timestamp: a.type = AttrType::Date; break;
  }
  a.value = std::move(v);
  return a;
}

Attribute Attribute::id(std::string s) {
  Attribute a;
  a.type = AttrType::Id;
  a.value = AttributeValue::text(std::move(s));
  return a;
}

Attribute Attribute::list() {
  Attribute a;
  a.type = AttrType::List;
  return a;
}

Attribute Attribute::container() {
  Attribute a;
  a.type = AttrType::Container;
  return a;
}

Attribute& Attribute::add_child(std::string key, Attribute attr) {
  children.push_back(AttributeEntry{std::move(key), std::move(attr)});
  return children.back().attr;
}

const Attribute* Attribute::find_child(std::string_view key) const {
  for (const auto& entry : children) {
    if (entry.key == key) return &entry.attr;
  }
  return nullptr;
}

bool Attribute::operator==(const Attribute& other) const {
  return type == other.type && value == other.value && children == other.children;
}

}  // namespace anonlog

#pragma once

// The `key = value` text format used by matrix and operator spec files:
//
//   # comment
//   kind = "power_series_infinite"
//   levels = 4
//   alpha.expr = "log(n)"
//   entries = [0.0, 1.5,
//              2.0, 3.5]
//
// Values are strings, numbers (kept as double, written in shortest
// round-trip form) or arrays of values, possibly nested and spanning lines.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lkoethe::spec_format {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<double, std::string, Array> data;
  std::size_t line = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
};

struct Entry {
  std::string key;
  Value value;
};

class Document {
 public:
  // Throws ParseError on a repeated key.
  void set(std::string key, Value value);
  const Value* find(std::string_view key) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  // Typed accessors; throw ParseError naming the field on absence or type
  // mismatch.
  const Value& require(std::string_view key) const;
  std::string string_field(std::string_view key) const;
  double number_field(std::string_view key) const;
  // Positive integer stored as a number.
  std::size_t index_field(std::string_view key) const;

 private:
  std::vector<Entry> entries_;
};

Document parse(std::string_view text);
std::string serialize(const Document& doc);

// Shortest text that parses back to the same double.
std::string format_number(double value);

Value number(double x);
Value string(std::string s);
Value array(Array items);
// Converts a numeric value to a positive integer; throws ParseError.
std::size_t to_index(const Value& v, std::string_view field);

}  // namespace lkoethe::spec_format

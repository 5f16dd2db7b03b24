#include "lkoethe/spec_format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "lkoethe/errors.hpp"

namespace lkoethe::spec_format {

namespace {

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Document run() {
    Document doc;
    for (;;) {
      skip_blank_lines();
      if (at_end()) break;
      const std::size_t key_line = line_;
      std::string key = read_key();
      skip_spaces();
      if (peek() != '=') fail(key, "expected '=' after key");
      ++pos_;
      skip_spaces();
      Value value = read_value(key);
      skip_spaces();
      skip_comment();
      if (!at_end() && peek() != '\n' && peek() != '\r') fail(key, "unexpected text after value");
      value.line = key_line;
      doc.set(std::move(key), std::move(value));
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(std::string_view field, const std::string& message) const {
    throw ParseError(line_, std::string(field), message);
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }
  // Whitespace, comments and newlines.
  void skip_blank_lines() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (at_end()) return;
      if (peek() == '\r') {
        ++pos_;
      } else if (peek() == '\n') {
        ++pos_;
        ++line_;
      } else {
        return;
      }
    }
  }

  std::string read_key() {
    const std::size_t start = pos_;
    while (!at_end() && is_key_char(peek())) ++pos_;
    if (pos_ == start) fail("", "expected a key");
    std::string key(text_.substr(start, pos_ - start));
    if (key.front() == '.' || key.back() == '.' || key.find("..") != std::string::npos) {
      fail(key, "malformed dotted key");
    }
    return key;
  }

  Value read_value(std::string_view field) {
    if (at_end()) fail(field, "missing value");
    const char c = peek();
    if (c == '"') return Value{read_string(field), line_};
    if (c == '[') return read_array(field);
    return Value{read_number(field), line_};
  }

  std::string read_string(std::string_view field) {
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail(field, "unterminated string");
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail(field, "unterminated escape");
      const char e = text_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        default: fail(field, std::string("unknown escape \\") + e);
      }
    }
  }

  double read_number(std::string_view field) {
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = peek();
      if (c == ',' || c == ']' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') {
        break;
      }
      ++pos_;
    }
    std::string_view token = text_.substr(start, pos_ - start);
    if (token.empty()) fail(field, "expected a value");
    std::string_view digits = token;
    if (digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || end != digits.data() + digits.size()) {
      fail(field, "not a number: '" + std::string(token) + "'");
    }
    return value;
  }

  Value read_array(std::string_view field) {
    const std::size_t open_line = line_;
    ++pos_;
    Array items;
    for (;;) {
      skip_blank_lines();
      if (at_end()) fail(field, "unterminated array opened on line " + std::to_string(open_line));
      if (peek() == ']') {
        ++pos_;
        break;
      }
      items.push_back(read_value(field));
      skip_blank_lines();
      if (at_end()) fail(field, "unterminated array opened on line " + std::to_string(open_line));
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail(field, "expected ',' or ']' in array");
      }
    }
    return Value{std::move(items), open_line};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void write_value(std::string& out, const Value& v) {
  if (const auto* x = std::get_if<double>(&v.data)) {
    out += format_number(*x);
  } else if (const auto* s = std::get_if<std::string>(&v.data)) {
    out.push_back('"');
    for (char c : *s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
      }
    }
    out.push_back('"');
  } else {
    const auto& items = std::get<Array>(v.data);
    const bool nested = !items.empty() && items.front().is_array();
    out.push_back('[');
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ",";
      if (nested) {
        out += "\n  ";
      } else if (i > 0) {
        out += " ";
      }
      write_value(out, items[i]);
    }
    if (nested) out += ",\n";
    out.push_back(']');
  }
}

}  // namespace

void Document::set(std::string key, Value value) {
  if (find(key)) throw ParseError(value.line, key, "duplicate key");
  entries_.push_back({std::move(key), std::move(value)});
}

const Value* Document::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

const Value& Document::require(std::string_view key) const {
  const Value* v = find(key);
  if (!v) throw ParseError(0, std::string(key), "missing field");
  return *v;
}

std::string Document::string_field(std::string_view key) const {
  const Value& v = require(key);
  if (!v.is_string()) throw ParseError(v.line, std::string(key), "expected a string");
  return std::get<std::string>(v.data);
}

double Document::number_field(std::string_view key) const {
  const Value& v = require(key);
  if (!v.is_number()) throw ParseError(v.line, std::string(key), "expected a number");
  return std::get<double>(v.data);
}

std::size_t Document::index_field(std::string_view key) const {
  return to_index(require(key), key);
}

std::size_t to_index(const Value& v, std::string_view field) {
  if (!v.is_number()) throw ParseError(v.line, std::string(field), "expected an integer");
  const double x = std::get<double>(v.data);
  if (!(x >= 1.0) || x != std::floor(x) || x > 9.0e15) {
    throw ParseError(v.line, std::string(field), "expected a positive integer");
  }
  return static_cast<std::size_t>(x);
}

Document parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const Document& doc) {
  std::string out;
  for (const auto& e : doc.entries()) {
    out += e.key;
    out += " = ";
    write_value(out, e.value);
    out.push_back('\n');
  }
  return out;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), end);
}

Value number(double x) { return Value{x, 0}; }
Value string(std::string s) { return Value{std::move(s), 0}; }
Value array(Array items) { return Value{std::move(items), 0}; }

}  // namespace lkoethe::spec_format

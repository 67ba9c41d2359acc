#pragma once

#include <map>
#include <string>
#include <variant>

namespace normsim {

// Runtime value of the condition language: boolean, number (64-bit float,
// integer literals widen losslessly) or string. Strings have no literal
// syntax; they enter through context bindings and host functions.
class Value {
 public:
  Value() : data_(false) {}
  Value(bool b) : data_(b) {}
  Value(double n) : data_(n) {}
  Value(int n) : data_(static_cast<double>(n)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}

  bool is_boolean() const { return std::holds_alternative<bool>(data_); }
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }

  bool as_boolean() const { return std::get<bool>(data_); }
  double as_number() const { return std::get<double>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  // "boolean" / "number" / "string"
  const char* tag_name() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.data_ == b.data_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  std::variant<bool, double, std::string> data_;
};

using Bindings = std::map<std::string, Value>;

// Shortest representation that parses back to the same double ("4", "0.1",
// "1e+200"). Used by the pretty-printer and everywhere numbers reach text.
std::string format_number(double value);

// Rendering used by diagnostics and the CLI: numbers via format_number,
// booleans as true/false, strings verbatim.
std::string to_display_string(const Value& value);

}  // namespace normsim

#include "normsim/value.hpp"

#include <charconv>
#include <system_error>

namespace normsim {

const char* Value::tag_name() const {
  if (is_boolean()) return "boolean";
  if (is_number()) return "number";
  return "string";
}

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_display_string(const Value& value) {
  if (value.is_boolean()) return value.as_boolean() ? "true" : "false";
  if (value.is_number()) return format_number(value.as_number());
  return value.as_string();
}

}  // namespace normsim

#include "pdrich/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace pdrich {

namespace {

void write_value(std::ostream& out, const nlohmann::ordered_json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (v.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << nlohmann::ordered_json(it.key()).dump() << ": ";
        write_value(out, it.value(), indent, depth + 1);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        write_value(out, e, indent, depth + 1);
      }
      out << "\n" << close_pad << "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      std::string s(buf);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out << s;
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const nlohmann::ordered_json& value, int indent) {
  write_value(out, value, indent, 0);
  out << "\n";
}

}  // namespace pdrich

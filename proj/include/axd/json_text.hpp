#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace axd {

using Json = nlohmann::ordered_json;

/// Number formatting used in every report and CSV: 17 significant digits,
/// which round-trips any double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON value for a double; non-finite values become the strings "inf",
/// "-inf" or "nan".
inline Json json_number(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}

namespace detail {

inline void write_json(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_json(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_json(out, v, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += '"' + format_double(v) + '"';
        return;
      }
      const std::string s = format_double(v);
      out += s;
      if (s.find_first_of(".eE") == std::string::npos) out += ".0";  // stays a float on re-read
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic serialisation: insertion-ordered keys, 17-digit floats.
/// indent < 0 produces a single line.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(out, j, indent, 0);
  return out;
}

}  // namespace axd

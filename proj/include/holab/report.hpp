#ifndef HOLAB_REPORT_HPP
#define HOLAB_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

#include "holab/error.hpp"

namespace holab {

// Deterministic report serialization: keys come out sorted (nlohmann keeps
// object keys ordered), floats print with 17 significant digits, so equal
// inputs give byte-identical files.

namespace detail {

inline void dump_json_rec(const nlohmann::json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + nlohmann::json(it.key()).dump() + ": ";
        dump_json_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_json_rec(v, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::string:
      out += j.dump();  // escaped literal
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += "null";
      return;
  }
}

}  // namespace detail

inline std::string dump_deterministic(const nlohmann::json& j, int indent = 2) {
  std::string out;
  detail::dump_json_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw error("failed writing '" + path + "'");
}

}  // namespace holab

#endif

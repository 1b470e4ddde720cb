#include "gnat/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace gnat {

std::string format_float(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

nlohmann::json jnum(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

void dump(const nlohmann::json& j, int indent, int level, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int lv) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(lv * indent), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map iteration: sorted keys
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += nlohmann::json(it.key()).dump();
        out += pretty ? ": " : ":";
        dump(it.value(), indent, level + 1, out);
      }
      newline(level);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        dump(e, indent, level + 1, out);
      }
      newline(level);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: out += format_float(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  return out;
}

std::string config_hash(const nlohmann::json& j) {
  const std::string s = canonical_dump(j, -1);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gnat

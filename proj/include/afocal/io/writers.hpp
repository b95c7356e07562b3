#pragma once

// Deterministic output: CSV tables and JSON with %.17g numbers, OBJ meshes.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "afocal/numkit/csv.hpp"
#include "afocal/numkit/errors.hpp"
#include "afocal/numkit/vec.hpp"

namespace afocal::io {

using json = nlohmann::json;

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::SpecError, "cannot write " + p.string());
  return out;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header) : out_(open_out(p)) {
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << fmt17(v[i]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void dump(std::string& s, const json& j, int indent) {
  const std::string pad(static_cast<size_t>(indent + 2), ' '), close(static_cast<size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ",\n";
        first = false;
        s += pad + json(k).dump() + ": ";
        dump(s, v, indent + 2);
      }
      s += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        return;
      }
      // flat numeric arrays on one line
      bool flat = true;
      for (const auto& v : j) flat = flat && v.is_primitive();
      s += "[";
      for (size_t i = 0; i < j.size(); ++i) {
        s += i ? (flat ? ", " : ",\n" + pad) : (flat ? "" : "\n" + pad);
        dump(s, j[i], indent + 2);
      }
      s += flat ? "]" : "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      s += std::isfinite(v) ? fmt17(v) : "null";
      return;
    }
    default:
      s += j.dump();
  }
}

inline std::string to_text(const json& j) {
  std::string s;
  dump(s, j, 0);
  return s + "\n";
}

inline void write_json(const std::filesystem::path& p, const json& j) { open_out(p) << to_text(j); }

inline json to_json(const VecD& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

/// Row-major (u, s) grid of points; rows wrap when `periodic`. Triangulated
/// unless every row collapses onto one line, then polylines.
inline void write_obj(const std::filesystem::path& p, const std::vector<std::vector<VecD>>& mesh, bool periodic,
                      bool degenerate) {
  auto out = open_out(p);
  if (mesh.empty() || mesh.front().empty()) return;
  if (degenerate) {
    const auto& row = mesh.front();
    for (const VecD& v : row) out << "v " << fmt17(v[0]) << ' ' << fmt17(v[1]) << ' ' << fmt17(v[2]) << '\n';
    out << 'l';
    for (size_t j = 0; j < row.size(); ++j) out << ' ' << j + 1;
    out << '\n';
    return;
  }
  const size_t rows = mesh.size(), cols = mesh.front().size();
  for (const auto& row : mesh) {
    for (const VecD& v : row) out << "v " << fmt17(v[0]) << ' ' << fmt17(v[1]) << ' ' << fmt17(v[2]) << '\n';
  }
  const size_t last = periodic ? rows : rows - 1;
  for (size_t i = 0; i < last; ++i) {
    const size_t i2 = (i + 1) % rows;
    for (size_t j = 0; j + 1 < cols; ++j) {
      const size_t a = i * cols + j + 1, b = i2 * cols + j + 1, c = i2 * cols + j + 2, d = i * cols + j + 2;
      out << "f " << a << ' ' << b << ' ' << c << '\n';
      out << "f " << a << ' ' << c << ' ' << d << '\n';
    }
  }
}

}  // namespace afocal::io

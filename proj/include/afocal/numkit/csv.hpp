#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "afocal/numkit/vec.hpp"

namespace afocal {

/// Round-trip exact decimal formatting (17 significant digits).
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SampledTable {
  std::vector<double> u;
  std::vector<VecD> x;
};

/// Reads `u,x0,x1[,x2[,x3]]` with a header row.
inline SampledTable read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SpecError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::SpecError, path + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      header.push_back(cell);
    }
  }
  const size_t dim = header.size() - 1;
  if (header.empty() || header[0] != "u" || dim < 2 || dim > 4) {
    throw Error(ErrorKind::SpecError, path + ": header must be u,x0,x1[,x2[,x3]]");
  }
  for (size_t i = 0; i < dim; ++i) {
    if (header[i + 1] != "x" + std::to_string(i)) {
      throw Error(ErrorKind::SpecError, path + ": unexpected column " + header[i + 1]);
    }
  }
  SampledTable t;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\r')) ++used;
      if (used == 0 || used != cell.size()) {
        throw Error(ErrorKind::SpecError, path + ":" + std::to_string(row) + ": bad number '" + cell + "'");
      }
      vals.push_back(v);
    }
    if (vals.size() != dim + 1) {
      throw Error(ErrorKind::SpecError, path + ":" + std::to_string(row) + ": expected " +
                                            std::to_string(dim + 1) + " columns");
    }
    t.u.push_back(vals[0]);
    VecD x(static_cast<Eigen::Index>(dim));
    for (size_t i = 0; i < dim; ++i) x[static_cast<Eigen::Index>(i)] = vals[i + 1];
    t.x.push_back(x);
  }
  return t;
}

/// Minimal CSV writer with fixed float formatting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt17(values[i]);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace afocal

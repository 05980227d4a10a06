// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The procalign Authors

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "procalign/solver.hpp"

namespace procalign {

void write_transform(std::ostream& out, const Matrix& t) {
  out << t.rows() << ' ' << t.cols() << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), t(r, c), std::chars_format::general, 9);
      if (c > 0) out << ' ';
      out << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_transform(const std::filesystem::path& path, const Matrix& t) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write transform " + path.string());
  write_transform(out, t);
  if (!out) throw FormatError("write failed for " + path.string());
}

OrthogonalMap read_transform(std::istream& in) {
  long rows = 0;
  long cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || rows != cols) {
    throw FormatError("transform: header must be 'd d'");
  }
  Matrix t(rows, cols);
  std::string token;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      if (!(in >> token)) throw FormatError("transform: truncated matrix");
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw FormatError("transform: bad number '" + token + "'");
      }
      t(r, c) = v;
    }
  }
  if (in >> token) throw FormatError("transform: trailing data");
  try {
    return OrthogonalMap(std::move(t));
  } catch (const ShapeError& e) {
    throw FormatError(std::string("transform: ") + e.what());
  }
}

OrthogonalMap read_transform(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open transform " + path.string());
  return read_transform(in);
}

}  // namespace procalign

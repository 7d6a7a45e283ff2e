#pragma once

#include <charconv>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "masspcf/dynamic.hpp"
#include "masspcf/matrix.hpp"
#include "masspcf/pcf.hpp"

namespace mpcf::io {

/// On-disk PCF collections:
///  - JSON: {"dtype": "f32"|"f64", "pcfs": [[[t, v], ...], ...]}; dtype
///    defaults to f64 when absent.
///  - a directory of two-column CSV files with header "t,v", one PCF per
///    file, read in lexicographic file-name order (always f64).
///  - a single such CSV file.
enum class FileKind { Json, Csv };

struct LoadedCollection {
  std::vector<AnyPcf> pcfs;
  FileKind kind = FileKind::Json;
};

/// Reads a collection. Every PCF is validated; failures raise mpcf::Error
/// whose message names the file and the offending PCF/row (or line).
LoadedCollection load(const std::filesystem::path& path);

/// Parses a JSON PCF document held in memory; `origin` labels diagnostics.
std::vector<AnyPcf> parse_json(std::string_view text, const std::string& origin);

/// Parses one "t,v" CSV document; `origin` labels diagnostics.
Pcf64 parse_csv(std::string_view text, const std::string& origin);

/// Shortest decimal text that reads back to exactly `x` in the same type.
template <Scalar T>
std::string format_number(T x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <Scalar T>
void write_json(std::ostream& os, const std::vector<Pcf<T>>& pcfs) {
  os << "{\"dtype\":\"" << (std::same_as<T, float> ? "f32" : "f64") << "\",\"pcfs\":[";
  for (std::size_t k = 0; k < pcfs.size(); ++k) {
    os << (k ? ",\n" : "\n") << '[';
    const Pcf<T>& f = pcfs[k];
    for (std::size_t i = 0; i < f.size(); ++i) {
      os << (i ? ",[" : "[") << format_number(f.time(i)) << ',' << format_number(f.value(i)) << ']';
    }
    os << ']';
  }
  os << "\n]}\n";
}

void write_json(std::ostream& os, const AnyCollection& pcfs);

template <Scalar T>
void write_csv(std::ostream& os, const Pcf<T>& f) {
  os << "t,v\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_number(f.time(i)) << ',' << format_number(f.value(i)) << '\n';
  }
}

enum class MatrixFormat { Csv, Json };

/// CSV: one line per row, no header. JSON: an array of row arrays.
template <Scalar T>
void write_matrix(std::ostream& os, const DenseMatrix<T>& m, MatrixFormat format) {
  if (format == MatrixFormat::Csv) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        os << (j ? "," : "") << format_number(m(i, j));
      }
      os << '\n';
    }
    return;
  }
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",\n[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      os << (j ? "," : "") << format_number(m(i, j));
    }
    os << ']';
  }
  os << "]\n";
}

/// Reads a CSV matrix as written by write_matrix.
template <Scalar T>
DenseMatrix<T> parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<T>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = text.size();
    }
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    std::vector<T> row;
    std::size_t cell = 0;
    while (cell <= line.size()) {
      std::size_t comma = line.find(',', cell);
      if (comma == std::string_view::npos) {
        comma = line.size();
      }
      T x{};
      const auto res = std::from_chars(line.data() + cell, line.data() + comma, x);
      if (res.ec != std::errc() || res.ptr != line.data() + comma) {
        throw Error(ErrorCode::Parse, "bad matrix cell on row " + std::to_string(rows.size()));
      }
      row.push_back(x);
      cell = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  DenseMatrix<T> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw Error(ErrorCode::Parse, "ragged matrix row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

} // namespace mpcf::io

#include "knt/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "knt/errors.hpp"

namespace knt {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& token, double* out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Io, "cannot open \"" + path + "\" for reading");
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    const auto fields = split_commas(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    std::size_t bad_column = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_double(fields[c], &values[c])) {
        numeric = false;
        bad_column = c;
        break;
      }
    }
    if (!numeric) {
      if (!saw_data && rows.empty()) continue;  // auto-detected header row
      fail(ErrorKind::Io, "non-numeric value \"" + trim(fields[bad_column]) +
                              "\" at line " + std::to_string(lineno) +
                              ", column " + std::to_string(bad_column + 1) +
                              " of \"" + path + "\"");
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      fail(ErrorKind::Io,
           "ragged CSV: line " + std::to_string(lineno) + " of \"" + path +
               "\" has " + std::to_string(values.size()) +
               " fields, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(values));
    saw_data = true;
  }
  if (rows.empty()) {
    fail(ErrorKind::Io, "\"" + path + "\" contains no numeric rows");
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::Io, "cannot open \"" + path + "\" for writing");
  }
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols()) {
      fail(ErrorKind::InvalidArgument,
           "CSV header has " + std::to_string(header.size()) +
               " fields for a matrix with " + std::to_string(m.cols()) +
               " columns");
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      out << (c ? "," : "") << header[c];
    }
    out << "\n";
  }
  char buffer[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", m(i, j));
      out << (j ? "," : "") << buffer;
    }
    out << "\n";
  }
  if (!out) {
    fail(ErrorKind::Io, "failed while writing \"" + path + "\"");
  }
}

}  // namespace knt

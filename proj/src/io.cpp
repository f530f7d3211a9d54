#include "tvvecm/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

// Splits one logical CSV record. Quoted fields may contain the delimiter,
// doubled quotes, and newlines (the caller feeds continuation lines in).
std::vector<std::string> split_record(std::istream& in, std::string line,
                                      char delim, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      if (!std::getline(in, line)) {
        throw ParseError("row " + std::to_string(row) + ": unterminated quote");
      }
      field += '\n';
      i = 0;
      continue;
    }
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // trailing CR from a CRLF file read in text mode on another platform
    } else {
      field += c;
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_cell(const std::string& field, std::size_t row,
                  const std::string& column) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
    ++pos;
  if (field.empty() || pos != field.size() || !std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                     ": cannot parse '" + field + "' as a number");
  }
  return value;
}

// ISO-8601 date/time prefixes (2020-07, 2020-07-01, 2020-07-01T...) and the
// YYYY:Mmm monthly convention both start with four digits and a separator.
bool looks_like_date(const std::string& field) {
  if (field.size() < 6) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(field[i]))) return false;
  }
  if (field[4] == '-') {
    return std::isdigit(static_cast<unsigned char>(field[5])) != 0;
  }
  if (field[4] == ':' && (field[5] == 'M' || field[5] == 'm')) {
    return field.size() > 6 &&
           std::isdigit(static_cast<unsigned char>(field[6])) != 0;
  }
  return false;
}

}  // namespace

Panel parse_panel_csv(std::istream& in, const CsvOptions& opts) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> names;
  std::ptrdiff_t skip_idx = -1;

  if (opts.header) {
    if (!std::getline(in, line)) throw ParseError("empty input");
    ++row;
    names = split_record(in, std::move(line), opts.delimiter, row);
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (!opts.skip_column.empty() && names[j] == opts.skip_column)
        skip_idx = static_cast<std::ptrdiff_t>(j);
    }
    if (!opts.skip_column.empty() && skip_idx < 0) {
      throw ParseError("column '" + opts.skip_column + "' not found in header");
    }
  } else if (!opts.skip_column.empty()) {
    std::size_t pos = 0;
    skip_idx = std::stol(opts.skip_column, &pos);
    if (pos != opts.skip_column.size() || skip_idx < 0) {
      throw ParseError("headerless input needs a numeric skip column index, got '" +
                       opts.skip_column + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::vector<std::string> fields =
        split_record(in, std::move(line), opts.delimiter, row);
    if (width == 0) {
      width = fields.size();
      if (skip_idx < 0 && opts.skip_column.empty() && width > 1 &&
          looks_like_date(fields[0])) {
        skip_idx = 0;
      }
      if (!opts.header) {
        names.resize(width);
        for (std::size_t j = 0; j < width; ++j) names[j] = "c" + std::to_string(j + 1);
        if (skip_idx >= static_cast<std::ptrdiff_t>(width)) {
          throw ParseError("skip column index " + std::to_string(skip_idx) +
                           " out of range for " + std::to_string(width) + " columns");
        }
      }
    }
    if (fields.size() != width || (opts.header && width != names.size())) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(opts.header ? names.size() : width) +
                       " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> values;
    values.reserve(width);
    for (std::size_t j = 0; j < width; ++j) {
      if (static_cast<std::ptrdiff_t>(j) == skip_idx) {
        labels.push_back(fields[j]);
        continue;
      }
      values.push_back(parse_cell(fields[j], row, names[j]));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows");

  Panel panel;
  panel.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  panel.labels = std::move(labels);
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (static_cast<std::ptrdiff_t>(j) != skip_idx) panel.columns.push_back(names[j]);
  }
  if (!opts.order.empty()) {
    if (opts.order.size() != panel.columns.size()) {
      throw ParseError("column order lists " + std::to_string(opts.order.size()) +
                       " names but the panel has " +
                       std::to_string(panel.columns.size()) + " columns");
    }
    Eigen::MatrixXd reordered(panel.values.rows(), panel.values.cols());
    for (std::size_t j = 0; j < opts.order.size(); ++j) {
      auto it = std::find(panel.columns.begin(), panel.columns.end(), opts.order[j]);
      if (it == panel.columns.end()) {
        throw ParseError("column '" + opts.order[j] + "' not found");
      }
      reordered.col(static_cast<Eigen::Index>(j)) =
          panel.values.col(it - panel.columns.begin());
    }
    panel.values = std::move(reordered);
    panel.columns = opts.order;
  }
  return panel;
}

Panel load_panel_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_panel_csv(in, opts);
}

void write_paths_csv(std::ostream& out, const LocalLinearFit& fit,
                     const CiBands& bands) {
  const Eigen::Index d = fit.d();
  const Eigen::Index m = static_cast<Eigen::Index>(d) * fit.p;
  auto name = [&](Eigen::Index i, Eigen::Index j) {
    if (j < d) {
      return "pi_" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    Eigen::Index lag = (j - d) / d + 1;
    Eigen::Index col = (j - d) % d;
    return "gamma" + std::to_string(lag) + "_" + std::to_string(i + 1) +
           std::to_string(col + 1);
  };

  out << "t,tau";
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      std::string base = name(i, j);
      out << ',' << base << ',' << base << "_se" << ',' << base << "_lo" << ','
          << base << "_hi";
    }
  }
  out << '\n';
  out.precision(12);
  for (Eigen::Index k = 0; k < fit.grid.size(); ++k) {
    out << (fit.frame.t0 + k) << ',' << fit.grid[k];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double est = j < d ? fit.Pi[k](i, j) : fit.Gamma[k](i, j - d);
        out << ',' << est << ',' << bands.se[k](i, j) << ',' << bands.lo[k](i, j)
            << ',' << bands.hi[k](i, j);
      }
    }
    out << '\n';
  }
}

nlohmann::json panel_to_json(const Panel& panel) {
  nlohmann::json j;
  j["columns"] = panel.columns;
  std::vector<std::vector<double>> rows(panel.T());
  for (Eigen::Index t = 0; t < panel.T(); ++t) {
    rows[t].assign(panel.values.row(t).begin(), panel.values.row(t).end());
  }
  j["values"] = rows;
  return j;
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
  for (std::size_t j = 0; j < panel.columns.size(); ++j) {
    out << (j ? "," : "") << panel.columns[j];
  }
  out << '\n';
  out.precision(12);
  for (Eigen::Index t = 0; t < panel.T(); ++t) {
    for (Eigen::Index j = 0; j < panel.d(); ++j) {
      out << (j ? "," : "") << panel.values(t, j);
    }
    out << '\n';
  }
}

}  // namespace tvvecm

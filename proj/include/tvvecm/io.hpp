#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "tvvecm/local_linear.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

struct CsvOptions {
  bool header = true;
  char delimiter = ',';
  // Column dropped before building the panel (typically a date or index
  // column); empty keeps every column. A first column whose values look like
  // dates (ISO-8601 or YYYY:Mmm) is dropped automatically when unset.
  std::string skip_column;
  // Permutation of the kept column names applied after parsing; the first
  // columns form the normalized block. Empty keeps file order.
  std::vector<std::string> order;
};

// RFC 4180 style parsing: quoted fields, embedded delimiters and quotes,
// CRLF line endings. Every kept field must parse as a finite double.
Panel parse_panel_csv(std::istream& in, const CsvOptions& opts = {});
Panel load_panel_csv(const std::string& path, const CsvOptions& opts = {});

// One row per grid point: t, tau, then estimate/se/lo/hi per coefficient.
void write_paths_csv(std::ostream& out, const LocalLinearFit& fit,
                     const CiBands& bands);

nlohmann::json panel_to_json(const Panel& panel);
void write_panel_csv(std::ostream& out, const Panel& panel);

}  // namespace tvvecm

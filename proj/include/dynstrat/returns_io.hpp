#pragma once

// Return series files: CSV with a header naming date, return and
// optionally asset columns.

#include <Eigen/Dense>
#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

namespace dynstrat {

struct ReturnRow {
  std::chrono::sys_seconds time;
  double value = 0;
  std::string asset;
  long line = 0;
};

struct ReturnsFile {
  std::vector<ReturnRow> rows;
  bool has_asset = false;

  std::vector<std::string> assets() const;  // in order of first appearance
  // Single-asset files accept an empty name.
  std::vector<double> series(const std::string& asset = "") const;
  // T x N, one column per asset; every asset must share the same timestamps.
  Eigen::MatrixXd aligned(std::vector<std::string>* names = nullptr) const;
};

ReturnsFile read_returns_csv(std::istream& in);
ReturnsFile read_returns_file(const std::string& path);

// Accepts YYYY-MM-DD or YYYY-MM-DDTHH:MM[:SS][Z].
bool parse_iso_timestamp(const std::string& text, std::chrono::sys_seconds& out);
std::string format_iso_date(std::chrono::sys_days day);

// date,return rows on consecutive calendar days from start.
void write_returns_csv(std::ostream& out, const std::vector<double>& returns,
                       std::chrono::sys_days start = std::chrono::sys_days{std::chrono::year{2000} / 1 / 3});

// %.17g
std::string format_double(double x);

}  // namespace dynstrat

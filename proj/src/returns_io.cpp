#include "dynstrat/returns_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dynstrat/errors.hpp"

namespace dynstrat {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  const auto e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool parse_iso_timestamp(const std::string& text, std::chrono::sys_seconds& out) {
  using namespace std::chrono;
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail[8] = {0};
  int n = 0;
  if (text.size() == 10) {
    if (std::sscanf(text.c_str(), "%4d-%2u-%2u%n", &y, &mo, &d, &n) != 3 || n != 10) return false;
  } else {
    const int got = std::sscanf(text.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%7s", &y, &mo, &d, &h, &mi, &s, tail);
    if (got < 5) return false;
    if (got < 6) {
      if (std::sscanf(text.c_str(), "%4d-%2u-%2uT%2u:%2u%n", &y, &mo, &d, &h, &mi, &n) != 5) return false;
      const std::string rest = text.substr(static_cast<std::size_t>(n));
      if (!rest.empty() && rest != "Z") return false;
    } else if (tail[0] && std::string(tail) != "Z") {
      return false;
    }
    if (h > 23 || mi > 59 || s > 60) return false;
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return false;
  out = sys_seconds{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s};
  return true;
}

std::string format_iso_date(std::chrono::sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

ReturnsFile read_returns_csv(std::istream& in) {
  std::string line;
  long lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(lineno ? lineno : 1, "missing header row");
  int date_col = -1, ret_col = -1, asset_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = lower(header[i]);
    if (h == "date" || h == "timestamp" || h == "time") date_col = static_cast<int>(i);
    else if (h == "return" || h == "returns" || h == "ret") ret_col = static_cast<int>(i);
    else if (h == "asset" || h == "asset_id" || h == "symbol") asset_col = static_cast<int>(i);
  }
  if (date_col < 0 || ret_col < 0) throw ParseError(lineno, "header must name a date and a return column");

  ReturnsFile file;
  file.has_asset = asset_col >= 0;
  std::map<std::string, std::chrono::sys_seconds> last;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    ReturnRow row;
    row.line = lineno;
    if (!parse_iso_timestamp(f[static_cast<std::size_t>(date_col)], row.time))
      throw ParseError(lineno, "invalid ISO-8601 date '" + f[static_cast<std::size_t>(date_col)] + "'");
    const std::string& num = f[static_cast<std::size_t>(ret_col)];
    const char* b = num.data();
    const char* e = b + num.size();
    if (b != e && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, row.value);
    if (ec != std::errc() || ptr != e || num.empty()) throw ParseError(lineno, "invalid return value '" + num + "'");
    if (!std::isfinite(row.value)) throw ParseError(lineno, "return value is not finite");
    if (file.has_asset) row.asset = f[static_cast<std::size_t>(asset_col)];
    auto it = last.find(row.asset);
    if (it != last.end() && row.time <= it->second)
      throw ParseError(lineno, "timestamps must be strictly increasing" + (row.asset.empty() ? std::string() : " for asset " + row.asset));
    last[row.asset] = row.time;
    file.rows.push_back(std::move(row));
  }
  if (file.rows.empty()) throw ParseError(lineno, "file has no data rows");
  return file;
}

ReturnsFile read_returns_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open returns file '" + path + "'");
  return read_returns_csv(in);
}

std::vector<std::string> ReturnsFile::assets() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.asset) == out.end()) out.push_back(r.asset);
  return out;
}

std::vector<double> ReturnsFile::series(const std::string& asset) const {
  const auto names = assets();
  std::string pick = asset;
  if (pick.empty()) {
    require(names.size() == 1, ErrorKind::validation, "file holds several assets; choose one");
    pick = names[0];
  }
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.asset == pick) out.push_back(r.value);
  require(!out.empty(), ErrorKind::validation, "asset '" + pick + "' not found in the returns file");
  return out;
}

Eigen::MatrixXd ReturnsFile::aligned(std::vector<std::string>* names) const {
  const auto a = assets();
  std::vector<std::vector<std::chrono::sys_seconds>> times(a.size());
  std::vector<std::vector<double>> vals(a.size());
  for (const auto& r : rows) {
    const auto i = static_cast<std::size_t>(std::find(a.begin(), a.end(), r.asset) - a.begin());
    times[i].push_back(r.time);
    vals[i].push_back(r.value);
  }
  for (std::size_t i = 1; i < a.size(); ++i)
    require(times[i] == times[0], ErrorKind::degenerate, "assets do not share the same timestamps");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vals[0].size()), static_cast<Eigen::Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t t = 0; t < vals[j].size(); ++t) m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = vals[j][t];
  if (names) *names = a;
  return m;
}

void write_returns_csv(std::ostream& out, const std::vector<double>& returns, std::chrono::sys_days start) {
  out << "date,return\n";
  for (std::size_t i = 0; i < returns.size(); ++i)
    out << format_iso_date(start + std::chrono::days{static_cast<long>(i)}) << ',' << format_double(returns[i]) << '\n';
}

}  // namespace dynstrat

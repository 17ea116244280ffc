#include "icpc/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "icpc/errors.hpp"

namespace icpc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ValidationError("non-numeric cell in column " + col + " at row " +
                          std::to_string(row));
  return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError("empty file: " + path.string());
  return lines;
}

// Maps header names to column indices; throws naming the first missing one.
std::map<std::string, std::size_t> index_header(
    const std::vector<std::string>& header,
    const std::vector<std::string>& required) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[header[i]] = i;
  for (const auto& name : required)
    if (!idx.count(name))
      throw ValidationError("missing column: " + name);
  return idx;
}

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  for (const auto& line : lines) out << line << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

TimeSeriesDataset load_timeseries_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto header = split_csv_line(lines[0]);
  const auto idx = index_header(header, {"period", "pi", "pi_e", "ygap", "cinf"});
  const bool with_u = idx.count("u") > 0;

  struct Row {
    std::string period;
    double pi, pi_e, ygap, cinf, u;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_csv_line(lines[r]);
    if (fields.size() != header.size())
      throw ValidationError("wrong field count at row " + std::to_string(r + 1));
    Row row;
    row.period = fields[idx.at("period")];
    row.pi = parse_cell(fields[idx.at("pi")], r + 1, "pi");
    row.pi_e = parse_cell(fields[idx.at("pi_e")], r + 1, "pi_e");
    row.ygap = parse_cell(fields[idx.at("ygap")], r + 1, "ygap");
    row.cinf = parse_cell(fields[idx.at("cinf")], r + 1, "cinf");
    row.u = with_u ? parse_cell(fields[idx.at("u")], r + 1, "u") : 0.0;
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.period < b.period; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].period == rows[i - 1].period)
      throw ValidationError("duplicate period " + rows[i].period + " at row " +
                            std::to_string(i + 2));

  TimeSeriesDataset data;
  for (auto& row : rows) {
    data.period.push_back(std::move(row.period));
    data.pi.push_back(row.pi);
    data.pi_e.push_back(row.pi_e);
    data.ygap.push_back(row.ygap);
    data.cinf.push_back(row.cinf);
    if (with_u) data.u.push_back(row.u);
  }
  data.validate();
  return data;
}

void save_timeseries_csv(const std::filesystem::path& path,
                         const TimeSeriesDataset& data) {
  data.validate();
  std::vector<std::string> lines;
  lines.reserve(data.size() + 1);
  lines.push_back(data.has_u() ? "period,pi,pi_e,ygap,cinf,u"
                               : "period,pi,pi_e,ygap,cinf");
  for (std::size_t t = 0; t < data.size(); ++t) {
    std::string line = data.period[t] + ',' + format_double(data.pi[t]) + ',' +
                       format_double(data.pi_e[t]) + ',' +
                       format_double(data.ygap[t]) + ',' +
                       format_double(data.cinf[t]);
    if (data.has_u()) line += ',' + format_double(data.u[t]);
    lines.push_back(std::move(line));
  }
  write_lines(path, lines);
}

PanelDataset load_panel_csv(const std::filesystem::path& path,
                            PanelAlignment alignment) {
  const auto lines = read_lines(path);
  const auto header = split_csv_line(lines[0]);
  const auto idx =
      index_header(header, {"country", "period", "pi_core", "cinf", "ygap"});

  struct Cell {
    double pi_core, cinf, ygap;
  };
  std::map<std::string, std::map<std::string, Cell>> by_country;
  std::set<std::string> calendar;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_csv_line(lines[r]);
    if (fields.size() != header.size())
      throw ValidationError("wrong field count at row " + std::to_string(r + 1));
    const std::string country = fields[idx.at("country")];
    const std::string period = fields[idx.at("period")];
    Cell cell{parse_cell(fields[idx.at("pi_core")], r + 1, "pi_core"),
              parse_cell(fields[idx.at("cinf")], r + 1, "cinf"),
              parse_cell(fields[idx.at("ygap")], r + 1, "ygap")};
    if (!by_country[country].emplace(period, cell).second)
      throw ValidationError("duplicate period " + period + " for country " +
                            country + " at row " + std::to_string(r + 1));
    calendar.insert(period);
  }

  // Alignment against the union calendar.
  std::vector<std::string> periods(calendar.begin(), calendar.end());
  std::size_t dropped = 0;
  if (alignment == PanelAlignment::kStrict) {
    for (const auto& [country, cells] : by_country)
      for (const auto& period : periods)
        if (!cells.count(period))
          throw ValidationError("gap: country " + country +
                                " is missing period " + period);
  } else {
    std::vector<std::string> complete;
    for (const auto& period : periods) {
      bool all = true;
      for (const auto& [country, cells] : by_country)
        if (!cells.count(period)) {
          all = false;
          break;
        }
      if (all)
        complete.push_back(period);
      else
        ++dropped;
    }
    periods = std::move(complete);
  }
  if (periods.size() < 2)
    throw ValidationError("panel: fewer than 2 usable periods after alignment");

  PanelDataset data;
  data.balanced = dropped == 0;
  data.dropped_periods = dropped;
  // The first calendar period only seeds the lagged regressor.
  data.periods.assign(periods.begin() + 1, periods.end());
  for (const auto& [country, cells] : by_country) {
    data.countries.push_back(country);
    std::vector<double> pi, lag, y, level;
    for (std::size_t s = 1; s < periods.size(); ++s) {
      const Cell& cur = cells.at(periods[s]);
      const Cell& prev = cells.at(periods[s - 1]);
      pi.push_back(cur.pi_core);
      lag.push_back(prev.cinf);
      y.push_back(cur.ygap);
      level.push_back(cur.cinf);
    }
    data.pi_core.push_back(std::move(pi));
    data.cinf_lag1.push_back(std::move(lag));
    data.ygap.push_back(std::move(y));
    data.cinf_level.push_back(std::move(level));
  }
  data.validate();
  return data;
}

void save_panel_csv(const std::filesystem::path& path, const PanelDataset& data) {
  data.validate();
  if (data.cinf_level.empty())
    throw ValidationError("panel: cinf level series required to save CSV");
  std::vector<std::string> lines;
  lines.push_back("country,period,pi_core,cinf,ygap");
  for (std::size_t j = 0; j < data.n_units(); ++j)
    for (std::size_t s = 0; s < data.t_len(); ++s)
      lines.push_back(data.countries[j] + ',' + data.periods[s] + ',' +
                      format_double(data.pi_core[j][s]) + ',' +
                      format_double(data.cinf_level[j][s]) + ',' +
                      format_double(data.ygap[j][s]));
  write_lines(path, lines);
}

void save_density_csv(const std::filesystem::path& path,
                      const DensityGrid& grid) {
  grid.validate();
  std::vector<std::string> lines;
  lines.reserve(grid.m + 1);
  lines.push_back("cell_center,density");
  for (std::size_t j = 0; j < grid.m; ++j)
    lines.push_back(format_double(grid.cell_center(j)) + ',' +
                    format_double(grid.values[j]));
  write_lines(path, lines);
}

void save_scaling_points_csv(const std::filesystem::path& path,
                             const ScalingResult& result) {
  std::vector<std::string> lines;
  lines.reserve(result.points.size() + 1);
  lines.push_back("lambda_bar,kappa_inf_hat");
  for (const auto& [lam, ki] : result.points)
    lines.push_back(format_double(lam) + ',' + format_double(ki));
  write_lines(path, lines);
}

}  // namespace icpc

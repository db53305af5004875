#include "ingarch/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ingarch {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw CsvError(line, "invalid numeric field '" + field + "'");
  return value;
}

long parse_long(const std::string& field, std::size_t line) {
  long value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw CsvError(line, "invalid integer field '" + field + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Panel read_panel_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open panel file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  if (!line.empty() && line.back() == '\r') throw CsvError(1, "CRLF line endings are not supported");
  const auto header = split_fields(line);
  if (header.size() < 4 || header[0] != "entity_id" || header[1] != "period" ||
      header[2] != "claims" || header[3] != "exposure")
    throw CsvError(1, "header must start with entity_id,period,claims,exposure");
  std::vector<std::string> covariate_names(header.begin() + 4, header.end());

  std::vector<PanelObservation> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line.back() == '\r') throw CsvError(line_number, "CRLF line endings are not supported");
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw CsvError(line_number, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
    PanelObservation row;
    if (fields[0].empty()) throw CsvError(line_number, "empty entity_id");
    row.entity_id = fields[0];
    row.period = parse_long(fields[1], line_number);
    if (!fields[2].empty()) {
      const long count = parse_long(fields[2], line_number);
      if (count < 0) throw CsvError(line_number, "negative claims count");
      row.count = count;
    }
    const long exposure = parse_long(fields[3], line_number);
    if (exposure != 0 && exposure != 1) throw CsvError(line_number, "exposure must be 0 or 1");
    row.exposure = static_cast<std::uint8_t>(exposure);
    row.covariates.reserve(covariate_names.size());
    for (std::size_t j = 4; j < fields.size(); ++j)
      row.covariates.push_back(parse_double(fields[j], line_number));
    rows.push_back(std::move(row));
  }
  try {
    return Panel::assemble(std::move(rows), std::move(covariate_names));
  } catch (const std::runtime_error& err) {
    throw std::runtime_error(std::string("panel '") + path + "': " + err.what());
  }
}

void write_panel_csv(const std::string& path, const Panel& panel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write panel file '" + path + "'");
  out << "entity_id,period,claims,exposure";
  for (const auto& name : panel.covariate_names) out << ',' << name;
  out << '\n';
  for (const auto& series : panel.entities) {
    for (const auto& row : series.rows) {
      if (row.gap_filler) continue;
      out << row.entity_id << ',' << row.period << ',';
      if (row.count) out << *row.count;
      out << ',' << static_cast<int>(row.exposure);
      for (double x : row.covariates) out << ',' << format_double(x);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace ingarch

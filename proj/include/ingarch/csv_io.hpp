#pragma once

#include <string>
#include <vector>

#include "ingarch/panel.hpp"

namespace ingarch {

// Panel CSV schema: header `entity_id,period,claims,exposure,<covariate...>`,
// an empty claims field marks a recorded-as-missing count, exposure is 0 or 1,
// UTF-8 with LF line endings and '.' decimal separator. Numbers are written
// with shortest round-trip formatting, so emit(parse(x)) is byte-identical.

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

struct CsvError : std::runtime_error {
  std::size_t line;  // 1-based, header included
  CsvError(std::size_t line_number, const std::string& what)
      : std::runtime_error("csv line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

Panel read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const Panel& panel);

}  // namespace ingarch

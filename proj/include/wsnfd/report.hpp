// report.hpp -- plain tables rendered either as aligned text or as CSV.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsnfd {

enum class OutputFormat {
  text,
  csv,
};

class Table {
public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  void render(std::ostream& out, OutputFormat format) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Numeric cell with 8 significant digits, trailing zeros kept; "nan"/"inf"/"-inf" for non-finite values.
[[nodiscard]] std::string num(double v);
/// Fixed decimals, used for human-facing rule strings.
[[nodiscard]] std::string fixed(double v, int decimals);

}  // namespace wsnfd

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfcs {

/// Shortest decimal text that reads back as the same double ("%.17g" form).
std::string format_real(double x);

/// Column-named table written as CSV. Rows keep insertion order.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  /// Throws Error when the row width differs from the header.
  void add_row(std::vector<std::string> cells);

  void write_csv(std::ostream& out) const;
  /// Throws Error when the file cannot be written.
  void write_csv(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` to `path`, throwing Error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qfcs

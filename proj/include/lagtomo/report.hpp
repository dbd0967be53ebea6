// Experiment reports: a table of rows written as CSV and a JSON summary
// {experiment, pass, rows, worst_margin}.
#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace lagtomo {

using Cell = std::variant<double, long, std::string, bool>;

struct Attachment {
  std::string filename;
  std::string content;
};

class Report {
public:
  Report(std::string experiment, std::vector<std::string> columns);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void add_row(std::vector<Cell> row);
  /// Column index by name; throws if absent.
  std::size_t column(const std::string& name) const;
  /// Numeric cell (double or integer) of row r in the named column.
  double number(std::size_t r, const std::string& name) const;
  /// Marks the report failed and records `why`.
  void fail(const std::string& why);
  /// An asserted inequality lhs >= rhs contributes lhs - rhs (scaled as the
  /// caller sees fit) to the worst margin.
  void record_margin(double margin);
  void note(const std::string& text) { notes_.push_back(text); }
  void attach(std::string filename, std::string content);

  /// Distinguished outcome besides pass/fail, e.g. "DEGENERATE".
  void set_status(std::string status) { status_ = std::move(status); }
  const std::string& status() const { return status_; }

  bool pass() const { return pass_; }
  double worst_margin() const { return worst_margin_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<Attachment>& attachments() const { return attachments_; }

  std::string csv() const;
  nlohmann::json summary() const;

private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  bool pass_ = true;
  double worst_margin_ = std::numeric_limits<double>::infinity();
  std::string status_;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::vector<Attachment> attachments_;
};

/// Round-trip decimal form (%.17g), with inf/nan spelled out.
std::string format_double(double v);

}  // namespace lagtomo

#include "lagtomo/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lagtomo {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Report::Report(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("report row has the wrong width");
  rows_.push_back(std::move(row));
}

std::size_t Report::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw std::out_of_range("report has no column " + name);
}

double Report::number(std::size_t r, const std::string& name) const {
  const Cell& c = rows_.at(r).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* l = std::get_if<long>(&c)) return static_cast<double>(*l);
  throw std::invalid_argument("report cell " + name + " is not numeric");
}

void Report::fail(const std::string& why) {
  pass_ = false;
  failures_.push_back(why);
}

void Report::record_margin(double margin) {
  if (margin < worst_margin_) worst_margin_ = margin;
}

void Report::attach(std::string filename, std::string content) {
  attachments_.push_back({std::move(filename), std::move(content)});
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string q = "\"";
      for (char ch : v) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace

std::string Report::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json Report::summary() const {
  nlohmann::json j;
  j["experiment"] = experiment_;
  j["pass"] = pass_;
  j["rows"] = rows_.size();
  // JSON has no infinity; a report without asserted inequalities has no margin.
  if (std::isfinite(worst_margin_)) {
    j["worst_margin"] = worst_margin_;
  } else {
    j["worst_margin"] = nullptr;
  }
  if (!status_.empty()) j["status"] = status_;
  if (!failures_.empty()) j["failures"] = failures_;
  if (!notes_.empty()) j["notes"] = notes_;
  return j;
}

}  // namespace lagtomo

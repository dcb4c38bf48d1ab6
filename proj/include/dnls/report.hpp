#pragma once

#include "dnls/norms.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dnls {

/// Per-slice norm history of a space-time field plus scalar summaries.
struct NormReport {
  std::vector<double> t;
  std::vector<double> h2;
  std::vector<double> weighted_r;
  std::vector<double> sup;
  std::optional<std::vector<double>> constraint_residual;

  double triple = 0.0;
  double x_norm = 0.0;
  double y_norm = 0.0;
  double r = 0.0;

  std::size_t size() const { return t.size(); }

  /// Columns t,h2,weighted_r,sup,constraint_residual; empty last column when
  /// no residual was recorded.
  void write_csv(std::ostream& os) const;
  nlohmann::json summary_json() const;
};

NormReport build_norm_report(const SpaceTimeField& F, double r,
                             std::optional<std::vector<double>> constraint_residual = std::nullopt);

/// 17 significant digits, locale independent.
std::string format_real(double v);

/// Minimal CSV table: header plus rows of already formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> cells);
  void write(std::ostream& os) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dnls

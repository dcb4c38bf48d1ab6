#include "dnls/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dnls {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("csv: row width mismatch");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& os) const {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

void NormReport::write_csv(std::ostream& os) const {
  CsvTable table({"t", "h2", "weighted_r", "sup", "constraint_residual"});
  for (std::size_t m = 0; m < t.size(); ++m) {
    table.add_row({format_real(t[m]), format_real(h2[m]), format_real(weighted_r[m]),
                   format_real(sup[m]),
                   constraint_residual ? format_real((*constraint_residual)[m]) : std::string()});
  }
  table.write(os);
}

nlohmann::json NormReport::summary_json() const {
  nlohmann::json j{{"triple", triple}, {"x_norm", x_norm}, {"y_norm", y_norm}, {"r", r},
                   {"slices", t.size()}};
  if (constraint_residual && !constraint_residual->empty()) {
    double mx = 0.0;
    for (double v : *constraint_residual) mx = std::max(mx, v);
    j["max_constraint_residual"] = mx;
  }
  return j;
}

NormReport build_norm_report(const SpaceTimeField& F, double r,
                             std::optional<std::vector<double>> constraint_residual) {
  if (constraint_residual && constraint_residual->size() != F.slices().size()) {
    throw std::invalid_argument("norm report: residual series length mismatch");
  }
  NormReport rep;
  rep.r = r;
  rep.t = F.times();
  for (const auto& s : F.slices()) {
    rep.h2.push_back(sobolev_norm(s, 2.0));
    rep.weighted_r.push_back(weighted_norm(s, r));
    rep.sup.push_back(lp_norm(s, kInfinity));
  }
  rep.constraint_residual = std::move(constraint_residual);
  rep.triple = triple_norm(F);
  rep.y_norm = y_norm(F);
  rep.x_norm = rep.y_norm + weighted_sup_norm(F, r);
  return rep;
}

}  // namespace dnls

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "axd/design_matrix.hpp"
#include "axd/distributions.hpp"
#include "axd/tank.hpp"

namespace axd {

/// Acceptable FR values: nominal - tol_minus .. nominal + tol_plus.
struct DesignRange {
  double nominal = 0.0;
  double tol_minus = 0.0;
  double tol_plus = 0.0;
  friend bool operator==(const DesignRange&, const DesignRange&) = default;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline Bounds range_bounds(const DesignRange& r) {
  return {r.nominal - r.tol_minus, r.nominal + r.tol_plus};
}

inline DesignRange symmetric_range(double nominal, double tolerance) {
  return {nominal, tolerance, tolerance};
}

struct FunctionalRequirement {
  std::string id;
  std::string description;
  DesignRange design_range;
  std::string unit;  // display only
  friend bool operator==(const FunctionalRequirement&, const FunctionalRequirement&) = default;
};

struct DesignParameter {
  std::string id;
  std::string description;
  double nominal = 0.0;
  std::optional<Pdf> uncertainty;
  friend bool operator==(const DesignParameter&, const DesignParameter&) = default;
};

/// Monte Carlo budget. Results depend only on seed and n_samples; workers
/// changes wall time, never output.
struct McConfig {
  std::uint64_t seed = 0;
  std::size_t n_samples = 100000;
  unsigned workers = 1;
  friend bool operator==(const McConfig& a, const McConfig& b) {
    return a.seed == b.seed && a.n_samples == b.n_samples;
  }
};

struct DesignSpec {
  std::vector<FunctionalRequirement> frs;
  std::vector<DesignParameter> dps;
  std::optional<DesignMatrix> matrix;
  std::map<std::string, Pdf> system_pdfs;  // by FR id
  std::map<std::string, Pdf> noise_pdfs;   // by FR id
  double epsilon = 0.0;
  std::optional<TankConfig> scenario;
  std::optional<McConfig> mc;
  std::string notes;

  std::vector<DesignRange> ranges() const {
    std::vector<DesignRange> out;
    for (const auto& fr : frs) out.push_back(fr.design_range);
    return out;
  }
  std::vector<std::string> fr_ids() const {
    std::vector<std::string> out;
    for (const auto& fr : frs) out.push_back(fr.id);
    return out;
  }
  std::vector<std::string> dp_ids() const {
    std::vector<std::string> out;
    for (const auto& dp : dps) out.push_back(dp.id);
    return out;
  }

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;
};

struct Violation {
  std::string subject;  // FR/DP id or field name
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

namespace detail {

inline void check_range(const FunctionalRequirement& fr, std::vector<Violation>& out) {
  const auto& r = fr.design_range;
  if (!std::isfinite(r.nominal) || !std::isfinite(r.tol_minus) || !std::isfinite(r.tol_plus)) {
    out.push_back({fr.id, "design range values must be finite"});
    return;
  }
  if (r.tol_minus < 0.0 || r.tol_plus < 0.0) {
    out.push_back({fr.id, "tolerances must be non-negative"});
    return;
  }
  if (r.tol_minus == 0.0 && r.tol_plus == 0.0) out.push_back({fr.id, "zero-width design range"});
}

}  // namespace detail

/// Every broken invariant of `spec`; empty means valid.
inline std::vector<Violation> validate_spec(const DesignSpec& spec) {
  std::vector<Violation> out;

  if (spec.frs.empty()) out.push_back({"frs", "spec declares no functional requirements"});

  std::set<std::string> fr_ids, dp_ids;
  for (const auto& fr : spec.frs) {
    if (fr.id.empty()) out.push_back({"frs", "FR with empty id"});
    if (!fr_ids.insert(fr.id).second) out.push_back({fr.id, "duplicate FR id"});
    detail::check_range(fr, out);
  }
  for (const auto& dp : spec.dps) {
    if (dp.id.empty()) out.push_back({"dps", "DP with empty id"});
    if (!dp_ids.insert(dp.id).second) out.push_back({dp.id, "duplicate DP id"});
    if (!std::isfinite(dp.nominal)) out.push_back({dp.id, "DP nominal must be finite"});
    if (dp.uncertainty)
      if (auto msg = check_pdf(*dp.uncertainty)) out.push_back({dp.id, "uncertainty: " + *msg});
  }

  if (spec.matrix) {
    if (spec.matrix->rows() != spec.frs.size())
      out.push_back({"matrix", "matrix has " + std::to_string(spec.matrix->rows()) +
                                   " rows but spec has " + std::to_string(spec.frs.size()) +
                                   " FRs"});
    if (spec.matrix->cols() != spec.dps.size())
      out.push_back({"matrix", "matrix has " + std::to_string(spec.matrix->cols()) +
                                   " columns but spec has " + std::to_string(spec.dps.size()) +
                                   " DPs"});
  }

  for (const auto* table : {&spec.system_pdfs, &spec.noise_pdfs}) {
    const char* name = table == &spec.system_pdfs ? "system_pdfs" : "noise_pdfs";
    for (const auto& [id, pdf] : *table) {
      if (!fr_ids.count(id)) out.push_back({id, std::string(name) + " entry for unknown FR"});
      if (auto msg = check_pdf(pdf)) out.push_back({id, std::string(name) + ": " + *msg});
    }
  }

  for (const auto& fr : spec.frs)
    if (!spec.system_pdfs.count(fr.id) && !spec.matrix)
      out.push_back({fr.id, "FR has no system range source"});

  if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon))
    out.push_back({"epsilon", "epsilon must be finite and >= 0"});

  if (spec.scenario)
    for (const auto& msg : check_tank_config(*spec.scenario)) out.push_back({"scenario", msg});

  if (spec.mc && spec.mc->n_samples < 1)
    out.push_back({"mc", "n_samples must be positive"});

  return out;
}

}  // namespace axd

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "axd/coupling.hpp"
#include "axd/info_content.hpp"
#include "axd/json_text.hpp"
#include "axd/propagation.hpp"
#include "axd/spec_model.hpp"

namespace axd {

enum class MethodRequest { Auto, Analytic, Chain, Joint };

inline std::optional<MethodRequest> parse_method(const std::string& s) {
  if (s == "auto") return MethodRequest::Auto;
  if (s == "analytic") return MethodRequest::Analytic;
  if (s == "chain") return MethodRequest::Chain;
  if (s == "joint") return MethodRequest::Joint;
  return std::nullopt;
}

/// Everything the info command reports about one spec.
struct AnalysisReport {
  std::vector<std::string> fr_ids;
  std::vector<std::string> dp_ids;
  std::optional<CouplingClassification> classification;
  SystemInfoReport info;
  std::vector<DesignRange> ranges;
  std::vector<std::string> pdf_summaries;  // per FR
  std::vector<std::string> warnings;
};

/// Linear model FR = A * DP + noise when the spec has a matrix. Without a
/// matrix each FR is drawn independently from its system pdf (identity map).
inline LinearModel build_forward_model(const DesignSpec& spec) {
  LinearModel model;
  if (spec.matrix) {
    model.matrix = *spec.matrix;
    for (const auto& dp : spec.dps)
      model.dp_pdfs.push_back(dp.uncertainty ? *dp.uncertainty : point_mass(dp.nominal));
    if (!spec.noise_pdfs.empty()) {
      model.noise_pdfs.resize(spec.frs.size());
      for (std::size_t i = 0; i < spec.frs.size(); ++i)
        if (auto it = spec.noise_pdfs.find(spec.frs[i].id); it != spec.noise_pdfs.end())
          model.noise_pdfs[i] = it->second;
    }
    return model;
  }
  model.matrix = DesignMatrix::identity(spec.frs.size());
  for (const auto& fr : spec.frs) {
    const auto it = spec.system_pdfs.find(fr.id);
    if (it == spec.system_pdfs.end())
      throw MethodInapplicable("FR " + fr.id + " has neither a system pdf nor a matrix row");
    model.dp_pdfs.push_back(it->second);
  }
  return model;
}

/// Picks and runs an estimator.
///
/// Auto uses the closed form when every FR has its own system pdf and the
/// FRs are independent (uncoupled matrix, or no matrix at all). Otherwise a
/// decoupled design runs the conditional chain along its adjustment
/// sequence, and anything else runs the joint Monte Carlo estimate.
inline AnalysisReport analyze(const DesignSpec& spec, MethodRequest request, const McConfig& mc) {
  AnalysisReport rep;
  rep.fr_ids = spec.fr_ids();
  rep.dp_ids = spec.dp_ids();
  rep.ranges = spec.ranges();

  if (spec.matrix) {
    rep.classification = classify(*spec.matrix, spec.epsilon);
    if (rep.classification->kind() == CouplingKind::Degenerate)
      rep.warnings.push_back(std::string("degenerate design matrix: ") +
                             to_string(rep.classification->as<Degenerate>().reason));
  }
  const auto kind = rep.classification ? std::optional(rep.classification->kind()) : std::nullopt;

  bool all_direct = true;
  for (const auto& fr : spec.frs) all_direct = all_direct && spec.system_pdfs.count(fr.id);
  const bool independent = !kind || *kind == CouplingKind::Uncoupled;

  MethodRequest method = request;
  if (method == MethodRequest::Auto) {
    if (all_direct && independent) method = MethodRequest::Analytic;
    else if (kind == CouplingKind::Decoupled) method = MethodRequest::Chain;
    else method = MethodRequest::Joint;
  }

  for (const auto& fr : spec.frs) {
    if (method == MethodRequest::Analytic || !spec.matrix) {
      const auto it = spec.system_pdfs.find(fr.id);
      rep.pdf_summaries.push_back(it != spec.system_pdfs.end() ? describe(it->second) : "none");
    } else {
      rep.pdf_summaries.push_back("linear model");
    }
  }

  const auto ranges = rep.ranges;
  switch (method) {
    case MethodRequest::Analytic: {
      if (!all_direct)
        throw MethodInapplicable("analytic method needs a system pdf for every FR");
      if (!independent)
        throw MethodInapplicable(std::string("analytic method needs independent FRs, design is ") +
                                 to_string(rep.classification->kind()));
      std::vector<InfoResult> per_fr;
      for (const auto& fr : spec.frs)
        per_fr.push_back(fr_information(spec.system_pdfs.at(fr.id), fr.design_range));
      rep.info = system_information_independent(per_fr);
      break;
    }
    case MethodRequest::Chain: {
      const auto model = build_forward_model(spec);
      std::vector<std::size_t> order;
      if (kind == CouplingKind::Uncoupled || kind == CouplingKind::Decoupled) {
        for (const auto& p : sequence(*rep.classification)) order.push_back(p.fr);
      } else {
        for (std::size_t i = 0; i < spec.frs.size(); ++i) order.push_back(i);
        if (rep.classification)
          rep.warnings.push_back(std::string("conditional chain on a ") +
                                 to_string(rep.classification->kind()) +
                                 " design uses declaration order, which is not an adjustment "
                                 "sequence");
      }
      rep.info = conditional_chain_information(model, order, ranges, mc);
      break;
    }
    case MethodRequest::Joint:
    case MethodRequest::Auto: {
      const auto model = build_forward_model(spec);
      rep.info = system_information_joint(model, ranges, mc);
      break;
    }
  }
  for (const auto& w : rep.info.warnings) rep.warnings.push_back(w);
  return rep;
}

inline Json pair_json(const FrDpPair& p, const std::vector<std::string>& fr_ids,
                      const std::vector<std::string>& dp_ids) {
  return Json{{"fr", fr_ids.at(p.fr)}, {"dp", dp_ids.at(p.dp)}};
}

/// {"class", "sequence", "blocks", "reason"}; unused members are empty/null.
inline Json classification_json(const CouplingClassification& c,
                                 const std::vector<std::string>& fr_ids,
                                 const std::vector<std::string>& dp_ids) {
  Json seq = Json::array(), blocks = Json::array(), reason = nullptr;
  switch (c.kind()) {
    case CouplingKind::Uncoupled:
    case CouplingKind::Decoupled:
      for (const auto& p : sequence(c)) seq.push_back(pair_json(p, fr_ids, dp_ids));
      break;
    case CouplingKind::Coupled:
      for (const auto& b : c.as<Coupled>().blocks) {
        Json block = Json::array();
        for (const auto& p : b) block.push_back(pair_json(p, fr_ids, dp_ids));
        blocks.push_back(std::move(block));
      }
      break;
    case CouplingKind::Degenerate:
      reason = to_string(c.as<Degenerate>().reason);
      break;
  }
  return Json{{"class", to_string(c.kind())}, {"sequence", seq}, {"blocks", blocks}, {"reason", reason}};
}

/// One-line classification followed by detail lines.
inline std::string classification_text(const CouplingClassification& c,
                                       const std::vector<std::string>& fr_ids,
                                       const std::vector<std::string>& dp_ids) {
  std::string out = to_string(c.kind());
  auto pair_text = [&](const FrDpPair& p) { return fr_ids.at(p.fr) + "<-" + dp_ids.at(p.dp); };
  switch (c.kind()) {
    case CouplingKind::Uncoupled:
    case CouplingKind::Decoupled: {
      out += "\nsequence:";
      bool first = true;
      for (const auto& p : sequence(c)) {
        out += first ? " " : " -> ";
        out += pair_text(p);
        first = false;
      }
      break;
    }
    case CouplingKind::Coupled:
      for (const auto& b : c.as<Coupled>().blocks) {
        out += "\nblock:";
        for (const auto& p : b) out += " " + pair_text(p);
      }
      break;
    case CouplingKind::Degenerate:
      out += std::string(": ") + to_string(c.as<Degenerate>().reason);
      break;
  }
  return out + "\n";
}

inline Json analysis_json(const AnalysisReport& r) {
  Json info{
      {"method", to_string(r.info.method)},
      {"system_probability", json_number(r.info.system_probability)},
      {"system_bits", json_number(r.info.system_bits)},
      {"std_error", json_number(r.info.std_error)},
      {"bits_std_error", json_number(r.info.bits_std_error)},
  };
  if (r.info.mc)
    info["mc"] = {{"seed", r.info.mc->seed},
                  {"n_samples", r.info.mc->n_samples},
                  {"bits_error_model", "delta method: se_bits = se_p / (p ln 2)"}};
  else
    info["mc"] = nullptr;
  if (!r.info.order.empty()) {
    Json order = Json::array();
    for (std::size_t i : r.info.order) order.push_back(r.fr_ids.at(i));
    info["order"] = std::move(order);
  }

  Json table = Json::array();
  for (std::size_t i = 0; i < r.fr_ids.size(); ++i) {
    const auto b = range_bounds(r.ranges[i]);
    const auto& res = r.info.per_fr.at(i);
    table.push_back(Json{
        {"fr", r.fr_ids[i]},
        {"lower", json_number(b.lower)},
        {"upper", json_number(b.upper)},
        {"probability", json_number(res.probability)},
        {"bits", json_number(res.bits)},
        {"std_error", json_number(res.std_error)},
        {"pdf", r.pdf_summaries.at(i)},
    });
  }

  return Json{
      {"spec", {{"frs", r.fr_ids}, {"dps", r.dp_ids}}},
      {"classification",
       r.classification ? classification_json(*r.classification, r.fr_ids, r.dp_ids) : Json(nullptr)},
      {"info", std::move(info)},
      {"table", std::move(table)},
      {"warnings", r.warnings},
  };
}

inline std::string analysis_text(const AnalysisReport& r) {
  std::string out;
  char line[256];
  if (r.classification) out += "classification: " + std::string(to_string(r.classification->kind())) + "\n";
  out += "method: " + std::string(to_string(r.info.method));
  if (r.info.mc)
    out += " (seed " + std::to_string(r.info.mc->seed) + ", " + std::to_string(r.info.mc->n_samples) +
           " samples)";
  out += "\n\n";
  std::snprintf(line, sizeof line, "%-16s %14s %14s %12s %10s %10s\n", "FR", "lower", "upper",
                "probability", "bits", "std_err");
  out += line;
  for (std::size_t i = 0; i < r.fr_ids.size(); ++i) {
    const auto b = range_bounds(r.ranges[i]);
    const auto& res = r.info.per_fr.at(i);
    std::snprintf(line, sizeof line, "%-16s %14.8g %14.8g %12.7f %10s %10.2e\n", r.fr_ids[i].c_str(),
                  b.lower, b.upper, res.probability,
                  std::isinf(res.bits) ? "inf" : std::to_string(res.bits).c_str(), res.std_error);
    out += line;
  }
  std::snprintf(line, sizeof line, "\nsystem probability %.7f  system bits %.6f\n",
                r.info.system_probability, r.info.system_bits);
  out += line;
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace axd

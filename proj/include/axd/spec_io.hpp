#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "axd/distributions.hpp"
#include "axd/errors.hpp"
#include "axd/json_text.hpp"
#include "axd/spec_model.hpp"
#include "axd/tank.hpp"

namespace axd {

namespace detail {

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
}

inline void allow_keys(const Json& j, const std::string& path,
                       std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

inline std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline double number_field(const Json& j, const std::string& path, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(path, key), "missing required field");
  return number_at(*it, child(path, key));
}

inline double number_field_or(const Json& j, const std::string& path, const std::string& key,
                              double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number_at(*it, child(path, key));
}

inline std::string string_field_or(const Json& j, const std::string& path, const std::string& key,
                                   std::string fallback = {}) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw SchemaError(child(path, key), "expected a string");
  return it->get<std::string>();
}

inline std::uint64_t unsigned_field(const Json& j, const std::string& path, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(path, key), "missing required field");
  if (!it->is_number_unsigned()) throw SchemaError(child(path, key), "expected a non-negative integer");
  return it->get<std::uint64_t>();
}

}  // namespace detail

inline Pdf pdf_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  require_object(j, path);
  const std::string kind = string_field_or(j, path, "kind");
  Pdf pdf;
  if (kind == "uniform") {
    allow_keys(j, path, {"kind", "lo", "hi"});
    pdf = Uniform{number_field(j, path, "lo"), number_field(j, path, "hi")};
  } else if (kind == "normal") {
    allow_keys(j, path, {"kind", "mu", "sigma"});
    pdf = Normal{number_field(j, path, "mu"), number_field(j, path, "sigma")};
  } else if (kind == "triangular") {
    allow_keys(j, path, {"kind", "lo", "mode", "hi"});
    pdf = Triangular{number_field(j, path, "lo"), number_field(j, path, "mode"),
                     number_field(j, path, "hi")};
  } else if (kind == "empirical") {
    allow_keys(j, path, {"kind", "samples"});
    const auto it = j.find("samples");
    if (it == j.end() || !it->is_array() || it->empty())
      throw SchemaError(child(path, "samples"), "expected a non-empty array of numbers");
    std::vector<double> values;
    for (std::size_t i = 0; i < it->size(); ++i)
      values.push_back(number_at((*it)[i], child(path, "samples") + "[" + std::to_string(i) + "]"));
    pdf = Empirical(std::move(values));
  } else {
    throw SchemaError(child(path, "kind"),
                      "expected one of uniform, normal, triangular, empirical");
  }
  if (auto msg = check_pdf(pdf)) throw SchemaError(path, *msg);
  return pdf;
}

inline Json pdf_to_json(const Pdf& pdf) {
  return std::visit(overloaded{
                        [](const Uniform& u) {
                          return Json{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
                        },
                        [](const Normal& n) {
                          return Json{{"kind", "normal"}, {"mu", n.mu}, {"sigma", n.sigma}};
                        },
                        [](const Triangular& t) {
                          return Json{{"kind", "triangular"}, {"lo", t.lo}, {"mode", t.mode}, {"hi", t.hi}};
                        },
                        [](const Empirical& e) {
                          return Json{{"kind", "empirical"}, {"samples", e.samples()}};
                        },
                    },
                    pdf);
}

inline TankConfig tank_config_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  require_object(j, path);
  allow_keys(j, path,
             {"level_setpoints", "temp_setpoint", "mix_duration", "inlet_temp", "fill_rate",
              "drain_rate", "heater_rate", "max_heat_time", "sensor_noise", "coupling_gains",
              "timestep", "cycles"});
  TankConfig c;
  if (const auto it = j.find("level_setpoints"); it != j.end()) {
    const auto p = child(path, "level_setpoints");
    require_object(*it, p);
    allow_keys(*it, p, {"low", "high"});
    c.level_low = number_field_or(*it, p, "low", c.level_low);
    c.level_high = number_field_or(*it, p, "high", c.level_high);
  }
  c.temp_setpoint = number_field_or(j, path, "temp_setpoint", c.temp_setpoint);
  c.mix_duration = number_field_or(j, path, "mix_duration", c.mix_duration);
  c.inlet_temp = number_field_or(j, path, "inlet_temp", c.inlet_temp);
  c.fill_rate = number_field_or(j, path, "fill_rate", c.fill_rate);
  c.drain_rate = number_field_or(j, path, "drain_rate", c.drain_rate);
  c.heater_rate = number_field_or(j, path, "heater_rate", c.heater_rate);
  c.max_heat_time = number_field_or(j, path, "max_heat_time", c.max_heat_time);
  c.timestep = number_field_or(j, path, "timestep", c.timestep);
  if (j.contains("cycles")) c.cycles = unsigned_field(j, path, "cycles");
  if (const auto it = j.find("sensor_noise"); it != j.end()) {
    const auto p = child(path, "sensor_noise");
    require_object(*it, p);
    allow_keys(*it, p, {"level", "temperature", "mix"});
    if (it->contains("level")) c.sensor_noise.level = pdf_from_json(it->at("level"), child(p, "level"));
    if (it->contains("temperature"))
      c.sensor_noise.temperature = pdf_from_json(it->at("temperature"), child(p, "temperature"));
    if (it->contains("mix")) c.sensor_noise.mix = pdf_from_json(it->at("mix"), child(p, "mix"));
  }
  if (const auto it = j.find("coupling_gains"); it != j.end()) {
    const auto p = child(path, "coupling_gains");
    require_object(*it, p);
    allow_keys(*it, p, {"mixer_to_temp", "heater_to_level", "mixer_to_level"});
    c.coupling_gains.mixer_to_temp = number_field_or(*it, p, "mixer_to_temp", 0.0);
    c.coupling_gains.heater_to_level = number_field_or(*it, p, "heater_to_level", 0.0);
    c.coupling_gains.mixer_to_level = number_field_or(*it, p, "mixer_to_level", 0.0);
  }
  return c;
}

inline Json tank_config_to_json(const TankConfig& c) {
  Json noise = Json::object();
  if (c.sensor_noise.level) noise["level"] = pdf_to_json(*c.sensor_noise.level);
  if (c.sensor_noise.temperature) noise["temperature"] = pdf_to_json(*c.sensor_noise.temperature);
  if (c.sensor_noise.mix) noise["mix"] = pdf_to_json(*c.sensor_noise.mix);
  return Json{
      {"level_setpoints", {{"low", c.level_low}, {"high", c.level_high}}},
      {"temp_setpoint", c.temp_setpoint},
      {"mix_duration", c.mix_duration},
      {"inlet_temp", c.inlet_temp},
      {"fill_rate", c.fill_rate},
      {"drain_rate", c.drain_rate},
      {"heater_rate", c.heater_rate},
      {"max_heat_time", c.max_heat_time},
      {"sensor_noise", noise},
      {"coupling_gains",
       {{"mixer_to_temp", c.coupling_gains.mixer_to_temp},
        {"heater_to_level", c.coupling_gains.heater_to_level},
        {"mixer_to_level", c.coupling_gains.mixer_to_level}}},
      {"timestep", c.timestep},
      {"cycles", c.cycles},
  };
}

/// Parses a spec document. Structural problems (syntax, unknown or mistyped
/// fields, matrix shape) throw; semantic checks are left to validate_spec.
inline DesignSpec parse_spec(std::string_view document) {
  using namespace detail;
  Json root;
  try {
    root = Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  require_object(root, "(root)");
  allow_keys(root, "", {"frs", "dps", "matrix", "system_pdfs", "noise_pdfs", "epsilon",
                        "scenario", "mc", "notes"});

  DesignSpec spec;
  const auto frs = root.find("frs");
  if (frs == root.end() || !frs->is_array()) throw SchemaError("frs", "expected an array");
  for (std::size_t i = 0; i < frs->size(); ++i) {
    const auto path = "frs[" + std::to_string(i) + "]";
    const Json& f = (*frs)[i];
    require_object(f, path);
    allow_keys(f, path, {"id", "description", "nominal", "tol_minus", "tol_plus", "unit"});
    FunctionalRequirement fr;
    fr.id = string_field_or(f, path, "id");
    if (fr.id.empty()) throw SchemaError(child(path, "id"), "missing required field");
    fr.description = string_field_or(f, path, "description");
    fr.unit = string_field_or(f, path, "unit");
    fr.design_range = {number_field(f, path, "nominal"), number_field(f, path, "tol_minus"),
                       number_field(f, path, "tol_plus")};
    spec.frs.push_back(std::move(fr));
  }

  const auto dps = root.find("dps");
  if (dps != root.end()) {
    if (!dps->is_array()) throw SchemaError("dps", "expected an array");
    for (std::size_t i = 0; i < dps->size(); ++i) {
      const auto path = "dps[" + std::to_string(i) + "]";
      const Json& d = (*dps)[i];
      require_object(d, path);
      allow_keys(d, path, {"id", "description", "nominal", "uncertainty"});
      DesignParameter dp;
      dp.id = string_field_or(d, path, "id");
      if (dp.id.empty()) throw SchemaError(child(path, "id"), "missing required field");
      dp.description = string_field_or(d, path, "description");
      dp.nominal = number_field(d, path, "nominal");
      if (d.contains("uncertainty"))
        dp.uncertainty = pdf_from_json(d.at("uncertainty"), child(path, "uncertainty"));
      spec.dps.push_back(std::move(dp));
    }
  }

  if (const auto it = root.find("matrix"); it != root.end()) {
    if (!it->is_array()) throw SchemaError("matrix", "expected an array of rows");
    if (it->size() != spec.frs.size())
      throw SchemaError("matrix", "has " + std::to_string(it->size()) + " rows but spec has " +
                                      std::to_string(spec.frs.size()) + " FRs");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto path = "matrix[" + std::to_string(i) + "]";
      const Json& r = (*it)[i];
      if (!r.is_array()) throw SchemaError(path, "expected an array of numbers");
      if (r.size() != spec.dps.size())
        throw SchemaError(path, "has " + std::to_string(r.size()) + " entries but spec has " +
                                    std::to_string(spec.dps.size()) + " DPs");
      std::vector<double> row;
      for (std::size_t k = 0; k < r.size(); ++k)
        row.push_back(number_at(r[k], path + "[" + std::to_string(k) + "]"));
      rows.push_back(std::move(row));
    }
    if (spec.frs.empty()) spec.matrix = DesignMatrix(0, spec.dps.size());
    else spec.matrix = DesignMatrix(rows);
  }

  for (auto [key, table] : {std::pair{"system_pdfs", &spec.system_pdfs},
                            std::pair{"noise_pdfs", &spec.noise_pdfs}}) {
    const auto it = root.find(key);
    if (it == root.end()) continue;
    require_object(*it, key);
    for (auto e = it->begin(); e != it->end(); ++e)
      table->emplace(e.key(), pdf_from_json(e.value(), child(key, e.key())));
  }

  spec.epsilon = number_field_or(root, "", "epsilon", 0.0);

  if (const auto it = root.find("scenario"); it != root.end())
    spec.scenario = tank_config_from_json(*it, "scenario");

  if (const auto it = root.find("mc"); it != root.end()) {
    require_object(*it, "mc");
    allow_keys(*it, "mc", {"seed", "n_samples"});
    McConfig mc;
    if (it->contains("seed")) mc.seed = unsigned_field(*it, "mc", "seed");
    if (it->contains("n_samples")) {
      mc.n_samples = unsigned_field(*it, "mc", "n_samples");
      if (mc.n_samples < 1) throw SchemaError("mc.n_samples", "must be positive");
    }
    spec.mc = mc;
  }

  spec.notes = string_field_or(root, "", "notes");
  return spec;
}

/// Inverse of parse_spec: parse_spec(render_spec(s)) == s.
inline std::string render_spec(const DesignSpec& spec) {
  Json root;
  Json frs = Json::array();
  for (const auto& fr : spec.frs) {
    Json f{{"id", fr.id}};
    if (!fr.description.empty()) f["description"] = fr.description;
    f["nominal"] = fr.design_range.nominal;
    f["tol_minus"] = fr.design_range.tol_minus;
    f["tol_plus"] = fr.design_range.tol_plus;
    if (!fr.unit.empty()) f["unit"] = fr.unit;
    frs.push_back(std::move(f));
  }
  root["frs"] = std::move(frs);
  Json dps = Json::array();
  for (const auto& dp : spec.dps) {
    Json d{{"id", dp.id}};
    if (!dp.description.empty()) d["description"] = dp.description;
    d["nominal"] = dp.nominal;
    if (dp.uncertainty) d["uncertainty"] = pdf_to_json(*dp.uncertainty);
    dps.push_back(std::move(d));
  }
  root["dps"] = std::move(dps);
  if (spec.matrix) {
    Json m = Json::array();
    for (std::size_t i = 0; i < spec.matrix->rows(); ++i) m.push_back(spec.matrix->row(i));
    root["matrix"] = std::move(m);
  }
  for (auto [key, table] : {std::pair{"system_pdfs", &spec.system_pdfs},
                            std::pair{"noise_pdfs", &spec.noise_pdfs}}) {
    if (table->empty()) continue;
    Json t = Json::object();
    for (const auto& [id, pdf] : *table) t[id] = pdf_to_json(pdf);
    root[key] = std::move(t);
  }
  root["epsilon"] = spec.epsilon;
  if (spec.scenario) root["scenario"] = tank_config_to_json(*spec.scenario);
  if (spec.mc) root["mc"] = {{"seed", spec.mc->seed}, {"n_samples", spec.mc->n_samples}};
  if (!spec.notes.empty()) root["notes"] = spec.notes;
  return dump_json(root);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DesignSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

}  // namespace axd

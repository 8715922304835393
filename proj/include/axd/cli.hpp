#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "axd/analysis.hpp"
#include "axd/coupling.hpp"
#include "axd/errors.hpp"
#include "axd/info_content.hpp"
#include "axd/json_text.hpp"
#include "axd/spec_io.hpp"
#include "axd/spec_model.hpp"
#include "axd/tank.hpp"

// Command implementations behind the `axd` executable. They never print;
// each returns its exit code and the text destined for stdout/stderr.
namespace axd::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kCoupled = 2,
  kDegenerate = 3,
  kMethodInapplicable = 4,
  kSimulationDiverged = 5,
};

enum class Format { Json, Text };

struct CommandResult {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

struct ClassifyOptions {
  std::optional<double> epsilon;
  Format format = Format::Json;
};

struct InfoOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string method = "auto";
  std::optional<double> epsilon;
  Format format = Format::Json;
};

struct SimulateOptions {
  std::optional<std::size_t> cycles;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  Format format = Format::Json;
};

inline constexpr std::uint64_t kDefaultSeed = 0;

namespace detail {

inline CommandResult fail(int code, const std::string& message) {
  return {code, {}, "error: " + message + "\n"};
}

inline std::string violations_text(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) out += "  " + x.subject + ": " + x.message + "\n";
  return out;
}

// Loads and validates; on failure `result` holds the exit to return.
inline std::optional<DesignSpec> load_valid(const std::string& path, std::optional<double> epsilon,
                                            CommandResult& result) {
  try {
    DesignSpec spec = load_spec(path);
    if (epsilon) spec.epsilon = *epsilon;
    if (auto v = validate_spec(spec); !v.empty()) {
      result = {kInputError, {}, "error: invalid spec " + path + "\n" + violations_text(v)};
      return std::nullopt;
    }
    return spec;
  } catch (const std::exception& e) {
    result = fail(kInputError, e.what());
    return std::nullopt;
  }
}

}  // namespace detail

inline CommandResult cmd_validate(const std::string& path, Format format = Format::Json) {
  DesignSpec spec;
  try {
    spec = load_spec(path);
  } catch (const std::exception& e) {
    return detail::fail(kInputError, e.what());
  }
  const auto violations = validate_spec(spec);
  CommandResult r;
  r.exit_code = violations.empty() ? kOk : kInputError;
  if (format == Format::Text) {
    r.out = violations.empty() ? "valid\n" : "invalid\n" + detail::violations_text(violations);
  } else {
    Json list = Json::array();
    for (const auto& v : violations) list.push_back({{"subject", v.subject}, {"message", v.message}});
    r.out = dump_json(Json{{"valid", violations.empty()}, {"violations", list}}) + "\n";
  }
  return r;
}

/// Exit 0 uncoupled/decoupled, 2 coupled, 3 degenerate, 1 bad input.
inline CommandResult cmd_classify(const std::string& path, const ClassifyOptions& opt = {}) {
  CommandResult r;
  const auto spec = detail::load_valid(path, opt.epsilon, r);
  if (!spec) return r;
  if (!spec->matrix) return detail::fail(kInputError, "spec has no design matrix to classify");

  const auto c = classify(*spec->matrix, spec->epsilon);
  const auto frs = spec->fr_ids(), dps = spec->dp_ids();
  r.out = opt.format == Format::Text ? classification_text(c, frs, dps)
                                     : dump_json(classification_json(c, frs, dps)) + "\n";
  switch (c.kind()) {
    case CouplingKind::Coupled: r.exit_code = kCoupled; break;
    case CouplingKind::Degenerate: r.exit_code = kDegenerate; break;
    default: r.exit_code = kOk;
  }
  return r;
}

inline CommandResult cmd_info(const std::string& path, const InfoOptions& opt = {}) {
  const auto method = parse_method(opt.method);
  if (!method) return detail::fail(kInputError, "unknown method '" + opt.method + "'");
  if (opt.samples && *opt.samples < 1) return detail::fail(kInputError, "--samples must be positive");

  CommandResult r;
  const auto spec = detail::load_valid(path, opt.epsilon, r);
  if (!spec) return r;

  McConfig mc = spec->mc.value_or(McConfig{kDefaultSeed});
  if (opt.seed) mc.seed = *opt.seed;
  if (opt.samples) mc.n_samples = *opt.samples;

  try {
    const auto report = analyze(*spec, *method, mc);
    r.out = opt.format == Format::Text ? analysis_text(report) : dump_json(analysis_json(report)) + "\n";
    r.exit_code = kOk;
  } catch (const MethodInapplicable& e) {
    return detail::fail(kMethodInapplicable, e.what());
  } catch (const std::exception& e) {
    return detail::fail(kInputError, e.what());
  }
  return r;
}

/// Runs the tank scenario; the spec's first three FRs name the level,
/// temperature and mix-duration channels.
inline CommandResult cmd_simulate(const std::string& path, const SimulateOptions& opt = {}) {
  CommandResult r;
  const auto spec = detail::load_valid(path, std::nullopt, r);
  if (!spec) return r;
  if (!spec->scenario) return detail::fail(kInputError, "no scenario block in " + path);
  if (spec->frs.size() != 3)
    return detail::fail(kInputError,
                        "scenario needs exactly 3 FRs (level, temperature, mix duration), spec has " +
                            std::to_string(spec->frs.size()));
  if (opt.cycles && *opt.cycles < 1) return detail::fail(kInputError, "--cycles must be positive");

  TankConfig config = *spec->scenario;
  if (opt.cycles) config.cycles = *opt.cycles;
  const std::uint64_t seed = opt.seed.value_or(spec->mc ? spec->mc->seed : kDefaultSeed);

  SampleSet samples;
  try {
    samples = simulate_tank(config, Rng(seed));
  } catch (const SimulationError& e) {
    return detail::fail(kSimulationDiverged, e.what());
  }
  samples.rename(spec->fr_ids());

  if (opt.out_path) {
    std::ofstream csv(*opt.out_path, std::ios::binary);
    if (!csv) return detail::fail(kInputError, "cannot write " + *opt.out_path);
    samples.write_csv(csv);
  }

  const auto ranges = spec->ranges();
  const auto joint = joint_from_samples(samples, ranges);
  Json frs = Json::array();
  std::string text;
  char line[200];
  std::snprintf(line, sizeof line, "%-16s %12s %10s\n", "FR", "probability", "bits");
  text += line;
  for (std::size_t i = 0; i < spec->frs.size(); ++i) {
    const auto col = samples.column(i);
    const Pdf empirical = from_samples(col);
    const auto res = fr_information(empirical, ranges[i]);
    const auto b = range_bounds(ranges[i]);
    frs.push_back(Json{{"fr", spec->frs[i].id},
                       {"lower", json_number(b.lower)},
                       {"upper", json_number(b.upper)},
                       {"probability", json_number(res.probability)},
                       {"bits", json_number(res.bits)},
                       {"pdf", describe(empirical)}});
    std::snprintf(line, sizeof line, "%-16s %12.7f %10.6f\n", spec->frs[i].id.c_str(), res.probability,
                  res.bits);
    text += line;
  }
  std::snprintf(line, sizeof line, "\nsystem probability %.7f  system bits %.6f  (%zu cycles, seed %llu)\n",
                joint.system_probability, joint.system_bits, config.cycles,
                static_cast<unsigned long long>(seed));
  text += line;

  r.exit_code = kOk;
  if (opt.format == Format::Text) {
    r.out = text;
  } else {
    r.out = dump_json(Json{
                {"cycles", config.cycles},
                {"seed", seed},
                {"csv", opt.out_path ? Json(*opt.out_path) : Json(nullptr)},
                {"frs", frs},
                {"system_probability", json_number(joint.system_probability)},
                {"system_bits", json_number(joint.system_bits)},
                {"std_error", json_number(joint.std_error)},
            }) +
            "\n";
  }
  return r;
}

}  // namespace axd::cli

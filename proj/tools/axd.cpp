#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "axd/cli.hpp"

namespace {

axd::cli::Format parse_format(const std::string& s) {
  return s == "text" ? axd::cli::Format::Text : axd::cli::Format::Json;
}

int emit(const axd::cli::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axd: information content and coupling analysis for axiomatic design specs"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string format = "json";
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> cycles;
  std::optional<std::string> out_path;
  std::string method = "auto";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "spec document (JSON)")->required();
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  auto* validate = app.add_subcommand("validate", "check a spec and list violations");
  add_common(validate);

  auto* classify = app.add_subcommand("classify", "classify FR-DP coupling");
  add_common(classify);
  classify->add_option("--epsilon", epsilon, "dependency threshold |A_ij| > epsilon");

  auto* info = app.add_subcommand("info", "compute information content");
  add_common(info);
  info->add_option("--seed", seed, "Monte Carlo seed");
  info->add_option("--samples", samples, "Monte Carlo sample count");
  info->add_option("--method", method, "auto|analytic|chain|joint")
      ->check(CLI::IsMember({"auto", "analytic", "chain", "joint"}));
  info->add_option("--epsilon", epsilon, "dependency threshold |A_ij| > epsilon");

  auto* simulate = app.add_subcommand("simulate", "run the tank scenario");
  add_common(simulate);
  simulate->add_option("--cycles", cycles, "number of cycles");
  simulate->add_option("--seed", seed, "simulation seed");
  simulate->add_option("--out", out_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return axd::cli::kInputError;
  }

  const auto fmt = parse_format(format);
  if (validate->parsed()) return emit(axd::cli::cmd_validate(spec_path, fmt));
  if (classify->parsed()) return emit(axd::cli::cmd_classify(spec_path, {epsilon, fmt}));
  if (info->parsed()) return emit(axd::cli::cmd_info(spec_path, {seed, samples, method, epsilon, fmt}));
  return emit(axd::cli::cmd_simulate(spec_path, {cycles, seed, out_path, fmt}));
}

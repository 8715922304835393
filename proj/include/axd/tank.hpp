#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axd/distributions.hpp"
#include "axd/errors.hpp"
#include "axd/parallel.hpp"
#include "axd/rng.hpp"
#include "axd/sample_set.hpp"

namespace axd {

/// Per-cycle measurement offsets; an absent channel reads exactly.
struct SensorNoise {
  std::optional<Pdf> level;        // m
  std::optional<Pdf> temperature;  // degC
  std::optional<Pdf> mix;          // s, mixer timer error
  friend bool operator==(const SensorNoise&, const SensorNoise&) = default;
};

/// Cross effects between control loops. All zero is the uncoupled plant.
struct CouplingGains {
  double mixer_to_temp = 0.0;    // degC of turbulence heating per minute of mixing
  double heater_to_level = 0.0;  // m of thermal expansion per degC heated
  double mixer_to_level = 0.0;   // m of level change per minute of mixing
  friend bool operator==(const CouplingGains&, const CouplingGains&) = default;
};

/// Milk heating/mixing tank: drain to the low mark, fill to the high mark,
/// heat to the setpoint, mix for a fixed time, release.
struct TankConfig {
  double level_low = 1.0;       // m
  double level_high = 7.0;      // m
  double temp_setpoint = 65.0;  // degC
  double mix_duration = 120.0;  // s
  double inlet_temp = 4.0;      // degC of incoming milk
  double fill_rate = 0.05;      // m/s
  double drain_rate = 0.05;     // m/s
  double heater_rate = 0.5;     // degC/s
  double max_heat_time = 3600.0;  // s before a cycle is declared non-convergent
  SensorNoise sensor_noise;
  CouplingGains coupling_gains;
  double timestep = 0.5;  // s
  std::size_t cycles = 1000;

  friend bool operator==(const TankConfig&, const TankConfig&) = default;
};

inline const std::array<std::string, 3>& tank_channels() {
  static const std::array<std::string, 3> ids{"level", "temperature", "mix_duration"};
  return ids;
}

inline std::vector<std::string> check_tank_config(const TankConfig& c) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
  };
  positive(c.timestep, "timestep");
  positive(c.fill_rate, "fill_rate");
  positive(c.drain_rate, "drain_rate");
  positive(c.mix_duration, "mix_duration");
  positive(c.max_heat_time, "max_heat_time");
  if (c.cycles < 1) out.push_back("cycles must be >= 1");
  if (!(c.level_low >= 0.0 && c.level_low < c.level_high))
    out.push_back("level_setpoints require 0 <= low < high");
  for (double v : {c.temp_setpoint, c.inlet_temp, c.heater_rate, c.coupling_gains.mixer_to_temp,
                   c.coupling_gains.heater_to_level, c.coupling_gains.mixer_to_level})
    if (!std::isfinite(v)) {
      out.push_back("tank parameters must be finite");
      break;
    }
  for (const auto* p : {&c.sensor_noise.level, &c.sensor_noise.temperature, &c.sensor_noise.mix})
    if (*p)
      if (auto msg = check_pdf(**p)) out.push_back("sensor_noise: " + *msg);
  return out;
}

/// Measurement offsets applied during one cycle.
struct CycleNoise {
  double level = 0.0;
  double temperature = 0.0;
  double mix = 0.0;
};

/// Values delivered at release: level, temperature, and actual mix time.
struct CycleResult {
  double level = 0.0;
  double temperature = 0.0;
  double mix_duration = 0.0;
};

/// Runs one cycle with explicit Euler steps of `timestep`. Controller
/// thresholds are located exactly inside the final step, so a noiseless,
/// uncoupled cycle lands on the setpoints bit-for-bit. A sensor offset shifts
/// the true value at which a controller trips (measured = true + offset).
inline CycleResult run_cycle(const TankConfig& c, const CycleNoise& noise, std::size_t cycle) {
  const double dt = c.timestep;
  double level = c.level_high;
  double temp = c.temp_setpoint;

  // Drain until the level reading falls below the low mark.
  const double drain_stop = std::max(0.0, c.level_low - noise.level);
  while (level > drain_stop) {
    const double next = level - c.drain_rate * dt;
    level = next <= drain_stop ? drain_stop : next;
  }

  // Fill with cold milk; temperature relaxes toward the inlet temperature.
  const double fill_stop = c.level_high - noise.level;
  if (!(fill_stop > 0.0)) throw SimulationError(cycle, "fill target is not positive");
  while (level < fill_stop) {
    const bool last = level + c.fill_rate * dt >= fill_stop;
    const double step = last ? (fill_stop - level) / c.fill_rate : dt;
    const double l = std::max(level, 1e-9);
    temp += std::min(1.0, c.fill_rate * step / l) * (c.inlet_temp - temp);
    level = last ? fill_stop : level + c.fill_rate * dt;
  }

  // Heat until the temperature reading reaches the setpoint.
  const double heat_stop = c.temp_setpoint - noise.temperature;
  if (temp < heat_stop) {
    if (!(c.heater_rate > 0.0))
      throw SimulationError(cycle, "heater cannot raise temperature to setpoint");
    const double start = temp;
    double elapsed = 0.0;
    while (temp < heat_stop) {
      if (elapsed >= c.max_heat_time)
        throw SimulationError(cycle, "temperature did not reach setpoint within max_heat_time");
      const double next = temp + c.heater_rate * dt;
      temp = next >= heat_stop ? heat_stop : next;
      elapsed += dt;
    }
    level += c.coupling_gains.heater_to_level * (temp - start);
  }

  // Mix until the timer reads the nominal duration.
  const double mix_time = c.mix_duration - noise.mix;
  if (!(mix_time > 0.0)) throw SimulationError(cycle, "mix duration is not positive");
  const double temp_rate = c.coupling_gains.mixer_to_temp / 60.0;
  const double level_rate = c.coupling_gains.mixer_to_level / 60.0;
  for (double t = 0.0; t < mix_time;) {
    const double step = std::min(dt, mix_time - t);
    temp += temp_rate * step;
    level += level_rate * step;
    t += step;
  }

  return {level, temp, mix_time};
}

/// One row per cycle with columns level, temperature, mix_duration. Each
/// cycle draws its sensor offsets from its own substream of `rng`.
inline SampleSet simulate_tank(const TankConfig& config, const Rng& rng, unsigned workers = 1) {
  if (auto problems = check_tank_config(config); !problems.empty())
    throw ContractViolation("invalid tank config: " + problems.front());
  const auto& ch = tank_channels();
  SampleSet out({ch.begin(), ch.end()}, config.cycles);
  detail::for_slices(config.cycles, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Rng r = rng.substream(k);
      CycleNoise noise;
      if (config.sensor_noise.level) noise.level = sample(*config.sensor_noise.level, r);
      if (config.sensor_noise.temperature)
        noise.temperature = sample(*config.sensor_noise.temperature, r);
      if (config.sensor_noise.mix) noise.mix = sample(*config.sensor_noise.mix, r);
      const CycleResult res = run_cycle(config, noise, k);
      auto row = out.row(k);
      row[0] = res.level;
      row[1] = res.temperature;
      row[2] = res.mix_duration;
    }
  });
  return out;
}

/// Noise-free steady-state response of the tank to its three DPs
/// (level setpoint, temperature setpoint, mix duration).
inline std::vector<double> tank_response(const TankConfig& base, std::span<const double> dps) {
  if (dps.size() != 3) throw ModelError("tank response expects 3 DP values");
  TankConfig c = base;
  c.level_high = dps[0];
  c.temp_setpoint = dps[1];
  c.mix_duration = dps[2];
  const CycleResult r = run_cycle(c, CycleNoise{}, 0);
  return {r.level, r.temperature, r.mix_duration};
}

}  // namespace axd

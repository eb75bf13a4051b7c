#pragma once

// Flat key = value experiment configuration.
//
//   experiment = fig2
//   delta = -10:10:41        # start:stop:count
//   epsilon = 0, 0.5, 1      # list
//   kt = 0.5                 # scalar
//
// Axis keys: delta, epsilon, kerr, gamma, kt, sigma2. Other keys:
// experiment, output, format (csv|json), dim (integer or auto), with_k3
// (true|false). kt is the evolution time in units where K = 1, so with
// kerr = 1 every axis is a ratio to K.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kerr::harness {

enum class Experiment { Fig1, Fig2, Fig3, Scaling, LossRobustness, Custom, Wigner };
enum class Format { Csv, Json };

std::string_view to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view s);
std::string_view to_string(Format f);
std::optional<Format> format_from_string(std::string_view s);

/// Inclusive linear range with `count` points.
struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool operator==(const Range&) const = default;
};

struct Axis {
  std::variant<std::vector<double>, Range> spec;

  Axis() = default;
  Axis(std::vector<double> values) : spec(std::move(values)) {}
  Axis(Range r) : spec(r) {}

  std::vector<double> values() const;
  bool operator==(const Axis&) const = default;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Custom;
  Axis delta{std::vector<double>{0.0}};
  Axis epsilon{std::vector<double>{2.0}};
  Axis kerr{std::vector<double>{1.0}};
  Axis gamma{std::vector<double>{0.0}};
  Axis kt{std::vector<double>{0.5}};
  Axis sigma2{std::vector<double>{0.0}};
  std::optional<int> dim;  // nullopt: automatic convergence in dim
  std::string output;
  Format format = Format::Csv;
  bool with_k3 = false;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults of a named experiment before any key is applied.
ExperimentConfig defaults_for(Experiment e);

/// Parses config text. Keys not given keep the defaults of the experiment
/// named by the `experiment` key, else `fallback`, else custom. When
/// `fallback` is given, a different `experiment` key is an error. Throws
/// kerr::ConfigError with a "line N:" prefix on malformed input.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<Experiment> fallback = {});
/// Renders every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace kerr::harness

#pragma once

// Point and sweep evaluation behind the command-line front end, plus the
// figure presets and their manifest.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "entconc/channels.hpp"
#include "entconc/perturbation.hpp"
#include "entconc/truncation.hpp"

namespace entconc {

inline constexpr std::string_view kSchemaVersion = "1.0";

enum class Method {
  pre,                  // e_pre
  exact,                // e_perfect
  gaussian,             // e_gauss
  eigensolve,           // e_imperfect_numeric
  pert1,                // e_pert1
  pert2,                // e_pert2
  off,                  // e_off
  onoff_numeric,        // e_on_numeric
  onoff_average,        // e_on_average
  onoff_average_gauss,  // e_on_average_gauss
};

std::string_view method_name(Method m);
/// Accepts the names printed by method_name; throws InvalidInput otherwise.
Method parse_method(std::string_view name);
/// Comma-separated list, duplicates removed, canonical order.
std::vector<Method> parse_methods(std::string_view list);

enum class Axis { q, mu, c1, c2 };

std::string_view axis_name(Axis a);
Axis parse_axis(std::string_view name);
OmegaMode parse_omega_mode(std::string_view name);
std::string_view omega_mode_name(OmegaMode mode);

struct AxisRange {
  Axis axis = Axis::q;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// start, start + step, ... up to stop (inclusive within 1e-9 step).
  std::vector<double> values() const;
};

struct SweepConfig {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<std::int64_t> q;
  std::vector<double> mus;  // empty: projective counting only
  std::optional<AxisRange> axis;
  std::vector<Method> methods;
  TruncationPolicy policy;
  OmegaMode omega = OmegaMode::direct;

  /// Throws InvalidInput on an inconsistent configuration.
  void validate(bool require_axis) const;
};

/// Every measurement evaluated at one parameter point.
struct PointResult {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<std::int64_t> q;
  std::optional<double> e_pre;
  std::vector<MeasurementRecord> records;
};

PointResult evaluate_point(const SweepConfig& config);

/// Named numeric columns in a fixed order; shared by CSV and JSON output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Column names for a configuration, in output order.
std::vector<std::string> table_columns(const SweepConfig& config);

/// One row per axis value, in axis order. Rows are computed concurrently.
Table run_sweep(const SweepConfig& config);

nlohmann::json run_point(const SweepConfig& config);

/// Shortest round-trip decimal form.
std::string format_number(double value);

/// UTF-8, comma separated, header row, LF line endings.
std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

struct Preset {
  std::string name;
  int figure = 0;
  std::string description;
  SweepConfig config;
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

nlohmann::json emit_manifest();

}  // namespace entconc

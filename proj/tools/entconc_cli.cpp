// entconc: evaluate entanglement after phonon counting at single points,
// along parameter sweeps, or for the figure presets.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.
// ENTCONC_THREADS sets the worker count for sweeps and eigensolves.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entconc/error.hpp"
#include "entconc/sweep.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Options {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<std::int64_t> q;
  std::vector<double> mus;
  std::string methods = "exact";
  double eps_trunc = entconc::TruncationPolicy{}.eps_trunc;
  double eps_eig = entconc::TruncationPolicy{}.eps_eig;
  std::string omega = "direct";
  std::string out;
  std::string format;
  std::string axis;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
};

void add_truncation_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--eps-trunc", o.eps_trunc, "probability mass allowed to be discarded from Fock sums");
  cmd->add_option("--eps-eig", o.eps_eig, "relative threshold below which eigenvalues count as negative");
  cmd->add_option("--omega", o.omega, "Omega factor for pert2")
      ->check(CLI::IsMember({"direct", "gaussian", "half"}));
}

void add_output_flags(CLI::App* cmd, Options& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_point_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--c1", o.c1, "red-detuned cooperativity")->required();
  cmd->add_option("--c2", o.c2, "blue-detuned cooperativity")->required();
  cmd->add_option("--q", o.q, "detected phonon number");
  cmd->add_option("--mu", o.mus, "detector efficiencies, comma separated")->delimiter(',');
  cmd->add_option("--methods", o.methods,
                  "comma-separated subset of pre, exact, gaussian, eigensolve, pert1, pert2, off, "
                  "onoff-numeric, onoff-average, onoff-average-gauss")
      ->capture_default_str();
}

entconc::SweepConfig build_config(const Options& o) {
  entconc::SweepConfig c;
  c.c1 = o.c1;
  c.c2 = o.c2;
  c.q = o.q;
  c.mus = o.mus;
  c.methods = entconc::parse_methods(o.methods);
  c.policy.eps_trunc = o.eps_trunc;
  c.policy.eps_eig = o.eps_eig;
  c.omega = entconc::parse_omega_mode(o.omega);
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw entconc::InvalidInput("cannot open output file '" + path + "'");
  file << text;
  if (!file.flush()) throw entconc::InvalidInput("failed writing output file '" + path + "'");
}

std::string render(const entconc::Table& table, const std::string& format) {
  return format == "json" ? entconc::to_json(table).dump(2) + "\n" : entconc::to_csv(table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement concentration by phonon counting in a three-mode optomechanical system"};
  app.require_subcommand(1);

  Options point_opts;
  auto* point = app.add_subcommand("point", "evaluate one parameter point");
  add_point_flags(point, point_opts);
  add_truncation_flags(point, point_opts);
  add_output_flags(point, point_opts, "json");

  Options sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "evaluate along one parameter axis");
  add_point_flags(sweep, sweep_opts);
  add_truncation_flags(sweep, sweep_opts);
  add_output_flags(sweep, sweep_opts, "csv");
  sweep->add_option("--axis", sweep_opts.axis, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"q", "mu", "c1", "c2"}));
  sweep->add_option("--start", sweep_opts.start, "first axis value")->required();
  sweep->add_option("--stop", sweep_opts.stop, "last axis value (inclusive)")->required();
  sweep->add_option("--step", sweep_opts.step, "axis increment")->capture_default_str();

  std::vector<std::pair<CLI::App*, std::string>> figures;
  std::vector<Options> fig_opts(entconc::presets().size());
  for (std::size_t i = 0; i < entconc::presets().size(); ++i) {
    const auto& preset = entconc::presets()[i];
    auto* cmd = app.add_subcommand(preset.name, preset.description);
    add_truncation_flags(cmd, fig_opts[i]);
    add_output_flags(cmd, fig_opts[i], "csv");
    figures.emplace_back(cmd, preset.name);
  }

  std::string manifest_out;
  auto* manifest = app.add_subcommand("manifest", "print presets and the CSV column schema");
  manifest->add_option("--out", manifest_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*point) {
      const entconc::SweepConfig config = build_config(point_opts);
      if (point_opts.format == "json") {
        emit(entconc::run_point(config).dump(2) + "\n", point_opts.out);
      } else {
        const nlohmann::json doc = entconc::run_point(config);
        entconc::Table table;
        table.columns = entconc::table_columns(config);
        std::vector<double> row;
        for (const auto& name : table.columns) row.push_back(doc["values"][name].get<double>());
        table.rows.push_back(row);
        emit(entconc::to_csv(table), point_opts.out);
      }
    } else if (*sweep) {
      entconc::SweepConfig config = build_config(sweep_opts);
      config.axis = entconc::AxisRange{entconc::parse_axis(sweep_opts.axis), sweep_opts.start, sweep_opts.stop,
                                       sweep_opts.step};
      emit(render(entconc::run_sweep(config), sweep_opts.format), sweep_opts.out);
    } else if (*manifest) {
      emit(entconc::emit_manifest().dump(2) + "\n", manifest_out);
    } else {
      for (std::size_t i = 0; i < figures.size(); ++i) {
        if (!*figures[i].first) continue;
        const Options& o = fig_opts[i];
        entconc::SweepConfig config = entconc::find_preset(figures[i].second).config;
        config.policy.eps_trunc = o.eps_trunc;
        config.policy.eps_eig = o.eps_eig;
        config.omega = entconc::parse_omega_mode(o.omega);
        emit(render(entconc::run_sweep(config), o.format), o.out);
      }
    }
  } catch (const entconc::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const entconc::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return EXIT_SUCCESS;
}

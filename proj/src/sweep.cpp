#include "entconc/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "entconc/error.hpp"
#include "entconc/model.hpp"
#include "entconc/parallel.hpp"

namespace entconc {

namespace {

constexpr std::array kMethodNames = {
    std::pair{Method::pre, std::string_view{"pre"}},
    std::pair{Method::exact, std::string_view{"exact"}},
    std::pair{Method::gaussian, std::string_view{"gaussian"}},
    std::pair{Method::eigensolve, std::string_view{"eigensolve"}},
    std::pair{Method::pert1, std::string_view{"pert1"}},
    std::pair{Method::pert2, std::string_view{"pert2"}},
    std::pair{Method::off, std::string_view{"off"}},
    std::pair{Method::onoff_numeric, std::string_view{"onoff-numeric"}},
    std::pair{Method::onoff_average, std::string_view{"onoff-average"}},
    std::pair{Method::onoff_average_gauss, std::string_view{"onoff-average-gauss"}},
};

bool has(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

bool needs_outcome(const std::vector<Method>& methods) {
  return has(methods, Method::exact) || has(methods, Method::gaussian) || has(methods, Method::eigensolve) ||
         has(methods, Method::pert1) || has(methods, Method::pert2);
}

bool needs_efficiency(const std::vector<Method>& methods) {
  return has(methods, Method::eigensolve) || has(methods, Method::pert1) || has(methods, Method::pert2);
}

bool needs_on(const std::vector<Method>& methods) {
  return has(methods, Method::onoff_numeric) || has(methods, Method::onoff_average) ||
         has(methods, Method::onoff_average_gauss);
}

std::vector<double> effective_mus(const SweepConfig& config) {
  return config.mus.empty() ? std::vector<double>{1.0} : config.mus;
}

bool multi_mu(const SweepConfig& config) { return config.mus.size() > 1; }

std::string mu_suffix(const SweepConfig& config, double mu) {
  return multi_mu(config) ? "_mu" + format_number(mu) : std::string{};
}

const MeasurementRecord* find_record(const PointResult& r, Channel ch, std::optional<double> mu = {}) {
  for (const auto& rec : r.records) {
    if (rec.channel != ch) continue;
    if (mu && rec.mu != mu) continue;
    return &rec;
  }
  return nullptr;
}

double require(const std::optional<double>& v) {
  if (!v) throw NumericalFailure("internal: requested value was not computed");
  return *v;
}

// Values in the order of table_columns, without the axis column.
std::vector<double> flatten(const SweepConfig& config, const PointResult& r) {
  const auto& m = config.methods;
  std::vector<double> row;
  if (has(m, Method::pre)) row.push_back(require(r.e_pre));
  const MeasurementRecord* perfect = find_record(r, Channel::perfect);
  if (has(m, Method::exact)) row.push_back(require(perfect->exact));
  if (has(m, Method::gaussian)) row.push_back(require(perfect->gaussian));

  const auto mus = effective_mus(config);
  const std::array<std::pair<Method, std::optional<double> MeasurementRecord::*>, 3> imperfect_fields = {
      std::pair{Method::eigensolve, &MeasurementRecord::eigensolve},
      std::pair{Method::pert1, &MeasurementRecord::pert1},
      std::pair{Method::pert2, &MeasurementRecord::pert2},
  };
  for (const auto& [method, field] : imperfect_fields) {
    if (!has(m, method)) continue;
    for (double mu : mus) row.push_back(require(find_record(r, Channel::imperfect, mu)->*field));
  }

  if (has(m, Method::off)) row.push_back(require(find_record(r, Channel::off)->exact));
  const MeasurementRecord* on = find_record(r, Channel::on);
  if (has(m, Method::onoff_numeric)) row.push_back(require(on->eigensolve));
  if (has(m, Method::onoff_average)) row.push_back(require(on->average));
  if (has(m, Method::onoff_average_gauss)) row.push_back(require(on->average_gaussian));

  // Outcome probability of the conditioning measurement.
  double prob = 1.0;
  if (needs_efficiency(m) && !multi_mu(config)) {
    prob = find_record(r, Channel::imperfect, mus.front())->probability;
  } else if (needs_outcome(m)) {
    prob = phonon_prob(occupations(Cooperativities(r.c1, r.c2)), r.q.value());
  } else if (on != nullptr) {
    prob = on->probability;
  } else if (const auto* off = find_record(r, Channel::off)) {
    prob = off->probability;
  }
  row.push_back(prob);
  if (needs_efficiency(m) && multi_mu(config)) {
    for (double mu : mus) row.push_back(find_record(r, Channel::imperfect, mu)->probability);
  }

  double deficit = 0.0;
  for (const auto& rec : r.records) deficit = std::max(deficit, rec.trunc_deficit);
  row.push_back(deficit);
  return row;
}

SweepConfig row_config(const SweepConfig& config, double value) {
  SweepConfig c = config;
  c.axis.reset();
  switch (config.axis->axis) {
    case Axis::q: c.q = static_cast<std::int64_t>(std::llround(value)); break;
    case Axis::mu: c.mus = {value}; break;
    case Axis::c1: c.c1 = value; break;
    case Axis::c2: c.c2 = value; break;
  }
  return c;
}

std::string describe_row(const SweepConfig& config, double value) {
  return std::string(axis_name(config.axis->axis)) + "=" + format_number(value) + ": ";
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames) {
    if (n == name) return method;
  }
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> requested;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string_view item = list.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw InvalidInput("empty entry in method list '" + std::string(list) + "'");
    requested.push_back(parse_method(item));
    pos = comma + 1;
  }
  std::vector<Method> out;
  for (const auto& [method, name] : kMethodNames) {
    if (has(requested, method)) out.push_back(method);
  }
  return out;
}

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::q: return "q";
    case Axis::mu: return "mu";
    case Axis::c1: return "c1";
    case Axis::c2: return "c2";
  }
  return "unknown";
}

Axis parse_axis(std::string_view name) {
  for (Axis a : {Axis::q, Axis::mu, Axis::c1, Axis::c2}) {
    if (axis_name(a) == name) return a;
  }
  throw InvalidInput("unknown axis '" + std::string(name) + "' (expected q, mu, c1 or c2)");
}

OmegaMode parse_omega_mode(std::string_view name) {
  if (name == "direct") return OmegaMode::direct;
  if (name == "gaussian") return OmegaMode::gaussian;
  if (name == "half") return OmegaMode::half;
  throw InvalidInput("unknown omega mode '" + std::string(name) + "' (expected direct, gaussian or half)");
}

std::string_view omega_mode_name(OmegaMode mode) {
  switch (mode) {
    case OmegaMode::direct: return "direct";
    case OmegaMode::gaussian: return "gaussian";
    case OmegaMode::half: return "half";
  }
  return "unknown";
}

std::vector<double> AxisRange::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("axis step must be positive");
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw InvalidInput("axis range must satisfy start <= stop");
  }
  const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw InvalidInput("axis has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(std::min(stop, start + static_cast<double>(i) * step));
  }
  return out;
}

void SweepConfig::validate(bool require_axis) const {
  if (methods.empty()) throw InvalidInput("no methods requested");
  if (require_axis && !axis) throw InvalidInput("sweep needs an axis");
  if (!require_axis && axis) throw InvalidInput("point evaluation takes no axis");
  (void)Cooperativities(c1, c2);
  for (double mu : mus) (void)DetectorEfficiency(mu);
  for (std::size_t i = 0; i < mus.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (mus[i] == mus[j]) throw InvalidInput("duplicate mu value " + format_number(mus[i]));
    }
  }
  if (!(policy.eps_trunc > 0.0 && policy.eps_trunc < 1.0)) throw InvalidInput("eps-trunc must lie in (0, 1)");
  if (!(policy.eps_eig >= 0.0 && policy.eps_eig < 1.0)) throw InvalidInput("eps-eig must lie in [0, 1)");

  const bool q_axis = axis && axis->axis == Axis::q;
  if (q && *q < 0) throw InvalidInput("q must be nonnegative");
  if (needs_outcome(methods) && !q && !q_axis) throw InvalidInput("the requested methods need --q");
  if (q_axis && q) throw InvalidInput("--q conflicts with a q axis");
  if (axis && axis->axis == Axis::mu) {
    if (!mus.empty()) throw InvalidInput("--mu conflicts with a mu axis");
    if (!needs_efficiency(methods)) throw InvalidInput("a mu axis needs eigensolve, pert1 or pert2");
  }
  if (axis) {
    const auto values = axis->values();
    if (q_axis) {
      for (double v : values) {
        if (v < 0.0 || v != std::floor(v)) throw InvalidInput("q axis values must be nonnegative integers");
      }
    }
    for (double v : values) {
      const SweepConfig row = row_config(*this, v);
      (void)Cooperativities(row.c1, row.c2);
      for (double mu : row.mus) (void)DetectorEfficiency(mu);
    }
  }
}

PointResult evaluate_point(const SweepConfig& config) {
  const Cooperativities coop(config.c1, config.c2);
  const ModeOccupations occ = occupations(coop);
  const auto& m = config.methods;
  PointResult r;
  r.c1 = config.c1;
  r.c2 = config.c2;
  r.q = config.q;

  if (has(m, Method::pre)) r.e_pre = pre_measurement_entanglement(coop);

  if (has(m, Method::exact) || has(m, Method::gaussian)) {
    const std::int64_t q = config.q.value();
    MeasurementRecord rec;
    rec.channel = Channel::perfect;
    rec.outcome = q;
    rec.probability = phonon_prob(occ, q);
    if (has(m, Method::exact)) rec.exact = perfect_entanglement(coop, q);
    if (has(m, Method::gaussian)) rec.gaussian = perfect_entanglement_gaussian(coop, q);
    r.records.push_back(rec);
  }

  if (needs_efficiency(m)) {
    const std::int64_t q = config.q.value();
    for (double mu_value : effective_mus(config)) {
      const DetectorEfficiency mu(mu_value);
      MeasurementRecord rec;
      rec.channel = Channel::imperfect;
      rec.outcome = q;
      rec.mu = mu_value;
      rec.probability = imperfect_outcome_prob(occ, mu, q);
      if (has(m, Method::eigensolve)) {
        const NegativityResult n = imperfect_entanglement_numeric(coop, mu, q, config.policy);
        rec.eigensolve = n.log_negativity;
        rec.trunc_deficit = n.trace_deficit;
        rec.largest_block = n.largest_block;
      }
      if (has(m, Method::pert1)) {
        const PerturbativeValue v = first_order_entanglement(coop, mu, q);
        rec.pert1 = v.value;
        rec.pert_trusted = v.trusted;
        rec.pert_clamped = v.clamped;
      }
      if (has(m, Method::pert2)) {
        const PerturbativeValue v = second_order_entanglement(coop, mu, q, config.omega);
        rec.pert2 = v.value;
        rec.pert_trusted = v.trusted;
        rec.pert_clamped = rec.pert_clamped || v.clamped;
      }
      r.records.push_back(rec);
    }
  }

  if (has(m, Method::off)) {
    MeasurementRecord rec;
    rec.channel = Channel::off;
    rec.probability = phonon_prob(occ, 0);
    rec.exact = off_entanglement(coop);
    r.records.push_back(rec);
  }

  if (needs_on(m)) {
    MeasurementRecord rec;
    rec.channel = Channel::on;
    rec.probability = on_probability(occ);
    if (has(m, Method::onoff_numeric)) {
      const OnEntanglement v = on_entanglement(coop, OnMethod::numeric, config.policy);
      rec.eigensolve = v.value;
      rec.trunc_deficit = std::max(rec.trunc_deficit, v.deficit);
      rec.largest_block = v.largest_block;
    }
    if (has(m, Method::onoff_average)) {
      const OnEntanglement v = on_entanglement(coop, OnMethod::average, config.policy);
      rec.average = v.value;
      rec.trunc_deficit = std::max(rec.trunc_deficit, v.deficit);
    }
    if (has(m, Method::onoff_average_gauss)) {
      const OnEntanglement v = on_entanglement(coop, OnMethod::average_gaussian, config.policy);
      rec.average_gaussian = v.value;
      rec.trunc_deficit = std::max(rec.trunc_deficit, v.deficit);
    }
    r.records.push_back(rec);
  }
  return r;
}

std::vector<std::string> table_columns(const SweepConfig& config) {
  const auto& m = config.methods;
  std::vector<std::string> cols;
  if (config.axis) cols.emplace_back("axis");
  if (has(m, Method::pre)) cols.emplace_back("e_pre");
  if (has(m, Method::exact)) cols.emplace_back("e_perfect");
  if (has(m, Method::gaussian)) cols.emplace_back("e_gauss");
  const auto mus = effective_mus(config);
  const std::array<std::pair<Method, std::string_view>, 3> imperfect = {
      std::pair{Method::eigensolve, std::string_view{"e_imperfect_numeric"}},
      std::pair{Method::pert1, std::string_view{"e_pert1"}},
      std::pair{Method::pert2, std::string_view{"e_pert2"}},
  };
  for (const auto& [method, name] : imperfect) {
    if (!has(m, method)) continue;
    for (double mu : mus) cols.push_back(std::string(name) + mu_suffix(config, mu));
  }
  if (has(m, Method::off)) cols.emplace_back("e_off");
  if (has(m, Method::onoff_numeric)) cols.emplace_back("e_on_numeric");
  if (has(m, Method::onoff_average)) cols.emplace_back("e_on_average");
  if (has(m, Method::onoff_average_gauss)) cols.emplace_back("e_on_average_gauss");
  cols.emplace_back("prob");
  if (needs_efficiency(m) && multi_mu(config)) {
    for (double mu : mus) cols.push_back("prob" + mu_suffix(config, mu));
  }
  cols.emplace_back("trunc_deficit");
  return cols;
}

Table run_sweep(const SweepConfig& config) {
  config.validate(true);
  const auto values = config.axis->values();
  Table table;
  table.columns = table_columns(config);
  table.rows.resize(values.size());

  // Along a mu axis only the imperfect channel changes; evaluate the rest once.
  std::optional<PointResult> shared;
  std::vector<Method> per_row = config.methods;
  if (config.axis->axis == Axis::mu) {
    SweepConfig base = row_config(config, 1.0);
    std::erase_if(base.methods, [](Method x) {
      return x == Method::eigensolve || x == Method::pert1 || x == Method::pert2;
    });
    std::erase_if(per_row, [&](Method x) { return has(base.methods, x); });
    if (!base.methods.empty()) shared = evaluate_point(base);
  }

  parallel_for(values.size(), [&](std::size_t i) {
    SweepConfig c = row_config(config, values[i]);
    try {
      c.methods = per_row;
      PointResult r = evaluate_point(c);
      if (shared) {
        r.e_pre = shared->e_pre;
        r.records.insert(r.records.end(), shared->records.begin(), shared->records.end());
      }
      c.methods = config.methods;
      std::vector<double> row{values[i]};
      const auto rest = flatten(c, r);
      row.insert(row.end(), rest.begin(), rest.end());
      table.rows[i] = std::move(row);
    } catch (const InvalidInput& e) {
      throw InvalidInput(describe_row(config, values[i]) + e.what());
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(describe_row(config, values[i]) + e.what());
    }
  });
  return table;
}

nlohmann::json run_point(const SweepConfig& config) {
  config.validate(false);
  const PointResult r = evaluate_point(config);
  const auto columns = table_columns(config);
  const auto values = flatten(config, r);

  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  nlohmann::json params;
  params["c1"] = config.c1;
  params["c2"] = config.c2;
  params["q"] = config.q ? nlohmann::json(*config.q) : nlohmann::json(nullptr);
  params["mu"] = config.mus;
  params["eps_trunc"] = config.policy.eps_trunc;
  params["eps_eig"] = config.policy.eps_eig;
  params["omega"] = omega_mode_name(config.omega);
  doc["parameters"] = params;
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : config.methods) methods.push_back(method_name(m));
  doc["methods"] = methods;

  nlohmann::json flat = nlohmann::json::object();
  for (std::size_t i = 0; i < columns.size(); ++i) flat[columns[i]] = values[i];
  doc["values"] = flat;

  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.records) {
    nlohmann::json j;
    j["channel"] = to_string(rec.channel);
    if (rec.outcome) j["outcome"] = *rec.outcome;
    if (rec.mu) j["mu"] = *rec.mu;
    j["probability"] = rec.probability;
    nlohmann::json ent = nlohmann::json::object();
    const std::array<std::pair<std::string_view, const std::optional<double>*>, 7> fields = {
        std::pair{std::string_view{"exact"}, &rec.exact},
        std::pair{std::string_view{"eigensolve"}, &rec.eigensolve},
        std::pair{std::string_view{"gaussian"}, &rec.gaussian},
        std::pair{std::string_view{"pert1"}, &rec.pert1},
        std::pair{std::string_view{"pert2"}, &rec.pert2},
        std::pair{std::string_view{"average"}, &rec.average},
        std::pair{std::string_view{"average_gaussian"}, &rec.average_gaussian},
    };
    for (const auto& [name, value] : fields) {
      if (*value) ent[std::string(name)] = **value;
    }
    j["entanglement"] = ent;
    if (rec.pert1 || rec.pert2) {
      j["pert_trusted"] = rec.pert_trusted;
      j["pert_clamped"] = rec.pert_clamped;
    }
    j["trunc_deficit"] = rec.trunc_deficit;
    if (rec.largest_block > 0) j["largest_block"] = rec.largest_block;
    records.push_back(j);
  }
  doc["records"] = records;
  return doc;
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw NumericalFailure("format_number: conversion failed");
  return {buf.data(), end};
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["columns"] = table.columns;
  doc["rows"] = table.rows;
  return doc;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    std::vector<Preset> p;

    Preset fig2{"fig2", 2, "entanglement versus detected phonon number q", {}};
    fig2.config.c1 = 10.0;
    fig2.config.c2 = 2.0;
    fig2.config.mus = {0.6, 0.9};
    fig2.config.axis = AxisRange{Axis::q, 0.0, 30.0, 1.0};
    fig2.config.methods = {Method::pre, Method::exact, Method::gaussian, Method::eigensolve, Method::pert1,
                           Method::pert2};
    p.push_back(fig2);

    Preset fig3{"fig3", 3, "entanglement versus detector efficiency mu at q = 2", {}};
    fig3.config.c1 = 10.0;
    fig3.config.c2 = 5.0;
    fig3.config.q = 2;
    fig3.config.axis = AxisRange{Axis::mu, 0.5, 1.0, 0.01};
    fig3.config.methods = {Method::pre,   Method::exact, Method::eigensolve,   Method::pert1,
                           Method::pert2, Method::off,   Method::onoff_numeric};
    p.push_back(fig3);

    Preset fig4{"fig4", 4, "perturbative versus numeric entanglement over q at several mu", {}};
    fig4.config.c1 = 10.0;
    fig4.config.c2 = 3.0;
    fig4.config.mus = {0.9, 0.99, 0.999};
    fig4.config.axis = AxisRange{Axis::q, 0.0, 20.0, 1.0};
    fig4.config.methods = {Method::exact, Method::eigensolve, Method::pert1, Method::pert2};
    p.push_back(fig4);

    Preset fig5{"fig5", 5, "on-off detection entanglement versus c2", {}};
    fig5.config.c1 = 100.0;
    fig5.config.c2 = 1.0;
    fig5.config.axis = AxisRange{Axis::c2, 1.0, 20.0, 0.5};
    fig5.config.methods = {Method::pre, Method::off, Method::onoff_numeric, Method::onoff_average,
                           Method::onoff_average_gauss};
    p.push_back(fig5);
    return p;
  }();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

nlohmann::json emit_manifest() {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["columns"] = {
      {"axis", "swept parameter value"},
      {"e_pre", "log-negativity before measurement"},
      {"e_perfect", "projective counting, exact Schmidt sum"},
      {"e_gauss", "projective counting, Gaussian approximation"},
      {"e_imperfect_numeric", "finite efficiency, partial-transpose eigensolve"},
      {"e_pert1", "finite efficiency, first order in eps"},
      {"e_pert2", "finite efficiency, second order in eps"},
      {"e_off", "on-off detection, off outcome"},
      {"e_on_numeric", "on-off detection, on outcome, eigensolve"},
      {"e_on_average", "on outcome, probability-weighted mean of exact E_N(k)"},
      {"e_on_average_gauss", "on outcome, probability-weighted mean of Gaussian E_N(k)"},
      {"prob", "probability of the conditioning outcome"},
      {"trunc_deficit", "largest discarded trace over the row"},
  };
  doc["mu_suffix"] = "with several mu values, efficiency-dependent columns carry _mu<value>";
  doc["units"] = "nats";
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : presets()) {
    const auto& c = p.config;
    nlohmann::json j;
    j["name"] = p.name;
    j["figure"] = p.figure;
    j["description"] = p.description;
    j["c1"] = c.c1;
    if (c.axis->axis != Axis::c2) j["c2"] = c.c2;
    if (c.q) j["q"] = *c.q;
    if (!c.mus.empty()) j["mu"] = c.mus;
    j["axis"] = {{"name", axis_name(c.axis->axis)},
                 {"start", c.axis->start},
                 {"stop", c.axis->stop},
                 {"step", c.axis->step}};
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : c.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["csv_columns"] = table_columns(c);
    list.push_back(j);
  }
  doc["presets"] = list;
  return doc;
}

}  // namespace entconc

#pragma once

#include <bit>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "berezin/fermion.hpp"
#include "berezin/propagator.hpp"
#include "berezin/symbol_io.hpp"

namespace berezin {

using OrderedJson = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string command;
  int modes = 1;
  int cutoff = 16;
  double time = 1.0;
  std::vector<int> slices{16};
  std::vector<int> flag_modes;  // empty: no projection, use every mode
  int quad_nodes = 0;           // 0: cutoff-scaled default
  int series_degree = 240;
  std::string backend = "auto";
  std::string symbol;
  std::vector<Complex> z0, z1;
  std::string format = "json";
  std::string output;  // empty: stdout
};

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const char* begin = text.data() + start;
    const char* end = text.data() + comma;
    int value = 0;
    const auto [next, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || next != end)
      throw ConfigError(what + " must be a comma-separated integer list");
    out.push_back(value);
    start = comma + 1;
  }
  return out;
}

// comma-separated components, each "re" or "re:im"
inline std::vector<Complex> parse_complex_list(const std::string& text, const std::string& what) {
  std::vector<Complex> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string token = text.substr(start, comma - start);
    const std::size_t colon = token.find(':');
    double re = 0.0, im = 0.0;
    const auto take = [&](const std::string& piece, double& value) {
      const char* b = piece.data();
      const char* e = piece.data() + piece.size();
      const auto [next, ec] = std::from_chars(b, e, value);
      if (ec != std::errc() || next != e)
        throw ConfigError(what + ": bad complex component '" + token + "'");
    };
    take(token.substr(0, colon), re);
    if (colon != std::string::npos) take(token.substr(colon + 1), im);
    out.emplace_back(re, im);
    start = comma + 1;
  }
  return out;
}

namespace detail {

inline OrderedJson complex_json(const Complex& c) {
  return OrderedJson::array({c.real(), c.imag()});
}

inline OrderedJson vector_json(const std::vector<Complex>& v) {
  OrderedJson out = OrderedJson::array();
  for (const Complex& c : v) out.push_back(complex_json(c));
  return out;
}

inline OrderedJson matrix_json(const Eigen::MatrixXcd& m) {
  OrderedJson rows = OrderedJson::array();
  for (int r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<Complex> complex_vector_from_json(const nlohmann::json& j,
                                                     const std::string& what) {
  std::vector<Complex> out;
  if (!j.is_array()) throw ConfigError(what + " must be an array");
  for (const auto& item : j) {
    if (item.is_number()) {
      out.emplace_back(item.get<double>(), 0.0);
    } else if (item.is_array() && item.size() == 2 && item[0].is_number() &&
               item[1].is_number()) {
      out.emplace_back(item[0].get<double>(), item[1].get<double>());
    } else {
      throw ConfigError(what + " entries must be numbers or [re, im] pairs");
    }
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") cfg.command = value.get<std::string>();
    else if (key == "modes") cfg.modes = value.get<int>();
    else if (key == "cutoff") cfg.cutoff = value.get<int>();
    else if (key == "time") cfg.time = value.get<double>();
    else if (key == "slices") cfg.slices = value.get<std::vector<int>>();
    else if (key == "flag_modes") cfg.flag_modes = value.get<std::vector<int>>();
    else if (key == "quad_nodes") cfg.quad_nodes = value.get<int>();
    else if (key == "series_degree") cfg.series_degree = value.get<int>();
    else if (key == "backend") cfg.backend = value.get<std::string>();
    else if (key == "symbol") cfg.symbol = value.get<std::string>();
    else if (key == "z0") cfg.z0 = detail::complex_vector_from_json(value, "z0");
    else if (key == "z1") cfg.z1 = detail::complex_vector_from_json(value, "z1");
    else if (key == "format") cfg.format = value.get<std::string>();
    else if (key == "output") cfg.output = value.get<std::string>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

inline void validate(const ExperimentConfig& cfg) {
  static const std::vector<std::string> commands{"symbols", "quantize", "propagate",
                                                 "bosonize", "identity-check"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
    throw ConfigError("unknown command '" + cfg.command +
                      "' (expected symbols|quantize|propagate|bosonize|identity-check)");
  if (cfg.modes < 1) throw ConfigError("modes must be positive");
  if (cfg.cutoff < 0) throw ConfigError("cutoff must be nonnegative");
  if (!std::isfinite(cfg.time)) throw ConfigError("time must be finite");
  if (cfg.slices.empty()) throw ConfigError("slices list must be nonempty");
  for (int n : cfg.slices)
    if (n < 1) throw ConfigError("slice counts must be positive");
  for (int n : cfg.flag_modes)
    if (n < 1 || n > cfg.modes)
      throw ConfigError("flag modes must lie between 1 and the mode count");
  if (cfg.quad_nodes < 0) throw ConfigError("quad_nodes must be nonnegative");
  if (cfg.series_degree < 0) throw ConfigError("series_degree must be nonnegative");
  if (cfg.backend != "auto" && cfg.backend != "series" && cfg.backend != "quadrature")
    throw ConfigError("backend must be auto|series|quadrature");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json|csv");
  if (cfg.format == "csv" && cfg.command != "propagate")
    throw ConfigError("csv output is only defined for propagate");
  const bool needs_symbol =
      cfg.command == "symbols" || cfg.command == "quantize" || cfg.command == "propagate";
  if (needs_symbol && cfg.symbol.empty())
    throw ConfigError("command '" + cfg.command + "' needs a symbol");
  if (cfg.command == "bosonize" && cfg.modes > 8)
    throw ConfigError("bosonize is exhaustive in the mode count; 8 modes is the limit");
  if (cfg.command == "propagate") {
    const auto check_endpoint = [&](const std::vector<Complex>& z, const char* name) {
      if (!z.empty() && static_cast<int>(z.size()) != cfg.modes)
        throw ConfigError(std::string(name) + " must have one component per mode");
    };
    check_endpoint(cfg.z0, "z0");
    check_endpoint(cfg.z1, "z1");
  }
}

namespace detail {

inline OrderedJson config_json(const ExperimentConfig& cfg) {
  OrderedJson j;
  j["command"] = cfg.command;
  j["modes"] = cfg.modes;
  j["cutoff"] = cfg.cutoff;
  j["time"] = cfg.time;
  j["slices"] = cfg.slices;
  j["flag_modes"] = cfg.flag_modes;
  j["quad_nodes"] = cfg.quad_nodes;
  j["series_degree"] = cfg.series_degree;
  j["backend"] = cfg.backend;
  j["symbol"] = cfg.symbol;
  j["z0"] = vector_json(cfg.z0);
  j["z1"] = vector_json(cfg.z1);
  j["format"] = cfg.format;
  return j;
}

inline SliceBackend backend_from_name(const std::string& name) {
  if (name == "series") return SliceBackend::series;
  if (name == "quadrature") return SliceBackend::quadrature;
  return SliceBackend::automatic;
}

inline OrderedJson run_symbols(const ExperimentConfig& cfg) {
  const PolySymbol p = parse_symbol(cfg.symbol, cfg.modes);
  OrderedJson out;
  out["canonical"] = print_symbol(p);
  out["modes"] = p.modes();
  out["degree"] = p.degree();
  out["real"] = p.is_real();
  out["heat_forward"] = print_symbol(heat_transform(p, 1.0));
  out["heat_backward"] = print_symbol(heat_transform(p, -1.0));
  return out;
}

inline OrderedJson run_quantize(const ExperimentConfig& cfg) {
  const PolySymbol p = parse_symbol(cfg.symbol, cfg.modes);
  const FockBasisPtr basis = FockBasis::make(cfg.modes, cfg.cutoff);
  OrderedJson out;
  out["dimension"] = basis->size();
  out["normal"] = matrix_json(normal_quantize(p, basis).mat());
  out["antinormal"] = matrix_json(antinormal_quantize(p, basis).mat());
  return out;
}

inline OrderedJson run_propagate(const ExperimentConfig& cfg) {
  SliceConfig base{parse_symbol(cfg.symbol, cfg.modes), cfg.time,       cfg.slices.front(),
                   cfg.cutoff,                          backend_from_name(cfg.backend),
                   cfg.series_degree,                   cfg.quad_nodes};
  std::vector<Complex> z0 = cfg.z0, z1 = cfg.z1;
  z0.resize(static_cast<std::size_t>(cfg.modes), Complex(0.0));
  z1.resize(static_cast<std::size_t>(cfg.modes), Complex(0.0));
  const auto rows = convergence_sweep(base, cfg.slices, cfg.flag_modes, z0, z1);

  OrderedJson out;
  out["rows"] = OrderedJson::array();
  for (const auto& r : rows) {
    OrderedJson row;
    row["N"] = r.slices;
    row["n"] = r.modes;
    row["amp_re"] = r.amplitude.real();
    row["amp_im"] = r.amplitude.imag();
    row["exact_re"] = r.exact.real();
    row["exact_im"] = r.exact.imag();
    row["abs_error"] = r.abs_error;
    row["trunc_loss"] = r.truncation_loss;
    row["wall_ms"] = r.wall_ms;
    out["rows"].push_back(std::move(row));
  }
  out["trends"] = OrderedJson::array();
  for (const auto& t : summarize_trends(rows)) {
    OrderedJson trend;
    trend["n"] = t.modes;
    trend["error_decreasing"] = t.error_decreasing;
    trend["min_log2_ratio"] = t.min_log2_ratio;
    trend["max_log2_ratio"] = t.max_log2_ratio;
    out["trends"].push_back(std::move(trend));
  }
  return out;
}

inline OrderedJson run_bosonize(const ExperimentConfig& cfg) {
  const SuperCcrResidual res = super_ccr_residual(cfg.modes);
  const FockBasisPtr boson = FockBasis::make(cfg.modes, cfg.modes);
  const HardCoreSubspace hc = HardCoreSubspace::make(boson);

  std::vector<int> grades(static_cast<std::size_t>(cfg.modes) + 1, 0);
  double isometry = 0.0, inverse = 0.0;
  for (int p = 0; p < hc.fermion->size(); ++p) {
    ++grades[static_cast<std::size_t>(hc.fermion->indicator(p).degree())];
    FermionVector f(hc.fermion);
    f.coeffs()[p] = 1.0;
    const FockVector b = bosonize(f, hc);
    isometry = std::max(isometry, std::abs(b.coeffs().norm() - 1.0));
    const FermionVector back = debosonize(b, hc);
    inverse = std::max(inverse, (back.coeffs() - f.coeffs()).cwiseAbs().maxCoeff());
  }

  PolySymbol number(cfg.modes);
  for (int i = 0; i < cfg.modes; ++i)
    number.add_term(MultiIndex::unit(cfg.modes, i), MultiIndex::unit(cfg.modes, i), 1.0);
  Eigen::MatrixXcd conj = conjugate_operator(normal_quantize(number, boson), hc).mat;
  for (int p = 0; p < hc.fermion->size(); ++p)
    conj(p, p) -= static_cast<double>(hc.fermion->indicator(p).degree());

  OrderedJson out;
  out["grade_dimensions"] = grades;
  out["algebraic_car_residual"] = res.algebraic;
  out["conjugated_car_residual"] = res.conjugated;
  out["isometry_residual"] = isometry;
  out["inverse_residual"] = inverse;
  out["number_operator_residual"] = conj.cwiseAbs().maxCoeff();
  return out;
}

inline OrderedJson run_identity_check(const ExperimentConfig& cfg) {
  const int points = cfg.quad_nodes > 0 ? cfg.quad_nodes : 2 * cfg.cutoff + 8;
  OrderedJson out;
  out["quad_nodes"] = points;
  out["residual"] = resolution_of_identity_residual(cfg.modes, cfg.cutoff, points);
  return out;
}

}  // namespace detail

inline OrderedJson run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  OrderedJson report;
  report["command"] = cfg.command;
  report["config"] = detail::config_json(cfg);
  OrderedJson body;
  if (cfg.command == "symbols") body = detail::run_symbols(cfg);
  else if (cfg.command == "quantize") body = detail::run_quantize(cfg);
  else if (cfg.command == "propagate") body = detail::run_propagate(cfg);
  else if (cfg.command == "bosonize") body = detail::run_bosonize(cfg);
  else body = detail::run_identity_check(cfg);
  report.update(body);
  return report;
}

// Pinned propagate table layout; every number in shortest round-trip form.
inline std::string render_csv(const OrderedJson& report) {
  if (!report.contains("rows"))
    throw ConfigError("csv output is only defined for propagate reports");
  std::string out = "N,n,amp_re,amp_im,exact_re,exact_im,abs_error,trunc_loss,wall_ms\n";
  for (const auto& row : report.at("rows")) {
    out += std::to_string(row.at("N").get<int>());
    out += "," + std::to_string(row.at("n").get<int>());
    for (const char* key : {"amp_re", "amp_im", "exact_re", "exact_im", "abs_error",
                            "trunc_loss", "wall_ms"})
      out += "," + detail::format_double(row.at(key).get<double>());
    out += "\n";
  }
  return out;
}

inline void emit_report(const OrderedJson& report, const std::string& format,
                        std::ostream& out) {
  if (format == "csv")
    out << render_csv(report);
  else
    out << report.dump(2) << '\n';
  if (!out) throw IoError("failed to write the report");
}

}  // namespace berezin

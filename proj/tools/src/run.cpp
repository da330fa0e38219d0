#include "charexp_cli/run.hpp"

#include <charexp/monodromy.hpp>
#include <charexp/oracle.hpp>
#include <charexp/stokes.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace charexp::cli {

namespace {

using json = nlohmann::ordered_json;

const char* const kParamKeys[] = {"D1", "D2", "D3", "D4", "D5", "D6", "L",
                                  "B1", "B2", "B3", "B4", "B5", "B6"};

bool known_key(const std::string& key) {
  return std::find(std::begin(kParamKeys), std::end(kParamKeys), key) != std::end(kParamKeys) ||
         std::find(std::begin(kSolverKeys), std::end(kSolverKeys), key) != std::end(kSolverKeys);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void insert_pair(KeyValues& kv, const std::string& key, const std::string& value, int line) {
  const std::string where = " (line " + std::to_string(line) + ")";
  if (!known_key(key)) throw UsageError("unknown key '" + key + "'" + where);
  if (value.empty()) throw UsageError("missing value for '" + key + "'" + where);
  if (!kv.emplace(key, value).second) throw UsageError("key '" + key + "' given twice" + where);
}

int parse_count(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw UsageError(key + ": expected an integer, got '" + text + "'");
  return v;
}

Real parse_number(const std::string& key, const std::string& text) {
  try {
    return parse_real(text);
  } catch (const std::exception&) {
    throw UsageError(key + ": expected a decimal number, got '" + text + "'");
  }
}

std::string dec(const Real& x) { return to_decimal(x); }

json cplx(const Complex& z) { return {{"re", dec(z.real())}, {"im", dec(z.imag())}}; }

json frame_json(const Frame& f) {
  return {{"p1", dec(f.p1)},           {"p2", dec(f.p2)},         {"p3", dec(f.p3)},
          {"s0", dec(f.s0)},           {"t10", dec(f.t10)},       {"t20", dec(f.t20)},
          {"tau_plus", dec(f.tau_plus)}, {"tau_minus", dec(f.tau_minus)},
          {"lambda", dec(f.lambda)},   {"mu_plus", dec(f.mu_plus)}, {"mu_minus", dec(f.mu_minus)}};
}

json grid_json(const EGrid& grid) {
  json entries = json::array();
  for (const auto& e : grid.entries) {
    entries.push_back({{"n1", e.n1}, {"n2", e.n2}, {"value", dec(e.value)}, {"error", to_decimal(e.error, 3)}});
  }
  return {{"kappa", grid.kappa_source == Kappa::plus ? "-1" : "+1"},
          {"m", grid.m_used},
          {"K", grid.K_used},
          {"lmax", grid.lmax},
          {"entries", std::move(entries)}};
}

json stokes_json(const StokesSet& s) {
  json out;
  for (Kappa k : {Kappa::plus, Kappa::minus}) {
    const auto slot = StokesSet::slot(k);
    json sums = json::array(), sigma = json::array();
    for (int j = 0; j < 3; ++j) sums.push_back(dec(s.s(k, j)));
    for (int n = 0; n < 3; ++n) sigma.push_back(cplx(s.sigma_n(n, k)));
    out[k == Kappa::plus ? "plus" : "minus"] = {{"S", std::move(sums)},
                                                 {"sigma", std::move(sigma)},
                                                 {"levels_used", s.sums[slot].levels_used},
                                                 {"converged", s.sums[slot].converged}};
  }
  return out;
}

json pair_json(const SolutionPair& p) { return {{"alpha", cplx(p.alpha)}, {"beta", cplx(p.beta)}}; }

void add_warning(std::vector<std::string>& list, std::string w) {
  if (std::find(list.begin(), list.end(), w) == list.end()) list.push_back(std::move(w));
}

json ode_block(const EquationParams& params, const Complex& cos_value, std::vector<std::string>& warnings,
               bool& agrees) {
  const Real target = std::max<Real>(Real(1e-20), epsilon() * Real(1e6));
  MonodromySample sample;
  bool reached = true;
  try {
    sample = monodromy_trace_ode(params, Real(1), target);
  } catch (const OracleAccuracyError& e) {
    sample = e.best();
    reached = false;
    add_warning(warnings, std::string("oracle: ") + e.what());
  }
  const Complex half = sample.trace * Real(0.5);
  const Real discrepancy = abs(half - cos_value);
  agrees = discrepancy <= Real(kOdeAgreement);
  return {{"trace_half", cplx(half)},
          {"steps", sample.steps},
          {"order", sample.order},
          {"error_estimate", to_decimal(sample.error_estimate, 3)},
          {"det_error", to_decimal(sample.det_error, 3)},
          {"target_reached", reached},
          {"discrepancy", to_decimal(discrepancy, 3)},
          {"threshold", kOdeAgreement},
          {"agrees", agrees}};
}

json hill_block(const EquationParams& params, const Complex& omega, std::vector<std::string>& warnings,
                bool& agrees) {
  const std::complex<double> w(static_cast<double>(omega.real()), static_cast<double>(omega.imag()));
  const HillCheck at = hill_residual_checked(params, w);
  const HillResidual below = hill_residual(params, w - kHillOffset);
  const HillResidual above = hill_residual(params, w + kHillOffset);
  const double neighbour = std::min(below.value, above.value);
  agrees = neighbour >= kHillContrast * at.coarse.value;
  if (at.coarse.shifted) add_warning(warnings, "oracle: Hill rows renormalised near a vanishing diagonal");
  json ratio = "inf";
  if (at.coarse.value > 0) ratio = neighbour / at.coarse.value;
  return {{"N", at.coarse.N},
          {"residual", at.coarse.value},
          {"residual_2N", at.fine.value},
          {"residual_minus_offset", below.value},
          {"residual_plus_offset", above.value},
          {"offset", kHillOffset},
          {"contrast", ratio},
          {"threshold", kHillContrast},
          {"agrees", agrees}};
}

}  // namespace

OracleChoice parse_oracle(const std::string& text) {
  if (text == "none") return OracleChoice::none;
  if (text == "ode") return OracleChoice::ode;
  if (text == "hill") return OracleChoice::hill;
  if (text == "both") return OracleChoice::both;
  throw UsageError("oracle must be none, ode, hill or both");
}

std::string to_string(OracleChoice choice) {
  switch (choice) {
    case OracleChoice::none: return "none";
    case OracleChoice::ode: return "ode";
    case OracleChoice::hill: return "hill";
    case OracleChoice::both: return "both";
  }
  return "none";
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto split = line.find('=');
    if (split == std::string::npos) split = line.find_first_of(" \t");
    if (split == std::string::npos) {
      throw UsageError("expected 'key = value' (line " + std::to_string(number) + ")");
    }
    insert_pair(kv, trim(line.substr(0, split)), trim(line.substr(split + 1)), number);
  }
  return kv;
}

std::vector<KeyValues> parse_sweep(const std::string& text) {
  std::vector<KeyValues> rows;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    KeyValues kv;
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const auto split = token.find('=');
      if (split == std::string::npos) {
        throw UsageError("sweep tokens must be key=value (line " + std::to_string(number) + ")");
      }
      insert_pair(kv, token.substr(0, split), token.substr(split + 1), number);
    }
    rows.push_back(std::move(kv));
  }
  if (rows.empty()) throw UsageError("sweep file has no rows");
  return rows;
}

std::optional<unsigned> precision_of(const KeyValues& kv) {
  const auto it = kv.find("precision");
  if (it == kv.end()) return std::nullopt;
  const int bits = parse_count("precision", it->second);
  if (bits < 64) throw UsageError("precision must be at least 64 bits");
  return static_cast<unsigned>(bits);
}

void apply_key_values(const KeyValues& kv, RunConfig& config) {
  if (auto p = precision_of(kv)) config.precision_bits = *p;
  if (auto it = kv.find("m"); it != kv.end()) {
    if (it->second == "adaptive") config.m.reset();
    else config.m = parse_count("m", it->second);
  }
  if (auto it = kv.find("K"); it != kv.end()) config.K = parse_count("K", it->second);
  if (auto it = kv.find("lmax"); it != kv.end()) {
    if (it->second == "adaptive") config.lmax.reset();
    else config.lmax = parse_count("lmax", it->second);
  }
  if (auto it = kv.find("lambda"); it != kv.end()) {
    if (it->second == "auto") config.lambda.reset();
    else config.lambda = parse_number("lambda", it->second);
  }
  if (auto it = kv.find("oracle"); it != kv.end()) config.oracle = parse_oracle(it->second);

  if (kv.find("B6") == kv.end()) throw UsageError("B6 is required");
  for (int m = 1; m <= 6; ++m) {
    const auto idx = static_cast<std::size_t>(m - 1);
    const std::string d = "D" + std::to_string(m), b = "B" + std::to_string(m);
    config.params.D[idx] = kv.count(d) ? parse_number(d, kv.at(d)) : Real(0);
    config.params.B[idx] = kv.count(b) ? parse_number(b, kv.at(b)) : Real(0);
  }
  config.params.L = kv.count("L") ? parse_number("L", kv.at("L")) : Real(0);
}

void check_config(const RunConfig& config) {
  if (config.precision_bits < 64) throw UsageError("precision must be at least 64 bits");
  if (config.m && *config.m < 2) throw UsageError("m must be at least 2");
  if (config.K < 1) throw UsageError("K must be positive");
  if (config.lmax && *config.lmax < 1) throw UsageError("lmax must be positive");
  if (config.jobs < 1) throw UsageError("jobs must be positive");
  try {
    validate(config.params);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

RunOutcome run_pipeline(const RunConfig& config) {
  RunOutcome out;
  json& r = out.report;
  std::vector<std::string> warnings;

  json input;
  for (int m = 1; m <= 6; ++m) input["D" + std::to_string(m)] = dec(config.params.d(m));
  input["L"] = dec(config.params.L);
  for (int m = 1; m <= 6; ++m) input["B" + std::to_string(m)] = dec(config.params.b(m));
  r["input"] = std::move(input);
  r["config"] = {{"precision_bits", config.precision_bits},
                 {"m", config.m ? json(*config.m) : json("adaptive")},
                 {"K", config.K},
                 {"lmax", config.lmax ? json(*config.lmax) : json("adaptive")},
                 {"lambda", config.lambda ? json(dec(*config.lambda)) : json("auto")},
                 {"oracle", to_string(config.oracle)}};

  try {
    const Real lambda = config.lambda ? *config.lambda : choose_lambda(config.params);
    const Frame frame = derive_frame(config.params, lambda);
    r["frame"] = frame_json(frame);

    StokesOptions options;
    options.m = config.m;
    options.K = config.K;
    options.lmax = config.lmax;
    if (config.m) options.m_step = std::max(1, std::min(options.m_step, *config.m / 2));
    const StokesComputation stokes = compute_stokes(frame, options);
    r["e_grid"] = {{"source_plus", grid_json(stokes.grid_plus)},
                   {"source_minus", grid_json(stokes.grid_minus)}};
    r["stokes"] = stokes_json(stokes.main);

    const FloquetAnalysis analysis = analyse(frame, stokes);
    for (const auto& w : analysis.warnings) add_warning(warnings, w);
    const FloquetResult& f = analysis.result;
    r["circuit_matrix"] = {{"T11", cplx(f.T.t11)},
                           {"T12", cplx(f.T.t12)},
                           {"T21", cplx(f.T.t21)},
                           {"T22", cplx(f.T.t22)},
                           {"det_error", to_decimal(f.det_error, 3)}};
    r["exponent"] = {{"X", cplx(f.X)},
                     {"cos_two_pi_omega", cplx(f.cos_two_pi_omega)},
                     {"omega", cplx(f.omega)},
                     {"p1", cplx(f.p1)},
                     {"p2", cplx(f.p2)},
                     {"error_estimate", to_decimal(analysis.error_estimate, 3)},
                     {"trace_consistency", to_decimal(f.trace_consistency, 3)}};
    r["solutions"] = {{"first", pair_json(f.solutions.first)},
                      {"second", pair_json(f.solutions.second)},
                      {"degenerate", f.solutions.degenerate}};
    r["convergence"] = {{"level_sums", analysis.converged},
                        {"lmax_used", stokes.lmax_used},
                        {"m_used", std::max(stokes.grid_plus.m_used, stokes.grid_minus.m_used)}};

    json oracle = json::object();
    bool all_agree = true;
    if (config.oracle == OracleChoice::ode || config.oracle == OracleChoice::both) {
      bool agrees = false;
      oracle["ode"] = ode_block(config.params, f.cos_two_pi_omega, warnings, agrees);
      all_agree = all_agree && agrees;
    }
    if (config.oracle == OracleChoice::hill || config.oracle == OracleChoice::both) {
      bool agrees = false;
      oracle["hill"] = hill_block(config.params, f.omega, warnings, agrees);
      all_agree = all_agree && agrees;
    }
    if (!oracle.empty()) r["oracle"] = std::move(oracle);
    r["status"] = {{"ok", all_agree}, {"exit_code", all_agree ? 0 : 3}};
    out.exit_code = all_agree ? 0 : 3;
  } catch (const Error& e) {
    r["status"] = {{"ok", false},
                   {"exit_code", 2},
                   {"error", {{"module", e.module()}, {"kind", std::string(charexp::to_string(e.kind()))},
                              {"message", e.what()}}}};
    out.exit_code = 2;
  }
  r["warnings"] = warnings;
  return out;
}

std::string csv_header() {
  return "row,exit_code,cos_re,cos_im,omega_re,omega_im,error_estimate,det_error,converged,"
         "ode_discrepancy,hill_contrast,warnings";
}

std::string csv_row(int row, const json& report) {
  std::ostringstream os;
  const auto field = [&](const char* section, const char* key, const char* part) -> std::string {
    if (!report.contains(section) || !report[section].contains(key)) return "";
    const auto& v = report[section][key];
    if (part) return v[part].get<std::string>();
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  const auto oracle_field = [&](const char* which, const char* key) -> std::string {
    if (!report.contains("oracle") || !report["oracle"].contains(which)) return "";
    const auto& v = report["oracle"][which][key];
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  os << row << ',' << report["status"]["exit_code"].get<int>() << ','
     << field("exponent", "cos_two_pi_omega", "re") << ',' << field("exponent", "cos_two_pi_omega", "im")
     << ',' << field("exponent", "omega", "re") << ',' << field("exponent", "omega", "im") << ','
     << field("exponent", "error_estimate", nullptr) << ',' << field("circuit_matrix", "det_error", nullptr)
     << ',' << field("convergence", "level_sums", nullptr) << ',' << oracle_field("ode", "discrepancy")
     << ',' << oracle_field("hill", "contrast") << ',' << report["warnings"].size();
  return os.str();
}

}  // namespace charexp::cli

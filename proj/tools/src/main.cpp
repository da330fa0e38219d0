#include "charexp_cli/run.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace charexp;
using namespace charexp::cli;

struct Flags {
  std::string params_file;
  std::string sweep_file;
  std::optional<unsigned> precision;
  std::optional<std::string> m, K, lmax, lambda, oracle;
  std::string out;
  int jobs = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

/// Command-line values take precedence over the document.
KeyValues with_overrides(KeyValues kv, const Flags& flags) {
  const auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) kv[key] = *v;
  };
  put("m", flags.m);
  put("K", flags.K);
  put("lmax", flags.lmax);
  put("lambda", flags.lambda);
  put("oracle", flags.oracle);
  return kv;
}

RunConfig make_config(const KeyValues& kv, const Flags& flags) {
  RunConfig config;
  apply_key_values(with_overrides(kv, flags), config);
  config.output_path = flags.out;
  config.jobs = flags.jobs;
  check_config(config);
  return config;
}

int run_single(const Flags& flags) {
  const KeyValues kv = parse_key_values(read_file(flags.params_file));
  const unsigned bits = flags.precision.value_or(precision_of(kv).value_or(256));
  if (bits < 64) throw UsageError("precision must be at least 64 bits");
  WorkingPrecision precision(bits);
  RunConfig config = make_config(kv, flags);
  config.precision_bits = bits;
  const RunOutcome outcome = run_pipeline(config);
  write_output(flags.out, outcome.report.dump(2) + "\n");
  return outcome.exit_code;
}

int run_sweep(const Flags& flags) {
  const std::vector<KeyValues> rows = parse_sweep(read_file(flags.sweep_file));
  const unsigned bits = flags.precision.value_or(256);
  if (bits < 64) throw UsageError("precision must be at least 64 bits");
  for (const auto& row : rows) {
    if (auto p = precision_of(row); p && *p != bits) {
      throw UsageError("sweep rows share one precision; set it with --precision");
    }
  }
  WorkingPrecision precision(bits);
  std::vector<RunConfig> configs;
  for (const auto& row : rows) {
    configs.push_back(make_config(row, flags));
    configs.back().precision_bits = bits;
  }

  std::vector<std::string> lines(configs.size());
  std::vector<int> codes(configs.size(), 0);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
      const RunOutcome outcome = run_pipeline(configs[i]);
      lines[i] = csv_row(static_cast<int>(i), outcome.report);
      codes[i] = outcome.exit_code;
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(flags.jobs), configs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string text = csv_header() + "\n";
  for (const auto& l : lines) text += l + "\n";
  write_output(flags.out, text);
  int code = 0;
  for (int c : codes) {
    if (c == 2) return 2;
    if (c == 3) code = 3;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic exponent of z^2 f'' + z f' - [sum D_m z^-m + L^2 + sum B_m z^m] f = 0"};
  Flags flags;
  auto* params = app.add_option("params", flags.params_file, "Parameter file (key = value lines)");
  auto* sweep = app.add_option("--sweep", flags.sweep_file, "File with one key=value parameter row per line");
  params->excludes(sweep);
  app.add_option("--precision", flags.precision, "Working precision in bits (default 256)");
  app.add_option("--m", flags.m, "Asymptotic index m, or 'adaptive'");
  app.add_option("--K", flags.K, "Correction order of the connection formula (default 12)");
  app.add_option("--lmax", flags.lmax, "Grading cap of the e-grid, or 'adaptive'");
  app.add_option("--lambda", flags.lambda, "Free exponent lambda, or 'auto'");
  app.add_option("--oracle", flags.oracle, "none, ode, hill or both")
      ->check(CLI::IsMember({"none", "ode", "hill", "both"}));
  app.add_option("--out", flags.out, "Output file (default: standard output)");
  app.add_option("--jobs", flags.jobs, "Concurrent sweep rows")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (flags.params_file.empty() && flags.sweep_file.empty()) {
    std::cerr << "error: give a parameter file or --sweep\n" << app.help();
    return 1;
  }

  try {
    return flags.sweep_file.empty() ? run_single(flags) : run_sweep(flags);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.module() << ": " << e.what() << "\n";
    return 2;
  }
}

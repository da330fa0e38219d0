#pragma once

#include <charexp/frame.hpp>
#include <charexp/numeric.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace charexp::cli {

/// Malformed input or flags; maps to exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleChoice { none, ode, hill, both };

OracleChoice parse_oracle(const std::string& text);
std::string to_string(OracleChoice choice);

/// Raw key/value pairs of a parameter document, numbers still as text so they
/// can be parsed after the working precision is fixed.
using KeyValues = std::map<std::string, std::string>;

/// Parses "key = value" or "key value" lines; '#' starts a comment. Unknown
/// or repeated keys are usage errors.
KeyValues parse_key_values(const std::string& text);

/// One sweep row per non-blank line: whitespace-separated key=value tokens.
std::vector<KeyValues> parse_sweep(const std::string& text);

struct RunConfig {
  EquationParams params;
  unsigned precision_bits = 256;
  std::optional<int> m;     ///< adaptive when empty
  int K = 12;
  std::optional<int> lmax;  ///< adaptive when empty
  std::optional<Real> lambda;  ///< automatic when empty
  OracleChoice oracle = OracleChoice::none;
  std::string output_path;
  int jobs = 1;
};

/// Solver keys accepted in parameter documents next to D1..D6, L, B1..B6.
inline constexpr const char* kSolverKeys[] = {"precision", "m", "K", "lmax", "lambda", "oracle"};

/// Applies the solver keys of `kv` onto `config` and parses the thirteen
/// equation parameters at the current working precision. Missing equation
/// parameters default to zero, except B6 which is required.
void apply_key_values(const KeyValues& kv, RunConfig& config);

/// Precision requested by a document, if any.
std::optional<unsigned> precision_of(const KeyValues& kv);

/// Throws UsageError when a count is out of range.
void check_config(const RunConfig& config);

/// Acceptance thresholds for the oracle comparison.
inline constexpr double kOdeAgreement = 1e-6;
inline constexpr double kHillContrast = 1e3;
inline constexpr double kHillOffset = 0.05;

struct RunOutcome {
  nlohmann::ordered_json report;
  int exit_code = 0;  ///< 0 ok, 2 numerical fatal, 3 oracle disagreement
};

/// Runs frame -> Stokes multipliers -> circuit matrix -> exponent, plus the
/// requested oracles. Numerical failures are captured in the report.
/// The working precision must already equal config.precision_bits.
RunOutcome run_pipeline(const RunConfig& config);

/// Header and one data row for sweep aggregation.
std::string csv_header();
std::string csv_row(int row, const nlohmann::ordered_json& report);

}  // namespace charexp::cli

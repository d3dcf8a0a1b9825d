#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cylhypo/classifier.hpp"
#include "cylhypo/counterexamples.hpp"
#include "cylhypo/error.hpp"
#include "cylhypo/spectral.hpp"
#include "cylhypo/symbols.hpp"

namespace cylhypo::cli {

struct OutputSpec {
  std::string dir = "out";
  bool json = true;
  bool csv = true;
  bool svg = false;
};

/// Input function for solve / spectrum / fit-decay: a built-in name or a CSV grid.
struct InputSpec {
  std::string function = "gaussian_cos";
  std::string csv_path;  // overrides function when set; columns t,x,re,im
};

struct CounterexampleSpec {
  std::string kind = "auto";  // auto | sign_change | plane_wave | tube_zero
  SignChangeParams sign_change;
  std::optional<int> k0;
  std::optional<double> xi0;
};

struct RunConfig {
  std::string source;
  std::optional<OperatorSpec> op;
  std::string operator_kind;
  CylinderGrid grid;
  Budgets budgets;
  Tolerances tol;
  std::optional<double> solve_residual;  // module default when unset
  double sigma_claim = 1.0;
  double mu_claim = 0.5;
  InputSpec input;
  OutputSpec output;
  CounterexampleSpec counterexample;
  unsigned seed = 1;
};

inline const std::vector<std::string> kOperatorKinds = {"const_split", "first_order_t", "tube"};
inline const std::vector<std::string> kInputFunctions = {"gaussian", "gaussian_cos", "poisson_gaussian",
                                                         "gaussian_mode"};

/// Aggregated validation failure; what() joins every problem.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> formats;  // "json,csv,svg"
  std::optional<int> k_budget;
  std::optional<std::string> grid;  // "MxN"
  std::optional<double> x_halfwidth;
  std::optional<unsigned> seed;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Re-runs the invariant checks; throws ConfigError listing every violation.
void validate(const RunConfig& cfg);

}  // namespace cylhypo::cli

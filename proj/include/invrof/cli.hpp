#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace invrof::cli {

// Malformed or inconsistent command-line input; exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { eval, rof, inverse_rof, deintegrate, verify, decay_fit, solve, fracint, fracder };
enum class OutputFormat { csv, json };

Subcommand parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand c);

// "t0:t1:n[:log]": n + 1 points from t0 to t1, uniform or log-spaced.
struct GridSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t intervals = 1;
  bool log = false;

  static GridSpec parse(std::string_view text);
  std::vector<double> points() const;
  std::string str() const;
};

struct RunConfig {
  Subcommand command = Subcommand::eval;

  // eval: ml | ml-derivative | wright | bessel | gamma
  std::string function = "ml";
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;  // target order of inverse-rof, order of the Caputo equation in solve
  double rho = 0.5;
  double mu = 1.0;
  double nu = 0.0;
  double z_re = 0.0;
  double z_im = 0.0;
  int derivative_order = 1;

  std::string generator;  // builder string or matrix file
  std::string vector;     // comma-separated real entries; empty selects all ones
  std::string transform = "bessel";  // bessel | wright | analytic
  double delta = 0.0;                 // deintegrate target beta
  double order = 0.5;                 // fracint / fracder order

  std::optional<double> t;
  std::optional<GridSpec> grid;
  double t_lo = 1e2;
  double t_hi = 1e4;

  std::string suite = "all";
  unsigned workers = 0;  // 0 selects the environment default

  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> output;
  // Defaults to JSON for verify and CSV otherwise.
  std::optional<OutputFormat> format;

  std::optional<double> tol;
  std::optional<double> s_max;
  std::optional<int> nodes;

  // Throws UsageError for missing or inconsistent fields and unreadable input paths.
  void validate() const;
};

// Executes the configured subcommand, writing the artifact to the output
// path or `out`. Returns 0 on success, 1 on a tolerance or numerical
// failure, 2 on a usage or domain error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace invrof::cli

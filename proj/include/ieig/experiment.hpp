#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ieig/driver.hpp"

namespace ieig {

/// Accepts "a", "a+bi", "a-bi", "bi" (also with 'j'). Throws std::invalid_argument.
Scalar parse_complex(std::string_view text);

struct Accuracy {
  ToleranceMode mode = ToleranceMode::adaptive;
  double value = 1e-3;  // eps~ (adaptive) or eps (fixed)

  /// "1e-03", "exact", "fixed-1e-02"
  std::string label() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path matrix;
  Scalar sigma = 0.0;
  std::vector<MethodSpec> methods;
  std::vector<double> eps_tilde;
  bool exact = false;
  std::vector<double> fixed_eps;
  int m_max = 30;
  int max_restarts = 500;
  double ilu_drop_tol = 1e-3;
  int gmres_restart = 30;
  int gmres_cap = 1000;
  double tol_factor = 1e-12;
  std::filesystem::path out = "results";
  std::uint64_t seed = 1;

  /// Accuracy blocks in table order: each eps~, then fixed values, then exact.
  std::vector<Accuracy> accuracies() const;
  SolveConfig solve_config(const Accuracy& accuracy) const;
};

/// Declarative JSON config; keys mirror the command-line flags
/// (matrix, sigma, methods, eps_tilde, exact, fixed_eps, m_max, max_restarts,
/// ilu_droptol, gmres_restart, gmres_cap, tol_factor, out, seed, name).
/// Relative matrix and output paths are resolved against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CellResult {
  MethodSpec method;
  Accuracy accuracy;
  SolveReport report;
  double seconds = 0.0;
};

void write_history_csv(std::ostream& out, const std::vector<OuterRecord>& history);
std::vector<OuterRecord> read_history_csv(std::istream& in);

void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const CellResult& cell);

/// gnuplot-ready columns: residual vs outer iteration of the first cycle, and
/// end-of-cycle residual plus inner iterations vs restart.
void write_plot_data(const std::filesystem::path& prefix, const std::vector<OuterRecord>& history);

/// Runs every (accuracy, method) cell and writes histories, plot data and
/// summary.csv under cfg.out. Returns 0, or 2 when the matrix cannot be loaded
/// or the configuration is invalid. Solver failures are results, not errors.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log,
                   std::vector<CellResult>* results = nullptr);

std::string cell_stem(const MethodSpec& method, const Accuracy& accuracy);

}  // namespace ieig

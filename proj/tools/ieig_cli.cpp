// Command-line runner: solve sweeps, plot-data regeneration, planted test matrices.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ieig/experiment.hpp"
#include "ieig/planted.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string matrix;
  std::string sigma;
  std::vector<std::string> methods;
  std::vector<double> eps_tilde;
  std::vector<double> fixed_eps;
  bool exact = false;
  std::optional<int> m_max, max_restarts, gmres_restart, gmres_cap;
  std::optional<double> ilu_droptol, tol_factor;
  std::string out;
};

int do_run(const RunArgs& args) {
  ieig::ExperimentConfig cfg;
  try {
    if (!args.config.empty()) cfg = ieig::load_experiment_config(args.config);
    if (!args.matrix.empty()) cfg.matrix = args.matrix;
    if (!args.sigma.empty()) cfg.sigma = ieig::parse_complex(args.sigma);
    if (!args.methods.empty()) {
      cfg.methods.clear();
      for (const auto& name : args.methods) {
        if (name == "all") {
          for (const auto& m : ieig::all_methods()) cfg.methods.push_back(m);
          continue;
        }
        auto m = ieig::MethodSpec::parse(name);
        if (!m) throw std::invalid_argument("unknown method '" + name + "'");
        cfg.methods.push_back(*m);
      }
    }
    if (!args.eps_tilde.empty() || !args.fixed_eps.empty() || args.exact) {
      cfg.eps_tilde = args.eps_tilde;
      cfg.fixed_eps = args.fixed_eps;
      cfg.exact = args.exact;
    }
    if (args.m_max) cfg.m_max = *args.m_max;
    if (args.max_restarts) cfg.max_restarts = *args.max_restarts;
    if (args.gmres_restart) cfg.gmres_restart = *args.gmres_restart;
    if (args.gmres_cap) cfg.gmres_cap = *args.gmres_cap;
    if (args.ilu_droptol) cfg.ilu_drop_tol = *args.ilu_droptol;
    if (args.tol_factor) cfg.tol_factor = *args.tol_factor;
    if (!args.out.empty()) cfg.out = args.out;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (double e : cfg.eps_tilde) {
    if (!(e > 0.0 && e < 1.0)) {
      std::cerr << "error: --eps-tilde must lie in (0, 1)\n";
      return 2;
    }
  }
  if (cfg.matrix.empty()) {
    std::cerr << "error: no matrix given (--matrix or config)\n";
    return 2;
  }
  return ieig::run_experiment(cfg, std::cout);
}

int do_plotdata(const std::string& history, const std::string& prefix) {
  std::ifstream in(history);
  if (!in) {
    std::cerr << "error: cannot open " << history << '\n';
    return 2;
  }
  try {
    ieig::write_plot_data(prefix, ieig::read_history_csv(in));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int do_planted(const ieig::PlantedOptions& opts, const std::string& out) {
  try {
    const auto p = ieig::make_planted_problem(opts);
    ieig::save_matrix_market(out, p.matrix);
    std::cout.precision(17);
    std::cout << "sigma " << p.sigma.real() << (p.sigma.imag() < 0 ? "" : "+") << p.sigma.imag()
              << "i\ntarget " << p.target.real() << (p.target.imag() < 0 ? "" : "+")
              << p.target.imag() << "i\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restarted shift-invert eigensolvers for interior eigenvalues"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run one method or a sweep and write results");
  run_cmd->add_option("--config", run.config, "JSON experiment config");
  run_cmd->add_option("--matrix", run.matrix, "Matrix Market file");
  run_cmd->add_option("--sigma", run.sigma, "target shift, e.g. 0.05+0.5i");
  run_cmd->add_option("--method,--methods", run.methods, "sira hsira rhsira jd hjd rhjd, or all")
      ->delimiter(',');
  run_cmd->add_option("--eps-tilde", run.eps_tilde, "adaptive accuracy eps~ (repeatable)")
      ->delimiter(',');
  run_cmd->add_flag("--exact", run.exact, "also run with inner tolerance 1e-14");
  run_cmd->add_option("--fixed-eps", run.fixed_eps, "fixed inner tolerance (repeatable)")
      ->delimiter(',');
  run_cmd->add_option("--m-max", run.m_max, "maximum subspace dimension (30)");
  run_cmd->add_option("--max-restarts", run.max_restarts, "restart budget (500)");
  run_cmd->add_option("--ilu-droptol", run.ilu_droptol, "ILUT drop tolerance (1e-3)");
  run_cmd->add_option("--gmres-restart", run.gmres_restart, "GMRES restart length (30)");
  run_cmd->add_option("--gmres-cap", run.gmres_cap, "GMRES iteration cap (1000)");
  run_cmd->add_option("--tol-factor", run.tol_factor, "outer tolerance factor (1e-12)");
  run_cmd->add_option("--out", run.out, "output directory (results)");

  std::string history, prefix;
  auto* plot_cmd = app.add_subcommand("plotdata", "regenerate plot columns from a history file");
  plot_cmd->add_option("history", history, "history CSV")->required();
  plot_cmd->add_option("prefix", prefix, "output prefix")->required();

  ieig::PlantedOptions planted;
  std::string planted_out;
  auto* planted_cmd = app.add_subcommand("planted", "write a sparse matrix with known spectrum");
  planted_cmd->add_option("out", planted_out, "output .mtx")->required();
  planted_cmd->add_option("--n", planted.n, "dimension (100)");
  planted_cmd->add_option("--seed", planted.seed, "random seed (1)");
  planted_cmd->add_flag("--complex", planted.complex, "complex entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run_cmd) return do_run(run);
  if (*plot_cmd) return do_plotdata(history, prefix);
  return do_planted(planted, planted_out);
}

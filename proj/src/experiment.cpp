#include "ieig/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ieig {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view text, std::string_view whole) {
  const std::string s(text);
  if (s.empty() || std::isspace(static_cast<unsigned char>(s.front()))) {
    throw std::invalid_argument("malformed complex number '" + std::string(whole) + "'");
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("malformed complex number '" + std::string(whole) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

Scalar parse_complex(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty complex number");
  const char last = s.back();
  if (last != 'i' && last != 'j') return {parse_real(s, text), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, text);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_real(std::string_view(body).substr(0, split), text),
          imag_part(body.substr(split))};
}

std::string Accuracy::label() const {
  char buf[32];
  switch (mode) {
    case ToleranceMode::adaptive: std::snprintf(buf, sizeof buf, "%.0e", value); return buf;
    case ToleranceMode::exact: return "exact";
    case ToleranceMode::fixed: std::snprintf(buf, sizeof buf, "fixed-%.0e", value); return buf;
  }
  return "?";
}

std::vector<Accuracy> ExperimentConfig::accuracies() const {
  std::vector<Accuracy> acc;
  for (double e : eps_tilde) acc.push_back({ToleranceMode::adaptive, e});
  for (double e : fixed_eps) acc.push_back({ToleranceMode::fixed, e});
  if (exact) acc.push_back({ToleranceMode::exact, ToleranceGovernor::exact_tolerance});
  return acc;
}

SolveConfig ExperimentConfig::solve_config(const Accuracy& accuracy) const {
  SolveConfig c;
  c.sigma = sigma;
  c.m_max = m_max;
  c.max_restarts = max_restarts;
  c.tol_factor = tol_factor;
  c.mode = accuracy.mode;
  if (accuracy.mode == ToleranceMode::adaptive) c.eps_tilde = accuracy.value;
  if (accuracy.mode == ToleranceMode::fixed) c.fixed_eps = accuracy.value;
  c.ilu.drop_tol = ilu_drop_tol;
  c.gmres_restart = gmres_restart;
  c.gmres_cap = gmres_cap;
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.name = j.value("name", path.stem().string());
    if (j.contains("matrix")) {
      std::filesystem::path m = j.at("matrix").get<std::string>();
      if (m.is_relative()) m = path.parent_path() / m;
      cfg.matrix = m;
    }
    if (j.contains("sigma")) {
      const auto& s = j.at("sigma");
      cfg.sigma = s.is_number() ? Scalar(s.get<double>(), 0.0) : parse_complex(s.get<std::string>());
    }
    if (j.contains("methods")) {
      const auto& ms = j.at("methods");
      std::vector<std::string> names;
      if (ms.is_string()) names.push_back(ms.get<std::string>());
      else names = ms.get<std::vector<std::string>>();
      for (const auto& name : names) {
        if (name == "all") {
          for (const auto& m : all_methods()) cfg.methods.push_back(m);
          continue;
        }
        auto m = MethodSpec::parse(name);
        if (!m) throw std::invalid_argument("unknown method '" + name + "'");
        cfg.methods.push_back(*m);
      }
    }
    if (j.contains("eps_tilde")) {
      const auto& e = j.at("eps_tilde");
      if (e.is_number()) cfg.eps_tilde.push_back(e.get<double>());
      else cfg.eps_tilde = e.get<std::vector<double>>();
    }
    if (j.contains("fixed_eps")) {
      const auto& e = j.at("fixed_eps");
      if (e.is_number()) cfg.fixed_eps.push_back(e.get<double>());
      else cfg.fixed_eps = e.get<std::vector<double>>();
    }
    cfg.exact = j.value("exact", false);
    cfg.m_max = j.value("m_max", cfg.m_max);
    cfg.max_restarts = j.value("max_restarts", cfg.max_restarts);
    cfg.ilu_drop_tol = j.value("ilu_droptol", cfg.ilu_drop_tol);
    cfg.gmres_restart = j.value("gmres_restart", cfg.gmres_restart);
    cfg.gmres_cap = j.value("gmres_cap", cfg.gmres_cap);
    cfg.tol_factor = j.value("tol_factor", cfg.tol_factor);
    if (j.contains("out")) {
      std::filesystem::path o = j.at("out").get<std::string>();
      cfg.out = o.is_relative() ? path.parent_path() / o : o;
    }
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

std::string cell_stem(const MethodSpec& method, const Accuracy& accuracy) {
  return method.name() + "_" + accuracy.label();
}

void write_history_csv(std::ostream& out, const std::vector<OuterRecord>& history) {
  out << "cycle,m,rho_re,rho_im,residual,eps,c_prime,inner_iters,capped,solved,"
         "inner_rel_residual,inner_converged\n";
  const double nan = std::nan("");
  for (const auto& r : history) {
    out << r.cycle << ',' << r.m << ',' << format_double(r.rho.real()) << ','
        << format_double(r.rho.imag()) << ',' << format_double(r.residual_norm) << ','
        << format_double(r.solved ? r.eps_used : nan) << ','
        << format_double(r.solved ? r.c_prime : nan) << ',' << r.inner_iters << ','
        << (r.capped ? 1 : 0) << ',' << (r.solved ? 1 : 0) << ','
        << format_double(r.solved ? r.inner_rel_residual : nan) << ','
        << (r.inner_converged ? 1 : 0) << '\n';
  }
}

std::vector<OuterRecord> read_history_csv(std::istream& in) {
  std::vector<OuterRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("history: empty input");
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) {
      throw std::runtime_error("history line " + std::to_string(lineno) + ": expected 12 fields");
    }
    OuterRecord r;
    try {
      r.cycle = std::stoi(f[0]);
      r.m = std::stoi(f[1]);
      r.rho = {std::stod(f[2]), std::stod(f[3])};
      r.residual_norm = std::stod(f[4]);
      r.eps_used = std::stod(f[5]);
      r.c_prime = std::stod(f[6]);
      r.inner_iters = std::stoi(f[7]);
      r.capped = f[8] == "1";
      r.solved = f[9] == "1";
      r.inner_rel_residual = std::stod(f[10]);
      r.inner_converged = f[11] == "1";
    } catch (const std::logic_error&) {
      throw std::runtime_error("history line " + std::to_string(lineno) + ": malformed field");
    }
    records.push_back(r);
  }
  return records;
}

void write_summary_header(std::ostream& out) {
  out << "method,accuracy,i_restart,i_inner,p01,converged,lambda_re,lambda_im,residual,"
         "i_outer,failure\n";
}

void write_summary_row(std::ostream& out, const CellResult& cell) {
  const auto& r = cell.report;
  std::string p01 = "-";
  if (r.p_01) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *r.p_01);
    p01 = buf;
  }
  out << cell.method.name() << ',' << cell.accuracy.label() << ',' << r.i_restart << ','
      << r.i_inner << ',' << p01 << ',' << (r.converged ? "true" : "false") << ','
      << format_double(r.eigenvalue.real()) << ',' << format_double(r.eigenvalue.imag()) << ','
      << format_double(r.residual_norm) << ',' << r.i_outer << ',' << to_string(r.failure)
      << '\n';
}

void write_plot_data(const std::filesystem::path& prefix, const std::vector<OuterRecord>& history) {
  std::ofstream first(prefix.string() + ".cycle1.dat");
  first << "# outer_iteration residual\n";
  int k = 0;
  for (const auto& r : history) {
    if (r.cycle != 0) break;
    first << ++k << ' ' << format_double(r.residual_norm) << '\n';
  }

  std::ofstream restarts(prefix.string() + ".restarts.dat");
  restarts << "# restart residual inner_iters\n";
  std::size_t i = 0;
  while (i < history.size()) {
    const int cycle = history[i].cycle;
    long inner = 0;
    double residual = 0.0;
    for (; i < history.size() && history[i].cycle == cycle; ++i) {
      inner += history[i].inner_iters;
      residual = history[i].residual_norm;
    }
    restarts << cycle << ' ' << format_double(residual) << ' ' << inner << '\n';
  }
}

int run_experiment(const ExperimentConfig& cfg_in, std::ostream& log,
                   std::vector<CellResult>* results) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.methods.empty()) {
    for (const auto& m : all_methods()) cfg.methods.push_back(m);
  }
  if (cfg.eps_tilde.empty() && cfg.fixed_eps.empty() && !cfg.exact) cfg.eps_tilde.push_back(1e-3);
  if (!std::isfinite(cfg.sigma.real()) || !std::isfinite(cfg.sigma.imag())) {
    log << "error: sigma must be finite\n";
    return 2;
  }

  SparseMatrix a;
  try {
    a = load_matrix_market(cfg.matrix);
  } catch (const std::exception& e) {
    log << "error: cannot load matrix '" << cfg.matrix.string() << "': " << e.what() << '\n';
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) {
    log << "error: cannot create output directory '" << cfg.out.string() << "': " << ec.message()
        << '\n';
    return 2;
  }

  log << cfg.name << ": n=" << a.size() << " nnz=" << a.nnz() << " sigma=" << cfg.sigma.real()
      << (cfg.sigma.imag() < 0 ? "" : "+") << cfg.sigma.imag() << "i\n";

  std::vector<CellResult> cells;
  for (const auto& acc : cfg.accuracies()) {
    for (const auto& method : cfg.methods) {
      CellResult cell{method, acc, {}, 0.0};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        cell.report = solve(a, method, cfg.solve_config(acc));
      } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return 2;
      }
      cell.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const auto stem = cfg.out / cell_stem(method, acc);
      std::ofstream hist(stem.string() + ".history.csv");
      write_history_csv(hist, cell.report.history);
      write_plot_data(stem, cell.report.history);

      char line[256];
      std::snprintf(line, sizeof line, "%-7s %-12s restarts=%-5d inner=%-8ld conv=%-5s %.8g%+.8gi (%.1fs)\n",
                    method.name().c_str(), acc.label().c_str(), cell.report.i_restart,
                    cell.report.i_inner, cell.report.converged ? "yes" : "no",
                    cell.report.eigenvalue.real(), cell.report.eigenvalue.imag(), cell.seconds);
      log << line << std::flush;
      cells.push_back(std::move(cell));
    }
  }

  std::ofstream summary(cfg.out / "summary.csv");
  write_summary_header(summary);
  for (const auto& c : cells) write_summary_row(summary, c);
  if (results) *results = std::move(cells);
  return 0;
}

}  // namespace ieig

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "dwell/spectral.hpp"

namespace dwell::cli {

using nlohmann::json;

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Potential: return "potential";
    case Command::Density: return "density";
    case Command::QScan: return "qscan";
    case Command::Certify: return "certify";
    case Command::Solve: return "solve";
    case Command::Figure1: return "figure1";
    case Command::Figure2: return "figure2";
  }
  return "?";
}

void RunConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("--k must be > 0");
  if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("--D must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("--alpha must lie in (0, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("--epsilon must be > 0");
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("--M must be > 0");
  if (grid_n && *grid_n < 3) throw std::invalid_argument("--grid-n must be >= 3");
  if (x_min && x_max && !(*x_min < *x_max)) throw std::invalid_argument("--x-min must be < --x-max");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("--alphas entries must lie in (0, 1)");
  if (count < 1) throw std::invalid_argument("--count must be >= 1");
}

Format RunConfig::effective_format() const {
  if (format) return *format;
  return (command == Command::Certify || command == Command::Solve) ? Format::Report : Format::Csv;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) s += ',';
    s += t.columns[i];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_number(row[i]);
    }
    s += '\n';
  }
  return s;
}

namespace {

Grid grid_or(const RunConfig& cfg, double x_min, double x_max, std::size_t n) {
  return Grid::make(cfg.x_min.value_or(x_min), cfg.x_max.value_or(x_max), cfg.grid_n.value_or(n));
}

struct FigureCurve {
  double k;
  double alpha;
};
// D = 3 throughout.
constexpr FigureCurve kFigureCurves[] = {{1.0, 0.5}, {1.0, 0.1}, {0.7, 0.5}, {0.7, 0.1}};
constexpr double kFigureD = 3.0;

std::string curve_label(const char* prefix, const FigureCurve& c) {
  std::ostringstream s;
  s << prefix << "_k" << c.k << "_a" << c.alpha;
  return s.str();
}

Potential family_potential(double k, double D, double alpha) {
  return convex_potential(ConvexFamilySpec{GroundState::sech(), GroundState::sech(), alpha, D, k});
}

Table columns_over(const Grid& grid, std::vector<std::string> names,
                   const std::vector<std::vector<double>>& cols) {
  Table t;
  t.columns = std::move(names);
  t.rows.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    t.rows[i].push_back(grid.at(i));
    for (const auto& c : cols) t.rows[i].push_back(c[i]);
  }
  return t;
}

std::vector<double> density_column(double k, double D, double alpha, const Grid& grid) {
  const GroundState psi = sech_family_state(k, D, alpha);
  const double n2 = squared_norm(psi);
  return sample([&psi, n2](double x) {
    const double v = psi(x);
    return v * v / n2;
  }, grid);
}

void put_number(json& j, const std::string& key, double v) {
  if (std::isfinite(v))
    j[key] = v;
  else
    j[key] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("report field " + key + " is not a number");
  }
  return v.get<double>();
}

}  // namespace

Table potential_table(const RunConfig& cfg) {
  const Grid grid = grid_or(cfg, -12.0, 12.0, 2401);
  const Potential V = family_potential(cfg.k, cfg.D, cfg.alpha);
  return columns_over(grid, {"x", "V"}, {sample([&V](double x) { return V(x); }, grid)});
}

Table density_table(const RunConfig& cfg) {
  const Grid grid = grid_or(cfg, -30.0, 30.0, 6001);
  return columns_over(grid, {"x", "density"}, {density_column(cfg.k, cfg.D, cfg.alpha, grid)});
}

Table figure1_table(const RunConfig& cfg) {
  const Grid grid = grid_or(cfg, -12.0, 12.0, 2401);
  std::vector<std::string> names{"x"};
  std::vector<std::vector<double>> cols;
  for (const auto& c : kFigureCurves) {
    const Potential V = family_potential(c.k, kFigureD, c.alpha);
    names.push_back(curve_label("V", c));
    cols.push_back(sample([&V](double x) { return V(x); }, grid));
  }
  return columns_over(grid, std::move(names), cols);
}

Table figure2_table(const RunConfig& cfg) {
  const Grid grid = grid_or(cfg, -30.0, 30.0, 6001);
  std::vector<std::string> names{"x"};
  std::vector<std::vector<double>> cols;
  for (const auto& c : kFigureCurves) {
    names.push_back(curve_label("density", c));
    cols.push_back(density_column(c.k, kFigureD, c.alpha, grid));
  }
  return columns_over(grid, std::move(names), cols);
}

Table qscan_table(const RunConfig& cfg) {
  std::vector<double> alphas = cfg.alphas;
  if (alphas.empty()) alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999};
  Table t;
  t.columns = {"alpha", "q_closed_form", "q_quadrature", "ratio_closed_form", "ratio_quadrature",
               "quadrature_ok"};
  for (double a : alphas) {
    const double q_cf = q_closed_form_sech(cfg.k, cfg.D, a);
    const double r_cf = q_cf / q_closed_form_sech(cfg.k, cfg.D, 1.0 - a);
    double q_quad = std::numeric_limits<double>::quiet_NaN();
    double r_quad = q_quad;
    double ok = 0.0;
    try {
      q_quad = q_quotient(sech_family_state(cfg.k, cfg.D, a)).q;
      r_quad = q_quad / q_quotient(sech_family_state(cfg.k, cfg.D, 1.0 - a)).q;
      ok = 1.0;
    } catch (const NumericError&) {
      // flagged in the row; the sweep continues
    }
    t.rows.push_back({a, q_cf, q_quad, r_cf, r_quad, ok});
  }
  return t;
}

json solve_report(const RunConfig& cfg) {
  const Grid grid = cfg.x_min || cfg.x_max || cfg.grid_n
                        ? grid_or(cfg, default_box(cfg.D, cfg.k).x_min, default_box(cfg.D, cfg.k).x_max, 6000)
                        : default_box(cfg.D, cfg.k);
  const GroundState psi = sech_family_state(cfg.k, cfg.D, cfg.alpha);
  const SpectralResult s = low_spectrum(to_potential(psi), grid, std::max<std::size_t>(cfg.count, 2));

  const GroundState left = GroundState::from_expr(FunctionExpr::primitive(Primitive::Sech, 1.0, cfg.k, cfg.D));
  const GroundState right = GroundState::from_expr(FunctionExpr::primitive(Primitive::Sech, 1.0, cfg.k, -cfg.D));
  const TwoLevelFit fit = two_level_fit(s.eigenvectors[1], grid, left, right);

  json j;
  j["command"] = "solve";
  j["method"] = to_string(s.method);
  j["k"] = cfg.k;
  j["D"] = cfg.D;
  j["alpha"] = cfg.alpha;
  j["x_min"] = grid.x_min;
  j["x_max"] = grid.x_max;
  j["grid_n"] = grid.n;
  std::vector<double> ev(s.eigenvalues.begin(),
                         s.eigenvalues.begin() + static_cast<std::ptrdiff_t>(cfg.count));
  j["eigenvalues"] = ev;
  j["e0"] = s.eigenvalues[0];
  j["gap"] = s.eigenvalues[1] - s.eigenvalues[0];
  j["ground_overlap"] = grid_overlap(s.eigenvectors[0], grid, psi);
  j["ground_sign_changes"] = sign_changes(s.eigenvectors[0]);
  j["excited_sign_changes"] = sign_changes(s.eigenvectors[1]);
  j["n_left"] = fit.n_left;
  j["n_right"] = fit.n_right;
  j["overlap_e1"] = fit.overlap_e1;
  return j;
}

json to_json(const CertificationReport& r) {
  json j;
  put_number(j, "epsilon", r.epsilon);
  put_number(j, "m", r.M);
  put_number(j, "c_m", r.C_M);
  put_number(j, "k", r.K);
  put_number(j, "alpha_m", r.alpha_M);
  put_number(j, "beta_m", r.beta_M);
  put_number(j, "measured_sup", r.measured_sup);
  put_number(j, "q_alpha", r.q_alpha);
  put_number(j, "q_beta", r.q_beta);
  put_number(j, "q_ratio", r.q_ratio);
  j["pass_eps"] = r.pass_eps;
  j["pass_m"] = r.pass_M;
  return j;
}

CertificationReport certification_from_json(const json& j) {
  CertificationReport r;
  r.epsilon = get_number(j, "epsilon");
  r.M = get_number(j, "m");
  r.C_M = get_number(j, "c_m");
  r.K = get_number(j, "k");
  r.alpha_M = get_number(j, "alpha_m");
  r.beta_M = get_number(j, "beta_m");
  r.measured_sup = get_number(j, "measured_sup");
  r.q_alpha = get_number(j, "q_alpha");
  r.q_beta = get_number(j, "q_beta");
  r.q_ratio = get_number(j, "q_ratio");
  r.pass_eps = j.at("pass_eps").get<bool>();
  r.pass_M = j.at("pass_m").get<bool>();
  return r;
}

std::string report_to_csv(const json& report) {
  std::string s = "key,value\n";
  for (const auto& [key, v] : report.items()) {
    s += key;
    s += ',';
    if (v.is_array()) {
      bool first = true;
      for (const auto& e : v) {
        if (!first) s += ';';
        first = false;
        s += e.is_number() ? format_number(e.get<double>()) : e.dump();
      }
    } else if (v.is_number_float()) {
      s += format_number(v.get<double>());
    } else if (v.is_string()) {
      s += v.get<std::string>();
    } else {
      s += v.dump();
    }
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Entry point

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-well ground-state sensitivity toolkit"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Read options from a TOML/INI file (keys as the long flags)");

  RunConfig cfg;
  std::size_t grid_n = 0;
  double x_min = 0.0, x_max = 0.0;
  std::string format;
  app.add_option("--k", cfg.k, "Dilation k > 0")->capture_default_str();
  app.add_option("--D", cfg.D, "Well offset D > 0")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Weight alpha in (0, 1)")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "Sup-norm budget for certify")->capture_default_str();
  app.add_option("--M", cfg.M, "Asymmetry factor for certify")->capture_default_str();
  auto* o_n = app.add_option("--grid-n", grid_n, "Grid points");
  auto* o_lo = app.add_option("--x-min", x_min, "Grid start");
  auto* o_hi = app.add_option("--x-max", x_max, "Grid end");
  app.add_option("--alphas", cfg.alphas, "qscan: alpha values")->delimiter(',');
  app.add_option("--count", cfg.count, "solve: eigenpairs to report")->capture_default_str();
  app.add_option("--out", cfg.out, "Output path (default stdout)");
  auto* o_fmt = app.add_option("--format", format, "csv or report")
                    ->check(CLI::IsMember({"csv", "report"}));
  app.add_flag("--strict", cfg.strict, "certify: exit 3 unless every pass flag holds");

  const std::pair<const char*, Command> commands[] = {
      {"potential", Command::Potential}, {"density", Command::Density},
      {"qscan", Command::QScan},         {"certify", Command::Certify},
      {"solve", Command::Solve},         {"figure1", Command::Figure1},
      {"figure2", Command::Figure2}};
  const char* help[] = {"x, V(x) of the sech double-well family",
                        "x, normalized ground-state density",
                        "closed-form and quadrature quotient Q over alpha",
                        "certify an (epsilon, M) family built from the sech pair",
                        "finite-difference spectrum of the family potential",
                        "potential curves of the four reference parameter sets",
                        "density curves of the four reference parameter sets"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i)
    subs.push_back(app.add_subcommand(commands[i].first, help[i])->fallthrough());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) cfg.command = commands[i].second;
  if (o_n->count()) cfg.grid_n = grid_n;
  if (o_lo->count()) cfg.x_min = x_min;
  if (o_hi->count()) cfg.x_max = x_max;
  if (o_fmt->count()) cfg.format = format == "csv" ? Format::Csv : Format::Report;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  const Format fmt = cfg.effective_format();
  const bool tabular = cfg.command != Command::Certify && cfg.command != Command::Solve;
  if (tabular && fmt == Format::Report) {
    err << "usage error: " << to_string(cfg.command) << " only writes csv\n";
    return kUsage;
  }

  std::string text;
  int rc = kOk;
  try {
    switch (cfg.command) {
      case Command::Potential: text = to_csv(potential_table(cfg)); break;
      case Command::Density: text = to_csv(density_table(cfg)); break;
      case Command::QScan: text = to_csv(qscan_table(cfg)); break;
      case Command::Figure1: text = to_csv(figure1_table(cfg)); break;
      case Command::Figure2: text = to_csv(figure2_table(cfg)); break;
      case Command::Solve: {
        const json j = solve_report(cfg);
        text = fmt == Format::Report ? j.dump(2) + "\n" : report_to_csv(j);
        break;
      }
      case Command::Certify: {
        const CertificationReport r =
            certify_family(cfg.epsilon, cfg.M, {GroundState::sech(), GroundState::sech()});
        const json j = to_json(r);
        text = fmt == Format::Report ? j.dump(2) + "\n" : report_to_csv(j);
        if (cfg.strict && !(r.pass_eps && r.pass_M)) rc = kStrictFailure;
        break;
      }
    }
  } catch (const NumericError& e) {
    err << "numeric failure [" << e.stage() << "]: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumeric;
  }

  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    f << text;
    if (!f) {
      err << "cannot write output file " << cfg.out << '\n';
      return kNumeric;
    }
  }
  return rc;
}

}  // namespace dwell::cli

#include "invrof/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "invrof/cauchy.hpp"
#include "invrof/diagnostics.hpp"
#include "invrof/error.hpp"
#include "invrof/fraccalc.hpp"
#include "invrof/generator.hpp"
#include "invrof/inverse.hpp"
#include "invrof/rof.hpp"
#include "invrof/specfun.hpp"

namespace invrof::cli {

namespace {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

constexpr std::pair<Subcommand, std::string_view> subcommand_names[] = {
    {Subcommand::eval, "eval"},
    {Subcommand::rof, "rof"},
    {Subcommand::inverse_rof, "inverse-rof"},
    {Subcommand::deintegrate, "deintegrate"},
    {Subcommand::verify, "verify"},
    {Subcommand::decay_fit, "decay-fit"},
    {Subcommand::solve, "solve"},
    {Subcommand::fracint, "fracint"},
    {Subcommand::fracder, "fracder"},
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw UsageError(std::string(what) + ": cannot parse '" + s + "' as a number");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

OutputFormat format_of(const RunConfig& c) {
  if (c.format) return *c.format;
  return c.command == Subcommand::verify ? OutputFormat::json : OutputFormat::csv;
}

json config_echo(const RunConfig& c) {
  json j;
  j["subcommand"] = subcommand_name(c.command);
  switch (c.command) {
    case Subcommand::eval:
      j["function"] = c.function;
      j["alpha"] = c.alpha;
      j["beta"] = c.beta;
      j["rho"] = c.rho;
      j["mu"] = c.mu;
      j["nu"] = c.nu;
      j["z"] = {c.z_re, c.z_im};
      if (c.function == "ml-derivative") j["derivative_order"] = c.derivative_order;
      break;
    case Subcommand::verify:
      j["suite"] = c.suite;
      j["workers"] = c.workers;
      break;
    case Subcommand::fracint:
    case Subcommand::fracder:
      j["order"] = c.order;
      break;
    case Subcommand::solve:
      break;
    default:
      j["generator"] = c.generator;
      j["vector"] = c.vector.empty() ? "ones" : c.vector;
      j["alpha"] = c.alpha;
      j["beta"] = c.beta;
  }
  if (c.command == Subcommand::inverse_rof) {
    j["transform"] = c.transform;
    j["gamma"] = c.gamma;
  }
  if (c.command == Subcommand::deintegrate) j["delta"] = c.delta;
  if (c.command == Subcommand::decay_fit) {
    j["t_lo"] = c.t_lo;
    j["t_hi"] = c.t_hi;
  }
  if (c.t) j["t"] = *c.t;
  if (c.grid) j["grid"] = c.grid->str();
  if (c.input) j["input"] = c.input->string();
  if (c.tol) j["tol"] = *c.tol;
  if (c.s_max) j["s_max"] = *c.s_max;
  if (c.nodes) j["nodes"] = *c.nodes;
  return j;
}

// Rows of numbers with named columns, written as CSV or as a JSON object
// with the config echo and any extra fields.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& os, OutputFormat fmt, const Table& table, const RunConfig& c,
                 json extra = json::object()) {
  if (fmt == OutputFormat::csv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      os << (i ? "," : "") << csv_field(table.columns[i]);
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
      os << '\n';
    }
    return;
  }
  json j;
  j["config"] = config_echo(c);
  for (auto& [k, v] : extra.items()) j[k] = v;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) r.push_back(number(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << '\n';
}

std::vector<std::string> component_columns(Eigen::Index n) {
  std::vector<std::string> cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    cols.push_back("x" + std::to_string(i) + "_re");
    cols.push_back("x" + std::to_string(i) + "_im");
  }
  return cols;
}

void append_components(std::vector<double>& row, const Eigen::MatrixXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    row.push_back(v(i).real());
    row.push_back(v(i).imag());
  }
}

GeneratorMatrix load_generator(const RunConfig& c) { return parse_generator(c.generator); }

Eigen::VectorXcd load_vector(const RunConfig& c, Eigen::Index n) {
  if (c.vector.empty()) return Eigen::VectorXcd::Ones(n);
  std::vector<double> entries;
  std::stringstream ss(c.vector);
  for (std::string item; std::getline(ss, item, ',');) entries.push_back(parse_double(item, "--x"));
  if (Eigen::Index(entries.size()) != n)
    throw UsageError("--x: expected " + std::to_string(n) + " entries, got " +
                     std::to_string(entries.size()));
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = entries[i];
  return x;
}

std::vector<double> times_of(const RunConfig& c) {
  if (c.grid) return c.grid->points();
  return {*c.t};
}

QuadratureSpec quadrature_of(const RunConfig& c) {
  QuadratureSpec q;
  if (c.s_max) q.s_max = *c.s_max;
  if (c.nodes) q.nodes_per_oscillation = *c.nodes;
  if (c.tol) {
    q.tail_tolerance = *c.tol;
    q.panel_tolerance = std::min(q.panel_tolerance, *c.tol);
  }
  q.validate();
  return q;
}

int cmd_eval(const RunConfig& c, std::ostream& os) {
  const cplx z(c.z_re, c.z_im);
  cplx value;
  if (c.function == "ml")
    value = mittag_leffler(MLParams(c.alpha, c.beta), z);
  else if (c.function == "ml-derivative")
    value = mittag_leffler_derivative(c.alpha, c.beta, z, c.derivative_order);
  else if (c.function == "wright")
    value = wright(WrightParams(c.rho, c.mu), z);
  else if (c.function == "bessel")
    value = bessel_j(BesselOrder(c.nu), c.z_re);
  else if (c.function == "gamma")
    value = invrof::gamma(z);
  else
    throw UsageError("eval: unknown function '" + c.function +
                     "' (expected ml, ml-derivative, wright, bessel or gamma)");
  if (format_of(c) == OutputFormat::csv) {
    os << num(value.real());
    if (value.imag() != 0.0) os << ',' << num(value.imag());
    os << '\n';
  } else {
    json j;
    j["config"] = config_echo(c);
    j["value"] = {{"re", number(value.real())}, {"im", number(value.imag())}};
    os << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_rof(const RunConfig& c, std::ostream& os) {
  const ROFFamily fam(load_generator(c), ROFParams(c.alpha, c.beta));
  const Eigen::VectorXcd x = load_vector(c, fam.generator().dim());
  Table table{{"t"}, {}};
  for (auto& col : component_columns(x.size())) table.columns.push_back(col);
  for (double t : times_of(c)) {
    std::vector<double> row{t};
    append_components(row, rof_apply(fam, t, x));
    table.rows.push_back(std::move(row));
  }
  write_table(os, format_of(c), table, c);
  return 0;
}

TransformKind transform_kind(const std::string& name) {
  if (name == "bessel") return TransformKind::bessel_integrated;
  if (name == "wright") return TransformKind::wright_subordinated;
  if (name == "analytic") return TransformKind::analytic_derivative;
  throw UsageError("--transform: expected bessel, wright or analytic, got '" + name + "'");
}

int cmd_inverse_rof(const RunConfig& c, std::ostream& os) {
  const TransformKind kind = transform_kind(c.transform);
  const double target = kind == TransformKind::analytic_derivative ? 0.0 : c.gamma;
  const InverseTransformSpec spec(ROFParams(c.alpha, c.beta), target, kind);
  const ROFFamily fam(load_generator(c), spec.source);
  const Eigen::VectorXcd x = load_vector(c, fam.generator().dim());
  const QuadratureSpec q = quadrature_of(c);

  Table table{{"t"}, {}};
  for (auto& col : component_columns(x.size())) table.columns.push_back(col);
  table.columns.push_back("error");
  json quadrature = json::array();
  bool within = true;
  for (double t : times_of(c)) {
    TransformResult r;
    switch (kind) {
      case TransformKind::bessel_integrated: r = bessel_inverse_rof(fam, target, x, t, q); break;
      case TransformKind::wright_subordinated: r = wright_inverse_rof(fam, target, x, t, q); break;
      case TransformKind::analytic_derivative: r = analytic_inverse_rof(fam, x, t, q); break;
    }
    std::vector<double> row{t};
    append_components(row, r.value);
    row.push_back(r.error);
    table.rows.push_back(std::move(row));
    quadrature.push_back({{"t", t},
                          {"s_max", number(r.used.s_max)},
                          {"nodes_per_oscillation", r.used.nodes_per_oscillation},
                          {"tail_tolerance", r.used.tail_tolerance},
                          {"panel_tolerance", r.used.panel_tolerance},
                          {"panels", r.used.split_points.empty() ? 0 : r.used.split_points.size() - 1}});
    if (c.tol && !(r.error <= *c.tol * std::max(1.0, r.value.norm()))) within = false;
  }
  write_table(os, format_of(c), table, c, {{"quadrature", quadrature}});
  return within ? 0 : 1;
}

int cmd_deintegrate(const RunConfig& c, std::ostream& os) {
  const ROFFamily fam(load_generator(c), ROFParams(c.alpha, c.beta));
  const Eigen::VectorXcd x = load_vector(c, fam.generator().dim());
  const std::vector<double> grid = c.grid->points();
  const Trajectory r = deintegrate(fam, grid, c.delta, x);
  Table table{{"t"}, {}};
  for (auto& col : component_columns(x.size())) table.columns.push_back(col);
  for (std::size_t n = 0; n < r.size(); ++n) {
    std::vector<double> row{r.grid[n]};
    append_components(row, r.values[n]);
    table.rows.push_back(std::move(row));
  }
  write_table(os, format_of(c), table, c);
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  const unsigned workers = c.workers ? c.workers : default_workers();
  const auto results = run_verification_suite(c.suite, workers);
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const CheckResult& r) { return !r.passed; });
  if (format_of(c) == OutputFormat::csv) {
    os << "suite,name,value,threshold,passed,detail\n";
    for (const auto& r : results)
      os << csv_field(r.suite) << ',' << csv_field(r.name) << ',' << num(r.value) << ','
         << num(r.threshold) << ',' << (r.passed ? "true" : "false") << ','
         << csv_field(r.detail) << '\n';
  } else {
    json j;
    j["config"] = config_echo(c);
    j["total"] = results.size();
    j["failed"] = failed;
    json checks = json::array();
    for (const auto& r : results)
      checks.push_back({{"suite", r.suite},
                        {"name", r.name},
                        {"value", number(r.value)},
                        {"threshold", r.threshold},
                        {"passed", r.passed},
                        {"detail", r.detail}});
    j["checks"] = std::move(checks);
    os << j.dump(2) << '\n';
  }
  return failed == 0 ? 0 : 1;
}

int cmd_decay_fit(const RunConfig& c, std::ostream& os) {
  const ROFFamily fam(load_generator(c), ROFParams(c.alpha, c.beta));
  const DecayFitReport r = fit_decay(fam, c.t_lo, c.t_hi);
  const Table table{{"alpha", "beta", "t_lo", "t_hi", "fitted_slope", "expected_slope", "residual",
                     "envelope"},
                    {{c.alpha, c.beta, r.t_lo, r.t_hi, r.fitted_slope, r.expected_slope,
                      r.residual, r.envelope ? 1.0 : 0.0}}};
  write_table(os, format_of(c), table, c);
  if (c.tol && !(std::abs(r.fitted_slope - r.expected_slope) <= *c.tol)) return 1;
  return 0;
}

cplx json_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw UsageError("problem file: expected a number or an [re, im] pair, got " + j.dump());
}

Eigen::VectorXcd json_vector(const json& j) {
  if (!j.is_array()) throw UsageError("problem file: expected an array for a vector");
  Eigen::VectorXcd v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = json_complex(j[i]);
  return v;
}

Eigen::MatrixXcd json_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw UsageError("problem file: expected an array of rows");
  const auto n = Eigen::Index(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto row = json_vector(j[std::size_t(r)]);
    if (row.size() != n) throw UsageError("problem file: matrices must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

// A: builder string, {"shifted_negative_laplacian": {"n", "lambda"}}, or rows.
GeneratorMatrix json_generator(const json& j) {
  if (j.is_string()) return parse_generator(j.get<std::string>());
  if (j.is_object() && j.contains("shifted_negative_laplacian")) {
    const auto& p = j["shifted_negative_laplacian"];
    return shifted_negative_laplacian(p.at("n").get<int>(), p.value("lambda", 1.0));
  }
  return GeneratorMatrix(json_matrix(j));
}

// B: a number (multiple of the identity) or rows.
Eigen::MatrixXcd json_operator(const json& j, Eigen::Index n) {
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number()))
    return json_complex(j) * Eigen::MatrixXcd::Identity(n, n);
  return json_matrix(j);
}

int cmd_solve(const RunConfig& c, std::ostream& os, std::ostream& err) {
  json problem;
  try {
    std::ifstream in(*c.input);
    problem = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("problem file: " + std::string(e.what()));
  }
  const auto required = [&](const char* key) -> const json& {
    if (!problem.contains(key)) throw UsageError(std::string("problem file: missing '") + key + "'");
    return problem[key];
  };
  GeneratorMatrix A = json_generator(required("A"));
  const Eigen::MatrixXcd B = json_operator(problem.value("B", json(0.0)), A.dim());
  std::vector<double> grid;
  if (c.grid)
    grid = c.grid->points();
  else if (problem.contains("grid"))
    grid = GridSpec::parse(problem["grid"].get<std::string>()).points();
  else
    throw UsageError("solve: give --grid or a 'grid' entry in the problem file");
  const double a = problem.value("a", 0.0);
  const double gamma = required("gamma").get<double>();

  std::vector<Eigen::VectorXcd> data;
  const bool given_u = problem.contains("initial_u");
  const json& init = given_u ? problem["initial_u"] : required("initial_Au");
  if (!init.is_array()) throw UsageError("problem file: initial data must be an array of vectors");
  for (const auto& v : init) data.push_back(json_vector(v));

  auto p = given_u ? FCProblem::from_initial_u(std::move(A), B, a, gamma, data, std::move(grid))
                   : FCProblem(std::move(A), B, a, gamma, data, std::move(grid));
  p.interpolation_order = problem.value("interpolation_order", p.interpolation_order);
  if (c.tol) p.residual_tolerance = *c.tol;
  else p.residual_tolerance = problem.value("residual_tolerance", p.residual_tolerance);
  p.validate();

  const SolutionBundle s = solve_unsolved_in_derivative(p);
  Table table{{"t"}, {}};
  for (Eigen::Index i = 0; i < p.A.dim(); ++i) {
    table.columns.push_back("u" + std::to_string(i) + "_re");
    table.columns.push_back("u" + std::to_string(i) + "_im");
  }
  table.columns.push_back("residual");
  for (std::size_t n = 0; n < p.grid.size(); ++n) {
    std::vector<double> row{p.grid[n]};
    append_components(row, s.u.values[n]);
    row.push_back(s.residual.values[n](0, 0).real());
    table.rows.push_back(std::move(row));
  }
  json extra;
  extra["max_residual"] = s.max_residual;
  extra["residual_tolerance"] = p.residual_tolerance;
  extra["warning"] = s.warning;
  write_table(os, format_of(c), table, c, extra);
  if (!s.warning.empty()) {
    err << "solve: " << s.warning << " (max residual " << num(s.max_residual) << ")\n";
    return 1;
  }
  return 0;
}

// Header row, then rows of real numbers with t in the first column.
Table read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("input: empty CSV file " + path.string());
  std::stringstream header(line);
  for (std::string col; std::getline(header, col, ',');) table.columns.push_back(col);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(parse_double(cell, "input"));
    if (row.size() != table.columns.size())
      throw UsageError("input: row has " + std::to_string(row.size()) + " cells, header has " +
                       std::to_string(table.columns.size()));
    table.rows.push_back(std::move(row));
  }
  if (table.columns.size() < 2 || table.rows.size() < 2)
    throw UsageError("input: need a t column, one value column and two rows");
  return table;
}

int cmd_fractional(const RunConfig& c, std::ostream& os) {
  const Table in = read_csv_table(*c.input);
  const auto comps = Eigen::Index(in.columns.size() - 1);
  std::vector<double> grid;
  std::vector<Eigen::MatrixXcd> values;
  for (const auto& row : in.rows) {
    grid.push_back(row[0]);
    Eigen::MatrixXcd v(comps, 1);
    for (Eigen::Index i = 0; i < comps; ++i) v(i, 0) = row[std::size_t(i) + 1];
    values.push_back(std::move(v));
  }
  const Trajectory f(std::move(grid), std::move(values), 4);
  const FracOrder order(c.order);
  const Trajectory g =
      c.command == Subcommand::fracint ? frac_integral(f, order) : caputo_derivative(f, order);
  Table out{in.columns, {}};
  for (std::size_t n = 0; n < g.size(); ++n) {
    std::vector<double> row{g.grid[n]};
    for (Eigen::Index i = 0; i < comps; ++i) row.push_back(g.values[n](i, 0).real());
    out.rows.push_back(std::move(row));
  }
  write_table(os, format_of(c), out, c);
  return 0;
}

int dispatch(const RunConfig& c, std::ostream& os, std::ostream& err) {
  switch (c.command) {
    case Subcommand::eval: return cmd_eval(c, os);
    case Subcommand::rof: return cmd_rof(c, os);
    case Subcommand::inverse_rof: return cmd_inverse_rof(c, os);
    case Subcommand::deintegrate: return cmd_deintegrate(c, os);
    case Subcommand::verify: return cmd_verify(c, os);
    case Subcommand::decay_fit: return cmd_decay_fit(c, os);
    case Subcommand::solve: return cmd_solve(c, os, err);
    case Subcommand::fracint:
    case Subcommand::fracder: return cmd_fractional(c, os);
  }
  throw UsageError("unknown subcommand");
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& [cmd, n] : subcommand_names)
    if (n == name) return cmd;
  throw UsageError("unknown subcommand '" + std::string(name) + "'");
}

std::string_view subcommand_name(Subcommand c) {
  for (const auto& [cmd, n] : subcommand_names)
    if (cmd == c) return n;
  return "?";
}

GridSpec GridSpec::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log"))
    throw UsageError("--grid: expected t0:t1:n or t0:t1:n:log, got '" + std::string(text) + "'");
  GridSpec g;
  g.t0 = parse_double(parts[0], "--grid t0");
  g.t1 = parse_double(parts[1], "--grid t1");
  const double n = parse_double(parts[2], "--grid n");
  g.log = parts.size() == 4;
  if (!(n >= 1.0 && n == std::floor(n) && n <= 1e7))
    throw UsageError("--grid: n must be a positive integer");
  g.intervals = std::size_t(n);
  if (!(g.t1 > g.t0 && g.t0 >= 0.0)) throw UsageError("--grid: need 0 <= t0 < t1");
  if (g.log && !(g.t0 > 0.0)) throw UsageError("--grid: log spacing needs t0 > 0");
  return g;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double s = double(i) / double(intervals);
    pts[i] = log ? t0 * std::pow(t1 / t0, s) : t0 + (t1 - t0) * s;
  }
  pts.back() = t1;
  return pts;
}

std::string GridSpec::str() const {
  return num(t0) + ":" + num(t1) + ":" + std::to_string(intervals) + (log ? ":log" : "");
}

void RunConfig::validate() const {
  const bool needs_generator = command == Subcommand::rof || command == Subcommand::inverse_rof ||
                               command == Subcommand::deintegrate ||
                               command == Subcommand::decay_fit;
  if (needs_generator && generator.empty())
    throw UsageError(std::string(subcommand_name(command)) + ": --generator is required");
  const bool needs_times = command == Subcommand::rof || command == Subcommand::inverse_rof;
  if (needs_times && t.has_value() == grid.has_value())
    throw UsageError(std::string(subcommand_name(command)) + ": give exactly one of --t and --grid");
  if (t && !(*t >= 0.0)) throw UsageError("--t must be nonnegative");
  if (command == Subcommand::deintegrate && (!grid || grid->t0 != 0.0 || grid->log))
    throw UsageError("deintegrate: --grid must be uniform and start at 0");
  const bool needs_input = command == Subcommand::solve || command == Subcommand::fracint ||
                           command == Subcommand::fracder;
  if (needs_input && !input)
    throw UsageError(std::string(subcommand_name(command)) + ": --input is required");
  if (input && !std::filesystem::is_regular_file(*input))
    throw UsageError("--input: cannot read '" + input->string() + "'");
  if (output) {
    const auto dir = output->parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir))
      throw UsageError("--out: directory '" + dir.string() + "' does not exist");
  }
  if (tol && !(*tol > 0.0)) throw UsageError("--tol must be positive");
  if (s_max && !(*s_max > 0.0)) throw UsageError("--s-max must be positive");
  if (nodes && *nodes < 8) throw UsageError("--nodes must be at least 8");
  if (command == Subcommand::decay_fit && !(t_lo >= 10.0 && t_hi >= 100.0 * t_lo))
    throw UsageError("decay-fit: need --t-lo >= 10 and --t-hi >= 100 * t-lo");
  if (command == Subcommand::verify && suite != "all") {
    const auto names = verification_suites();
    if (std::find(names.begin(), names.end(), suite) == names.end())
      throw UsageError("verify: unknown suite '" + suite + "'");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int status = 0;
  try {
    config.validate();
    status = dispatch(config, buffer, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    if (format_of(config) == OutputFormat::json) {
      json j;
      j["config"] = config_echo(config);
      j["error"] = e.what();
      buffer.str({});
      buffer << j.dump(2) << '\n';
    }
    status = 1;
  }
  if (config.output) {
    std::ofstream file(*config.output, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "cannot write '" << config.output->string() << "'\n";
      return 1;
    }
  } else {
    out << buffer.str();
  }
  return status;
}

}  // namespace invrof::cli

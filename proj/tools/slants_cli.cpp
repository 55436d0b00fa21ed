// Command-line front end for the streaming sparse additive model library.
// Talks to the library exclusively through the C interface in slants.h.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "slants/slants.h"

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(slants_status status, const std::string& what) {
  if (status == SLANTS_OK) return;
  std::string message = what + ": " + slants_status_string(status);
  const char* detail = slants_last_error();
  if (detail && *detail) message += " (" + std::string(detail) + ")";
  throw CliError(message);
}

std::string fmt(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// --- CSV input -------------------------------------------------------------

struct Table {
  std::vector<std::string> names;
  std::vector<double> values;  // row-major
  std::size_t rows = 0;
  [[nodiscard]] std::size_t cols() const { return names.size(); }
};

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t column) {
  const auto where = [&] { return " at line " + std::to_string(line_no) + ", column " + std::to_string(column); };
  if (cell.empty()) throw CliError("missing value" + where());
  double value = 0.0;
  const char* begin = cell.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw CliError("non-numeric value '" + cell + "'" + where());
  }
  if (!std::isfinite(value)) throw CliError("non-finite value" + where());
  return value;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open input file " + path);
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (!header) {
      table.names = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != table.cols()) {
      throw CliError("expected " + std::to_string(table.cols()) + " columns but found " +
                     std::to_string(cells.size()) + " at line " + std::to_string(line_no));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) table.values.push_back(parse_cell(cells[c], line_no, c + 1));
    ++table.rows;
  }
  if (!header) throw CliError("input file " + path + " is empty");
  return table;
}

// --- config file -------------------------------------------------------------

// Reads key=value lines; '#' starts a comment. Returns "--key=value" tokens
// so that command-line flags, parsed afterwards, take precedence.
std::vector<std::string> config_arguments(const std::string& path, const std::set<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!known.count(key) || key == "config") {
      throw CliError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// --- fit ---------------------------------------------------------------------

struct FitOptions {
  std::string input;
  std::string out_dir = ".";
  std::size_t target = 1;
  bool all_targets = false;
  std::size_t max_lag = 1;
  std::size_t basis_size = 10;
  int degree = 2;
  std::string schedule = "harmonic";
  double forgetting = 0.99;
  std::optional<double> gamma;
  double q_lo = 0.01;
  double q_hi = 0.99;
  std::size_t warmup = 0;
  double nu = 1.05;
  double delta = 1.5;
  std::size_t window = 20;
  bool sliding = false;
  std::size_t em_iters = 5;
  double rel_tol = 1e-7;
  double lambda0 = 0.0;
  double lambda0_scale = 0.2;
  double tau0 = 0.0;
  double tau_scale = 0.5;
  bool step2 = false;
  double zeta = 0.4;
  std::size_t t1 = 0;
  std::size_t ar_order = 0;
  std::size_t grid = 200;
  double graph_floor = 1e-8;
  std::string snapshot;
};

struct ModelDeleter {
  void operator()(slants_model* m) const { slants_model_destroy(m); }
};
using ModelPtr = std::unique_ptr<slants_model, ModelDeleter>;

struct ArDeleter {
  void operator()(slants_ar* a) const { slants_ar_destroy(a); }
};

slants_config make_config(const FitOptions& o, std::size_t dim, std::size_t target) {
  slants_config c;
  slants_config_default(&c);
  c.dim = dim;
  c.target = target;
  c.max_lag = o.max_lag;
  c.basis_size = o.basis_size;
  c.degree = o.degree;
  c.q_lo = o.q_lo;
  c.q_hi = o.q_hi;
  c.warmup = o.warmup;
  if (o.schedule == "harmonic") {
    c.schedule = SLANTS_SCHEDULE_HARMONIC;
  } else {
    c.schedule = SLANTS_SCHEDULE_CONSTANT;
    c.gamma = o.gamma ? *o.gamma : 1.0 - o.forgetting;
  }
  c.delta = o.delta;
  c.nu = o.nu;
  c.window = o.window;
  c.sliding_window = o.sliding ? 1 : 0;
  c.em_iters = o.em_iters;
  c.rel_tol = o.rel_tol;
  c.lambda0 = o.lambda0;
  c.lambda0_scale = o.lambda0_scale;
  c.tau0 = o.tau0;
  c.tau_scale = o.tau_scale;
  return c;
}

std::vector<slants_step> run_model(slants_model* model, const Table& data) {
  std::vector<slants_step> steps(data.rows);
  for (std::size_t t = 0; t < data.rows; ++t) {
    check(slants_model_push(model, data.values.data() + t * data.cols(), data.cols(), &steps[t]),
          "fit failed at row " + std::to_string(t + 1));
  }
  return steps;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CliError("cannot write " + path.string());
  return out;
}

int run_fit(const FitOptions& o) {
  const Table data = read_csv(o.input);
  const std::size_t dim = data.cols();
  if (o.target < 1 || o.target > dim) throw CliError("target must lie in [1, " + std::to_string(dim) + "]");
  if (o.schedule != "harmonic" && o.schedule != "forgetting") {
    throw CliError("schedule must be 'harmonic' or 'forgetting'");
  }
  if (o.grid < 2) throw CliError("grid must be at least 2");

  std::vector<std::size_t> targets;
  if (o.all_targets) {
    for (std::size_t j = 0; j < dim; ++j) targets.push_back(j);
  } else {
    targets.push_back(o.target - 1);
  }

  std::vector<ModelPtr> models;
  for (const std::size_t j : targets) {
    const slants_config config = make_config(o, dim, j);
    slants_model* raw = nullptr;
    check(slants_model_create(&config, &raw), "invalid configuration");
    models.emplace_back(raw);
  }
  {
    const std::size_t warm = o.warmup ? o.warmup : std::max<std::size_t>(50, 5 * o.basis_size);
    if (data.rows < warm + o.max_lag + 1) {
      throw CliError("series too short: " + std::to_string(data.rows) + " rows, need more than " +
                     std::to_string(warm + o.max_lag));
    }
  }

  // One pipeline per target; results are collected by index so the output
  // order does not depend on scheduling.
  std::vector<std::vector<slants_step>> traces(models.size());
  std::vector<std::string> failures(models.size());
  {
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < models.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          traces[i] = run_model(models[i].get(), data);
        } catch (const std::exception& e) {
          failures[i] = "target " + std::to_string(targets[i] + 1) + ": " + e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw CliError(f);
  }

  const std::size_t primary_index = o.all_targets ? o.target - 1 : 0;
  slants_model* primary = models[primary_index].get();
  const auto& steps = traces[primary_index];
  const std::size_t target = targets[primary_index];

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);

  // Prediction errors with optional AR(p) comparison.
  std::unique_ptr<slants_ar, ArDeleter> ar;
  if (o.ar_order > 0) {
    slants_ar* raw = nullptr;
    check(slants_ar_create(o.ar_order, &raw), "AR baseline");
    ar.reset(raw);
  }
  {
    auto out = open_output(dir / "errors.csv");
    out << "t,y,yhat,err,cum_avg_err" << (ar ? ",ar_err,ar_cum_avg" : "") << '\n';
    double sum = 0.0;
    double ar_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < data.rows; ++t) {
      const double y = data.values[t * dim + target];
      double ar_hat = 0.0;
      if (ar) check(slants_ar_predict(ar.get(), &ar_hat), "AR baseline");
      const auto& s = steps[t];
      if (s.predicted) {
        ++n;
        sum += s.err;
        out << s.t << ',' << fmt(s.y) << ',' << fmt(s.yhat) << ',' << fmt(s.err) << ',' << fmt(sum / n);
        if (ar) {
          const double e = (y - ar_hat) * (y - ar_hat);
          ar_sum += e;
          out << ',' << fmt(e) << ',' << fmt(ar_sum / n);
        }
        out << '\n';
      }
      if (ar) check(slants_ar_update(ar.get(), y), "AR baseline");
    }
  }

  {
    auto out = open_output(dir / "tuning.csv");
    out << "t,lambda,tau,err_lo,err_mid,err_hi\n";
    for (const auto& s : steps) {
      if (!s.predicted) continue;
      out << s.t << ',' << fmt(s.lambda) << ',' << fmt(s.tau) << ',' << fmt(s.err_lo) << ',' << fmt(s.err_mid)
          << ',' << fmt(s.err_hi) << '\n';
    }
  }

  std::vector<std::size_t> active;
  {
    std::size_t count = 0;
    check(slants_model_active_set(primary, nullptr, 0, &count), "active set");
    active.resize(count);
    check(slants_model_active_set(primary, active.data(), active.size(), &count), "active set");
  }
  {
    auto out = open_output(dir / "components.csv");
    out << "covariate,lag,x,f_hat\n";
    std::vector<double> xs(o.grid);
    std::vector<double> fs_(o.grid);
    for (const std::size_t c : active) {
      std::size_t written = 0;
      check(slants_model_component(primary, c, o.grid, nullptr, nullptr, xs.data(), fs_.data(), &written),
            "component curve");
      for (std::size_t k = 0; k < written; ++k) {
        out << c / o.max_lag + 1 << ',' << c % o.max_lag + 1 << ',' << fmt(xs[k]) << ',' << fmt(fs_[k]) << '\n';
      }
    }
  }

  if (o.all_targets) {
    std::vector<const slants_model*> handles;
    for (const auto& m : models) handles.push_back(m.get());
    std::size_t needed = 0;
    check(slants_graph_dot(handles.data(), handles.size(), o.graph_floor, nullptr, 0, &needed), "graph");
    std::string dot(needed, '\0');
    check(slants_graph_dot(handles.data(), handles.size(), o.graph_floor, dot.data(), dot.size(), &needed),
          "graph");
    dot.resize(needed - 1);
    open_output(dir / "graph.dot") << dot;
  }

  if (o.step2) {
    const std::size_t t1 = o.t1 ? o.t1 : data.rows / 2;
    if (t1 >= data.rows) throw CliError("t1 must be smaller than the series length");
    std::vector<std::size_t> selected(active.size());
    std::size_t n_selected = 0;
    check(slants_backward_select(data.values.data(), data.rows, dim, target, o.max_lag, active.data(),
                                 active.size(), t1, o.zeta, o.degree, selected.data(), &n_selected),
          "step 2 selection");
    selected.resize(n_selected);
    auto out = open_output(dir / "selection.txt");
    out << "covariate,lag\n";
    for (const std::size_t c : selected) out << c / o.max_lag + 1 << ',' << c % o.max_lag + 1 << '\n';
  }

  if (!o.snapshot.empty()) {
    std::vector<const slants_model*> handles;
    for (const auto& m : models) handles.push_back(m.get());
    check(slants_snapshot_save(handles.data(), handles.size(), o.snapshot.c_str()), "snapshot");
  }
  return 0;
}

// --- other subcommands -----------------------------------------------------

struct GenOptions {
  int experiment = 1;
  std::size_t length = 500;
  std::uint64_t seed = 1;
  double noise_scale = 0.0;
  std::string output;
};

int run_gen(const GenOptions& o) {
  if (o.length == 0) throw CliError("length must be positive");
  std::size_t dim = 0;
  check(slants_generate(o.experiment, o.length, o.seed, o.noise_scale, nullptr, 0, &dim), "generator");
  std::vector<double> series(o.length * dim);
  check(slants_generate(o.experiment, o.length, o.seed, o.noise_scale, series.data(), series.size(), &dim), "generator");
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::trunc);
    if (!file) throw CliError("cannot write " + o.output);
  }
  std::ostream& out = o.output.empty() ? std::cout : file;
  for (std::size_t d = 0; d < dim; ++d) out << (d ? "," : "") << 'X' << d + 1;
  out << '\n';
  for (std::size_t t = 0; t < o.length; ++t) {
    for (std::size_t d = 0; d < dim; ++d) out << (d ? "," : "") << fmt(series[t * dim + d]);
    out << '\n';
  }
  return 0;
}

struct ScaleOptions {
  std::vector<std::size_t> T_values{1000, 2000, 3000};
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  bool batch = false;
  std::string output;
};

int run_scale(const ScaleOptions& o) {
  if (o.T_values.empty()) throw CliError("at least one T value is required");
  std::size_t count = 0;
  check(slants_scaling(o.T_values.data(), o.T_values.size(), o.repeats, o.seed, o.batch, nullptr, 0, &count),
        "scaling");
  std::vector<slants_scaling_row> rows(count);
  check(slants_scaling(o.T_values.data(), o.T_values.size(), o.repeats, o.seed, o.batch, rows.data(), rows.size(),
                       &count),
        "scaling");
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::trunc);
    if (!file) throw CliError("cannot write " + o.output);
  }
  std::ostream& out = o.output.empty() ? std::cout : file;
  out << "T,mean_seconds,stderr_seconds,method\n";
  for (const auto& r : rows) {
    out << r.T << ',' << fmt(r.mean_seconds) << ',' << fmt(r.stderr_seconds) << ','
        << (r.method == SLANTS_METHOD_STREAMING ? "slants" : "batch_rerun") << '\n';
  }
  return 0;
}

struct GraphOptions {
  std::string snapshot;
  std::string output;
  double floor = 1e-8;
};

int run_graph(const GraphOptions& o) {
  std::size_t count = 0;
  check(slants_snapshot_load(o.snapshot.c_str(), nullptr, 0, &count), "snapshot");
  std::vector<slants_model*> raw(count, nullptr);
  check(slants_snapshot_load(o.snapshot.c_str(), raw.data(), raw.size(), &count), "snapshot");
  std::vector<ModelPtr> models;
  for (auto* m : raw) models.emplace_back(m);
  std::vector<const slants_model*> handles(raw.begin(), raw.end());
  std::size_t needed = 0;
  check(slants_graph_dot(handles.data(), handles.size(), o.floor, nullptr, 0, &needed), "graph");
  std::string dot(needed, '\0');
  check(slants_graph_dot(handles.data(), handles.size(), o.floor, dot.data(), dot.size(), &needed), "graph");
  dot.resize(needed - 1);
  if (o.output.empty()) {
    std::cout << dot;
  } else {
    open_output(o.output) << dot;
  }
  return 0;
}

std::set<std::string> long_names(const CLI::App& app) {
  std::set<std::string> names;
  for (const CLI::Option* opt : app.get_options()) {
    for (const auto& n : opt->get_lnames()) names.insert(n);
  }
  return names;
}

// Splices config-file tokens in right after the subcommand name.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args.front());
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  auto extra = config_arguments(*path, long_names(*sub));
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming sparse additive models for nonlinear time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(slants_version()));
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  FitOptions fit;
  std::string config_path;
  auto* fit_cmd = app.add_subcommand("fit", "Stream a CSV through the model and write diagnostics");
  fit_cmd->add_option("--config", config_path, "key=value file supplying defaults");
  fit_cmd->add_option("-i,--input", fit.input, "CSV with a header row, one column per series")->required();
  fit_cmd->add_option("-o,--out-dir", fit.out_dir, "Output directory");
  fit_cmd->add_option("--target", fit.target, "1-based response column");
  fit_cmd->add_flag("--all-targets", fit.all_targets, "Fit every column and write graph.dot");
  fit_cmd->add_option("-L,--max-lag", fit.max_lag, "Largest lag")->check(CLI::PositiveNumber);
  fit_cmd->add_option("-v,--basis-size", fit.basis_size, "Splines per covariate")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--degree", fit.degree, "Spline degree")->check(CLI::Range(0, 10));
  fit_cmd->add_option("--schedule", fit.schedule, "harmonic or forgetting")
      ->check(CLI::IsMember({"harmonic", "forgetting"}));
  fit_cmd->add_option("--forgetting", fit.forgetting, "Forgetting factor 1-c of the forgetting schedule")
      ->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--gamma", fit.gamma, "Step size c of the forgetting schedule (overrides --forgetting)")
      ->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--q-lo", fit.q_lo, "Lower knot quantile")->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--q-hi", fit.q_hi, "Upper knot quantile")->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--warmup", fit.warmup, "Warm-up samples (0 selects max(50, 5v))");
  fit_cmd->add_option("--nu", fit.nu, "Channel error weight");
  fit_cmd->add_option("--delta", fit.delta, "Initial lambda channel ratio");
  fit_cmd->add_option("-W,--window", fit.window, "Channel comparison window")->check(CLI::PositiveNumber);
  fit_cmd->add_flag("--sliding", fit.sliding, "Use sliding instead of tumbling windows");
  fit_cmd->add_option("-K,--em-iters", fit.em_iters, "EM iterations per arrival")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--rel-tol", fit.rel_tol, "EM relative step tolerance");
  fit_cmd->add_option("--lambda0", fit.lambda0, "Initial lambda (0 selects automatically)");
  fit_cmd->add_option("--lambda0-scale", fit.lambda0_scale, "Scale of the automatic initial lambda");
  fit_cmd->add_option("--tau0", fit.tau0, "Initial tau (0 selects automatically)");
  fit_cmd->add_option("--tau-scale", fit.tau_scale, "Scale of the automatic initial tau");
  fit_cmd->add_flag("--step2", fit.step2, "Run backward BIC selection after streaming");
  fit_cmd->add_option("--zeta", fit.zeta, "Step 2 basis growth exponent");
  fit_cmd->add_option("--t1", fit.t1, "Step 2 uses rows after t1 (0 selects half the series)");
  fit_cmd->add_option("--ar-order", fit.ar_order, "Add AR(p) baseline error columns");
  fit_cmd->add_option("--grid", fit.grid, "Points per component curve");
  fit_cmd->add_option("--graph-floor", fit.graph_floor, "Group norm below which an edge is dropped");
  fit_cmd->add_option("--snapshot", fit.snapshot, "Write the fitted models to this file");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a synthetic data set as CSV");
  gen_cmd->add_option("--config", config_path, "key=value file supplying defaults");
  gen_cmd->add_option("-e,--experiment", gen.experiment, "1 stationary, 2 change point, 3 network, 4 scaling")
      ->check(CLI::Range(1, 4));
  gen_cmd->add_option("-T,--length", gen.length, "Number of time steps");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--noise-scale", gen.noise_scale, "Innovation standard deviation of experiment 3");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  ScaleOptions scale;
  auto* scale_cmd = app.add_subcommand("scale", "Time full streaming passes for several lengths");
  scale_cmd->add_option("--config", config_path, "key=value file supplying defaults");
  scale_cmd->add_option("-T,--lengths", scale.T_values, "Comma separated series lengths")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  scale_cmd->add_option("--repeats", scale.repeats, "Repeats per length")->check(CLI::PositiveNumber);
  scale_cmd->add_option("--seed", scale.seed, "Random seed");
  scale_cmd->add_flag("--batch", scale.batch, "Also time the refit-every-step batch baseline");
  scale_cmd->add_option("-o,--output", scale.output, "Output file (default stdout)");

  GraphOptions graph;
  auto* graph_cmd = app.add_subcommand("graph", "Extract the causality graph from a snapshot");
  graph_cmd->add_option("--config", config_path, "key=value file supplying defaults");
  graph_cmd->add_option("-s,--snapshot", graph.snapshot, "Snapshot written by fit")->required();
  graph_cmd->add_option("-o,--output", graph.output, "Output file (default stdout)");
  graph_cmd->add_option("--floor", graph.floor, "Group norm below which an edge is dropped");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*gen_cmd) return run_gen(gen);
    if (*scale_cmd) return run_scale(scale);
    if (*graph_cmd) return run_graph(graph);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "pdcov/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdcov/model_selection.hpp"
#include "pdcov/random.hpp"
#include "pdcov/sketch_admm.hpp"
#include "pdcov/threshold_estimator.hpp"

namespace pdcov {

namespace fs = std::filesystem;
using boost::property_tree::ptree;
using nlohmann::ordered_json;

namespace {

// Random streams under the root seed.
constexpr std::uint64_t kStreamData = 0;
constexpr std::uint64_t kStreamCv = 1;
constexpr std::uint64_t kStreamSketch = 2;

const std::set<std::string> kKnownKeys = {
    "run.command",        "run.seed",           "run.out",           "run.threads",        "run.verbosity",
    "input.samples",      "input.center",       "simulate.model",    "simulate.d",         "simulate.n",
    "penalty.family",     "penalty.lambda",     "penalty.q",         "penalty.scad_a",     "adm.rho_target",
    "adm.rho_init",       "adm.rho_growth",     "adm.prox_c",        "adm.prox_d",         "adm.prox_scale",
    "adm.eps",            "adm.tol",            "adm.max_iter",      "adm.trace",          "adm.precheck",
    "cv.folds",           "cv.repeats",         "cv.grid_points",    "cv.grid_min_ratio",  "cv.lambdas",
    "cv.estimator",       "bench.models",       "bench.n_values",    "bench.mc_runs",      "bench.estimators",
    "bench.cv_folds",     "bench.cv_repeats",   "bench.grid_points", "bench.grid_min_ratio",
    "sketch.matrix",      "sketch.m",           "sketch.matrix_file"};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw Error(ErrorKind::Parse, "config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorKind::Parse, "config key '" + key + "': expected a boolean, got '" + text + "'");
}

// "block:40, toeplitz:40"
std::vector<CovModel> parse_models(const std::string& text) {
  std::vector<CovModel> out;
  for (const auto& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Parse, "model '" + item + "' should look like kind:d");
    out.push_back({parse_cov_kind(item.substr(0, colon)), parse_value<int>("bench.models", item.substr(colon + 1))});
  }
  return out;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  return out;
}

void write_json(const std::string& dir, const std::string& name, const ordered_json& j) {
  auto out = open_out(dir, name);
  out << j.dump(2) << '\n';
}

void write_trace_csv(const std::string& dir, const EstimationReport& rep) {
  auto out = open_out(dir, "trace.csv");
  out << "iter,rho,objective,step_norm\n" << std::setprecision(17);
  for (std::size_t k = 0; k < rep.objective_trace.size(); ++k) {
    out << k + 1 << ',' << rep.rho_trace[k] << ',' << rep.objective_trace[k] << ',' << rep.step_norm_trace[k] << '\n';
  }
}

using Clock = std::chrono::steady_clock;

void write_manifest(const CliConfig& cfg, Clock::time_point start, const std::vector<std::string>& outputs,
                    int exit_code) {
  ordered_json j;
  j["tool"] = "pdcov";
  j["version"] = kVersion;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  j["exit_code"] = exit_code;
  j["outputs"] = outputs;
  j["config"] = ordered_json::parse(config_to_json(cfg));
  write_json(cfg.out_dir, "manifest.json", j);
}

struct Dataset {
  SampleSet samples;
  std::optional<SymMat> truth;  // known only for simulated data
};

Dataset load_data(const CliConfig& cfg) {
  if (!cfg.samples.empty()) return {read_samples_file(cfg.samples), std::nullopt};
  const SymMat truth = make_cov(cfg.sim_model);
  return {sample_gaussian(truth, cfg.sim_n, derive_seed(cfg.seed, {kStreamData})), truth};
}

CvPlan make_cv_plan(const CliConfig& cfg, const SymMat& s) {
  CvPlan plan;
  plan.folds = cfg.cv_folds;
  plan.repeats = cfg.cv_repeats;
  plan.lambda_grid = cfg.lambda_grid.empty() ? default_lambda_grid(s, cfg.grid_points, cfg.grid_min_ratio)
                                             : cfg.lambda_grid;
  plan.seed = derive_seed(cfg.seed, {kStreamCv});
  plan.threads = cfg.threads;
  return plan;
}

PathEstimator make_path_estimator(const CliConfig& cfg) {
  return cfg.cv_threshold ? threshold_path_estimator() : adm_path_estimator(cfg.adm);
}

void write_cv_folds_csv(const std::string& dir, const CvResult& cv) {
  auto out = open_out(dir, "cv_folds.csv");
  out << "repeat,fold,lambda,loss,converged,iters\n" << std::setprecision(17);
  for (const auto& f : cv.folds) {
    out << f.repeat << ',' << f.fold << ',' << f.lambda << ',' << f.loss << ',' << (f.converged ? 1 : 0) << ','
        << f.iters << '\n';
  }
}

ordered_json report_json(const EstimationReport& rep) {
  ordered_json j;
  j["converged"] = rep.converged;
  j["iters"] = rep.iters;
  j["final_step_norm"] = rep.final_step_norm;
  j["min_eig"] = rep.min_eig;
  j["sparsity_offdiag"] = rep.sparsity_offdiag;
  return j;
}

}  // namespace

void CliConfig::validate() const {
  static const std::set<std::string> commands = {"estimate", "bench", "sketch", "cv"};
  if (!commands.count(command)) {
    throw Error(ErrorKind::InvalidArgument, "command must be one of estimate|bench|sketch|cv, got '" + command + "'");
  }
  if (threads < 0) throw Error(ErrorKind::InvalidArgument, "threads must be >= 0");
  if (out_dir.empty()) throw Error(ErrorKind::InvalidArgument, "output directory is empty");
  penalty.validate();
  if (lambda && !(*lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  adm.validate();
  if (samples.empty()) sim_model.validate();
  if (!samples.empty() && !fs::exists(samples)) throw Error(ErrorKind::Io, "input file not found: " + samples);
  if (sketch_kind == SketchMatrixKind::File && !fs::exists(sketch_matrix)) {
    throw Error(ErrorKind::Io, "sketch matrix file not found: " + sketch_matrix);
  }
  if (sketch_m < 0) throw Error(ErrorKind::InvalidArgument, "sketch.m must be >= 0");
  if (command == "bench") bench.validate();
}

ptree read_config_file(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::Io, "config file not found: " + path);
  ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::Parse, std::string("config file: ") + e.what());
  }
  return tree;
}

CliConfig config_from_tree(const ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(ErrorKind::Parse, "config key '" + section + "' is outside any section");
    for (const auto& [name, leaf] : body) {
      if (!kKnownKeys.count(section + "." + name)) {
        throw Error(ErrorKind::Parse, "unknown config key '" + section + "." + name + "'");
      }
    }
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(ptree::path_type(key, '.'))) return *v;
    return std::nullopt;
  };

  CliConfig cfg;
  if (auto v = get("run.command")) cfg.command = *v;
  if (auto v = get("run.seed")) cfg.seed = parse_value<std::uint64_t>("run.seed", *v);
  if (auto v = get("run.out")) cfg.out_dir = *v;
  if (auto v = get("run.threads")) cfg.threads = parse_value<int>("run.threads", *v);
  if (auto v = get("run.verbosity")) cfg.verbosity = parse_value<int>("run.verbosity", *v);

  if (auto v = get("input.samples")) cfg.samples = *v;
  if (auto v = get("input.center")) cfg.center = parse_bool("input.center", *v);

  if (auto v = get("simulate.model")) cfg.sim_model.kind = parse_cov_kind(*v);
  if (auto v = get("simulate.d")) cfg.sim_model.d = parse_value<int>("simulate.d", *v);
  if (auto v = get("simulate.n")) cfg.sim_n = parse_value<int>("simulate.n", *v);

  if (auto v = get("penalty.family")) cfg.penalty.family = parse_penalty_family(*v);
  if (auto v = get("penalty.lambda")) cfg.lambda = parse_value<double>("penalty.lambda", *v);
  if (auto v = get("penalty.q")) cfg.penalty.q = parse_value<double>("penalty.q", *v);
  if (auto v = get("penalty.scad_a")) cfg.penalty.scad_a = parse_value<double>("penalty.scad_a", *v);

  AdmConfig& adm = cfg.adm;
  if (auto v = get("adm.rho_target")) adm.rho_target = parse_value<double>("adm.rho_target", *v);
  if (auto v = get("adm.rho_init")) adm.rho_init = parse_value<double>("adm.rho_init", *v);
  if (auto v = get("adm.rho_growth")) adm.rho_growth = parse_value<double>("adm.rho_growth", *v);
  if (auto v = get("adm.prox_c")) adm.prox_c = parse_value<double>("adm.prox_c", *v);
  if (auto v = get("adm.prox_d")) adm.prox_d = parse_value<double>("adm.prox_d", *v);
  if (auto v = get("adm.prox_scale")) adm.prox_scale = parse_value<double>("adm.prox_scale", *v);
  if (auto v = get("adm.eps")) adm.eps_floor = parse_value<double>("adm.eps", *v);
  if (auto v = get("adm.tol")) adm.tol = parse_value<double>("adm.tol", *v);
  if (auto v = get("adm.max_iter")) adm.max_iter = parse_value<int>("adm.max_iter", *v);
  if (auto v = get("adm.trace")) cfg.trace = parse_bool("adm.trace", *v);
  if (auto v = get("adm.precheck")) cfg.precheck = parse_bool("adm.precheck", *v);

  if (auto v = get("cv.folds")) cfg.cv_folds = parse_value<int>("cv.folds", *v);
  if (auto v = get("cv.repeats")) cfg.cv_repeats = parse_value<int>("cv.repeats", *v);
  if (auto v = get("cv.grid_points")) cfg.grid_points = parse_value<int>("cv.grid_points", *v);
  if (auto v = get("cv.grid_min_ratio")) cfg.grid_min_ratio = parse_value<double>("cv.grid_min_ratio", *v);
  if (auto v = get("cv.lambdas")) {
    for (const auto& item : split_list(*v)) cfg.lambda_grid.push_back(parse_value<double>("cv.lambdas", item));
  }
  if (auto v = get("cv.estimator")) {
    if (*v != "adm" && *v != "threshold") throw Error(ErrorKind::Parse, "cv.estimator must be adm or threshold");
    cfg.cv_threshold = *v == "threshold";
  }

  BenchConfig& bench = cfg.bench;
  bench.models = {{CovKind::Block, 40}, {CovKind::Toeplitz, 40}, {CovKind::Banded, 40}};
  bench.n_values = {100, 200, 400, 600, 800};
  bench.estimators = default_adm_estimators();
  if (auto v = get("bench.models")) bench.models = parse_models(*v);
  if (auto v = get("bench.n_values")) {
    bench.n_values.clear();
    for (const auto& item : split_list(*v)) bench.n_values.push_back(parse_value<int>("bench.n_values", item));
  }
  if (auto v = get("bench.mc_runs")) bench.mc_runs = parse_value<int>("bench.mc_runs", *v);
  if (auto v = get("bench.estimators")) {
    bench.estimators.clear();
    for (const auto& item : split_list(*v)) {
      bench.estimators.push_back(parse_bench_estimator(item, cfg.penalty.scad_a, cfg.penalty.q));
    }
  } else {
    for (auto& e : bench.estimators) {
      e.family.scad_a = cfg.penalty.scad_a;
      e.family.q = cfg.penalty.q;
    }
  }
  if (auto v = get("bench.cv_folds")) bench.cv_folds = parse_value<int>("bench.cv_folds", *v);
  if (auto v = get("bench.cv_repeats")) bench.cv_repeats = parse_value<int>("bench.cv_repeats", *v);
  if (auto v = get("bench.grid_points")) bench.grid_points = parse_value<int>("bench.grid_points", *v);
  if (auto v = get("bench.grid_min_ratio")) bench.grid_min_ratio = parse_value<double>("bench.grid_min_ratio", *v);

  if (auto v = get("sketch.matrix")) {
    if (*v == "gaussian") {
      cfg.sketch_kind = SketchMatrixKind::Gaussian;
    } else if (*v == "identity") {
      cfg.sketch_kind = SketchMatrixKind::Identity;
    } else if (*v == "file") {
      cfg.sketch_kind = SketchMatrixKind::File;
    } else {
      throw Error(ErrorKind::Parse, "sketch.matrix must be gaussian, identity or file");
    }
  }
  if (auto v = get("sketch.m")) cfg.sketch_m = parse_value<int>("sketch.m", *v);
  if (auto v = get("sketch.matrix_file")) cfg.sketch_matrix = *v;

  bench.seed = cfg.seed;
  bench.adm = cfg.adm;
  bench.threads = cfg.threads;
  return cfg;
}

std::string config_to_json(const CliConfig& cfg) {
  ordered_json j;
  j["run"] = {{"command", cfg.command},
              {"seed", cfg.seed},
              {"out", cfg.out_dir},
              {"threads", cfg.threads},
              {"verbosity", cfg.verbosity}};
  j["input"] = {{"samples", cfg.samples}, {"center", cfg.center}};
  j["simulate"] = {{"model", to_string(cfg.sim_model.kind)}, {"d", cfg.sim_model.d}, {"n", cfg.sim_n}};
  j["penalty"] = {{"family", to_string(cfg.penalty.family)},
                  {"lambda", cfg.lambda ? ordered_json(*cfg.lambda) : ordered_json(nullptr)},
                  {"q", cfg.penalty.q},
                  {"scad_a", cfg.penalty.scad_a}};
  const AdmConfig& a = cfg.adm;
  j["adm"] = {{"rho_target", a.rho_target},
              {"rho_init", a.rho_init},
              {"rho_growth", a.rho_growth},
              {"prox_c", a.prox_c ? ordered_json(*a.prox_c) : ordered_json(nullptr)},
              {"prox_d", a.prox_d ? ordered_json(*a.prox_d) : ordered_json(nullptr)},
              {"prox_scale", a.prox_scale},
              {"eps", a.eps_floor},
              {"tol", a.tol},
              {"max_iter", a.max_iter},
              {"trace", cfg.trace},
              {"precheck", cfg.precheck}};
  j["cv"] = {{"folds", cfg.cv_folds},
             {"repeats", cfg.cv_repeats},
             {"grid_points", cfg.grid_points},
             {"grid_min_ratio", cfg.grid_min_ratio},
             {"lambdas", cfg.lambda_grid},
             {"estimator", cfg.cv_threshold ? "threshold" : "adm"}};
  ordered_json models = ordered_json::array();
  for (const auto& m : cfg.bench.models) models.push_back(std::string(to_string(m.kind)) + ":" + std::to_string(m.d));
  ordered_json estimators = ordered_json::array();
  for (const auto& e : cfg.bench.estimators) estimators.push_back(e.name);
  j["bench"] = {{"models", models},
                {"n_values", cfg.bench.n_values},
                {"mc_runs", cfg.bench.mc_runs},
                {"estimators", estimators},
                {"cv_folds", cfg.bench.cv_folds},
                {"cv_repeats", cfg.bench.cv_repeats},
                {"grid_points", cfg.bench.grid_points},
                {"grid_min_ratio", cfg.bench.grid_min_ratio}};
  const char* kind = cfg.sketch_kind == SketchMatrixKind::Gaussian   ? "gaussian"
                     : cfg.sketch_kind == SketchMatrixKind::Identity ? "identity"
                                                                     : "file";
  j["sketch"] = {{"matrix", kind}, {"m", cfg.sketch_m}, {"matrix_file", cfg.sketch_matrix}};
  return j.dump();
}

int cmd_estimate(const CliConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  ensure_out_dir(cfg.out_dir);
  const Dataset data = load_data(cfg);
  const SymMat r = sample_cov(data.samples, cfg.center);
  const SymMat s = cov_to_corr(r);
  std::vector<std::string> outputs;

  double lambda = 0.0;
  std::string lambda_source = "given";
  if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else {
    const CvPlan plan = make_cv_plan(cfg, s);
    const CvResult cv = cross_validate(data.samples, cfg.penalty, plan, make_path_estimator(cfg));
    lambda = cv.best_lambda;
    lambda_source = "cv";
    auto out = open_out(cfg.out_dir, "cv_surface.csv");
    write_cv_surface_csv(out, plan, cv);
    outputs.push_back("cv_surface.csv");
  }
  const PenaltySpec spec = cfg.penalty.with_lambda(lambda);

  EstimationReport rep;
  std::string method = "adm";
  const ThresholdReport pre = generalized_threshold_estimate(s, spec);
  if (cfg.precheck && pre.min_eig >= cfg.adm.eps_floor) {
    method = "threshold";
    rep.theta_hat = pre.estimate;
    rep.converged = true;
    rep.min_eig = pre.min_eig;
    rep.sparsity_offdiag = pre.sparsity_offdiag;
  } else {
    rep = solve_correlation(s, spec, cfg.adm);
  }
  const SymMat sigma_hat = corr_to_cov(rep.theta_hat, r);

  write_sym_file((fs::path(cfg.out_dir) / "theta_hat.txt").string(), rep.theta_hat);
  write_sym_file((fs::path(cfg.out_dir) / "sigma_hat.txt").string(), sigma_hat);
  outputs.insert(outputs.end(), {"theta_hat.txt", "sigma_hat.txt", "summary.json"});
  if (cfg.trace) {
    write_trace_csv(cfg.out_dir, rep);
    outputs.push_back("trace.csv");
  }

  ordered_json summary = report_json(rep);
  summary["method"] = method;
  summary["family"] = to_string(spec.family);
  summary["lambda"] = lambda;
  summary["lambda_source"] = lambda_source;
  summary["n"] = data.samples.n();
  summary["d"] = data.samples.d();
  summary["threshold_min_eig"] = pre.min_eig;
  if (data.truth) {
    summary["rel_frob"] = relative_error(sigma_hat, *data.truth, ErrorMetric::Frobenius);
    summary["rel_spec"] = relative_error(sigma_hat, *data.truth, ErrorMetric::Spectral);
  }
  write_json(cfg.out_dir, "summary.json", summary);

  const int code = rep.converged ? kExitOk : kExitNotConverged;
  write_manifest(cfg, start, outputs, code);
  if (cfg.verbosity > 0) {
    log << "estimate: lambda=" << lambda << " (" << lambda_source << ") iters=" << rep.iters
        << " min_eig=" << rep.min_eig << " sparsity=" << rep.sparsity_offdiag << '\n';
  }
  if (!rep.converged) log << "estimate: solver stopped at max_iter=" << cfg.adm.max_iter << " without converging\n";
  return code;
}

int cmd_cv(const CliConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  ensure_out_dir(cfg.out_dir);
  const Dataset data = load_data(cfg);
  const SymMat s = sample_corr(data.samples);
  const CvPlan plan = make_cv_plan(cfg, s);
  const CvResult cv = cross_validate(data.samples, cfg.penalty, plan, make_path_estimator(cfg));

  {
    auto out = open_out(cfg.out_dir, "cv_surface.csv");
    write_cv_surface_csv(out, plan, cv);
  }
  write_cv_folds_csv(cfg.out_dir, cv);

  bool all_converged = true;
  for (const auto& f : cv.folds) all_converged = all_converged && f.converged;
  const Eigen::VectorXd mean = cv.losses.rowwise().mean();
  ordered_json result;
  result["family"] = to_string(cfg.penalty.family);
  result["best_lambda"] = cv.best_lambda;
  result["lambda_grid"] = plan.lambda_grid;
  result["mean_loss"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  result["all_converged"] = all_converged;
  write_json(cfg.out_dir, "cv_result.json", result);

  const int code = all_converged ? kExitOk : kExitNotConverged;
  write_manifest(cfg, start, {"cv_surface.csv", "cv_folds.csv", "cv_result.json"}, code);
  if (cfg.verbosity > 0) log << "cv: best lambda " << cv.best_lambda << '\n';
  if (!all_converged) log << "cv: some path solves did not converge\n";
  return code;
}

int cmd_bench(const CliConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  ensure_out_dir(cfg.out_dir);
  const BenchResult result = run_benchmark(cfg.bench);

  {
    auto out = open_out(cfg.out_dir, "bench.csv");
    write_bench_csv(out, result.rows);
  }
  {
    auto out = open_out(cfg.out_dir, "eigenvalues.csv");
    write_eigen_dump_csv(out, result.runs);
  }
  {
    auto out = open_out(cfg.out_dir, "runs.csv");
    out << "model,d,n,run,estimator,ok,lambda,rel_frob,rel_spec,min_eig,sparsity,converged,iters,error\n"
        << std::setprecision(17);
    for (const auto& r : result.runs) {
      out << to_string(r.model) << ',' << r.d << ',' << r.n << ',' << r.run << ',' << r.estimator << ','
          << (r.ok ? 1 : 0) << ',' << r.lambda << ',' << r.rel_frob << ',' << r.rel_spec << ',' << r.min_eig << ','
          << r.sparsity << ',' << (r.converged ? 1 : 0) << ',' << r.iters << ",\"" << r.error << "\"\n";
    }
  }

  int failed = 0, not_converged = 0;
  for (const auto& r : result.runs) {
    if (!r.ok) ++failed;
    if (r.ok && !r.converged) ++not_converged;
  }
  const int code = not_converged == 0 ? kExitOk : kExitNotConverged;
  write_manifest(cfg, start, {"bench.csv", "eigenvalues.csv", "runs.csv"}, code);
  if (failed > 0) log << "bench: " << failed << " run(s) failed; see runs.csv\n";
  if (not_converged > 0) log << "bench: " << not_converged << " run(s) did not converge\n";
  if (cfg.verbosity > 0) log << "bench: " << result.rows.size() << " rows\n";
  return code;
}

int cmd_sketch(const CliConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  if (!cfg.lambda) throw Error(ErrorKind::InvalidArgument, "sketch needs penalty.lambda (--lambda)");
  ensure_out_dir(cfg.out_dir);
  const Dataset data = load_data(cfg);
  const int d = data.samples.d();

  Eigen::MatrixXd a_mat;
  switch (cfg.sketch_kind) {
    case SketchMatrixKind::Identity:
      a_mat = Eigen::MatrixXd::Identity(d, d);
      break;
    case SketchMatrixKind::Gaussian:
      a_mat = gaussian_sketch_matrix(cfg.sketch_m > 0 ? cfg.sketch_m : std::max(1, d / 2), d,
                                     derive_seed(cfg.seed, {kStreamSketch}));
      break;
    case SketchMatrixKind::File:
      a_mat = read_dense_file(cfg.sketch_matrix);
      break;
  }
  const SketchModel model = build_sketch(data.samples, a_mat);
  const PenaltySpec spec = cfg.penalty.with_lambda(*cfg.lambda);
  const EstimationReport rep = solve_sketch(model, spec, cfg.adm);

  write_sym_file((fs::path(cfg.out_dir) / "sigma_hat.txt").string(), rep.theta_hat);
  write_dense_file((fs::path(cfg.out_dir) / "a_matrix.txt").string(), model.a_mat);
  write_sym_file((fs::path(cfg.out_dir) / "y.txt").string(), model.y);
  std::vector<std::string> outputs = {"sigma_hat.txt", "a_matrix.txt", "y.txt", "sketch.csv", "summary.json"};

  std::optional<double> rel_frob, rel_spec;
  if (data.truth) {
    rel_frob = relative_error(rep.theta_hat, *data.truth, ErrorMetric::Frobenius);
    rel_spec = relative_error(rep.theta_hat, *data.truth, ErrorMetric::Spectral);
  }
  {
    auto out = open_out(cfg.out_dir, "sketch.csv");
    out << "d,m,n,family,lambda,converged,iters,final_step_norm,min_eig,sparsity,rel_frob,rel_spec\n"
        << std::setprecision(17) << d << ',' << model.m() << ',' << data.samples.n() << ',' << to_string(spec.family)
        << ',' << spec.lambda << ',' << (rep.converged ? 1 : 0) << ',' << rep.iters << ',' << rep.final_step_norm
        << ',' << rep.min_eig << ',' << rep.sparsity_offdiag << ',';
    if (rel_frob) out << *rel_frob;
    out << ',';
    if (rel_spec) out << *rel_spec;
    out << '\n';
  }
  if (cfg.trace) {
    write_trace_csv(cfg.out_dir, rep);
    outputs.push_back("trace.csv");
  }

  ordered_json summary = report_json(rep);
  summary["family"] = to_string(spec.family);
  summary["lambda"] = spec.lambda;
  summary["d"] = d;
  summary["m"] = model.m();
  summary["n"] = data.samples.n();
  if (rel_frob) {
    summary["rel_frob"] = *rel_frob;
    summary["rel_spec"] = *rel_spec;
  }
  write_json(cfg.out_dir, "summary.json", summary);

  const int code = rep.converged ? kExitOk : kExitNotConverged;
  write_manifest(cfg, start, outputs, code);
  if (cfg.verbosity > 0) log << "sketch: m=" << model.m() << " iters=" << rep.iters << " min_eig=" << rep.min_eig << '\n';
  if (!rep.converged) log << "sketch: solver stopped at max_iter=" << cfg.adm.max_iter << " without converging\n";
  return code;
}

int run_command(const CliConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    if (cfg.command == "estimate") return cmd_estimate(cfg, log);
    if (cfg.command == "bench") return cmd_bench(cfg, log);
    if (cfg.command == "sketch") return cmd_sketch(cfg, log);
    return cmd_cv(cfg, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse positive-definite covariance and correlation estimation", "pdcov"};
  std::string config_path;
  std::optional<std::string> command, out_dir, penalty, input;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, max_iter;
  std::optional<double> lambda, q, scad_a, eps, rho_target;
  bool trace = false, version = false;

  app.add_option("--config", config_path, "INI config file; flags override its values");
  app.add_option("--command", command, "estimate | bench | sketch | cv")
      ->check(CLI::IsMember({"estimate", "bench", "sketch", "cv"}));
  app.add_option("--seed", seed, "root random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--penalty", penalty, "hard | soft | scad | lq")->check(CLI::IsMember({"hard", "soft", "scad", "lq"}));
  app.add_option("--lambda", lambda, "penalty level; cross-validated when omitted (estimate)");
  app.add_option("--q", q, "lq exponent in (0, 1)");
  app.add_option("--scad-a", scad_a, "SCAD shape parameter a > 2");
  app.add_option("--eps", eps, "eigenvalue floor");
  app.add_option("--rho-target", rho_target, "final coupling penalty");
  app.add_option("--input", input, "observations file (CSV or whitespace separated, no header)");
  app.add_option("--max-iter", max_iter, "solver iteration cap");
  app.add_flag("--trace", trace, "write the per-iteration trace CSV");
  app.add_flag("--version", version, "print the version and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (version) {
    out << "pdcov " << kVersion << '\n';
    return kExitOk;
  }

  CliConfig cfg;
  try {
    ptree tree;
    if (!config_path.empty()) tree = read_config_file(config_path);
    auto set = [&](const char* key, const std::string& value) { tree.put(ptree::path_type(key, '.'), value); };
    auto num = [](double v) {
      std::ostringstream s;
      s << std::setprecision(17) << v;
      return s.str();
    };
    if (command) set("run.command", *command);
    if (seed) set("run.seed", std::to_string(*seed));
    if (out_dir) set("run.out", *out_dir);
    if (threads) set("run.threads", std::to_string(*threads));
    if (penalty) set("penalty.family", *penalty);
    if (lambda) set("penalty.lambda", num(*lambda));
    if (q) set("penalty.q", num(*q));
    if (scad_a) set("penalty.scad_a", num(*scad_a));
    if (eps) set("adm.eps", num(*eps));
    if (rho_target) set("adm.rho_target", num(*rho_target));
    if (input) set("input.samples", *input);
    if (max_iter) set("adm.max_iter", std::to_string(*max_iter));
    if (trace) set("adm.trace", "true");
    cfg = config_from_tree(tree);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return run_command(cfg, err);
}

}  // namespace pdcov

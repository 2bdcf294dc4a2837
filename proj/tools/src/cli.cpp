#include "drlr/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "drlr/baselines.hpp"
#include "drlr/data.hpp"
#include "drlr/lpadmm.hpp"
#include "drlr/outer.hpp"
#include "drlr/refmodels.hpp"

namespace drlr::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, /*force_flush=*/true);
  auto log = std::make_shared<spdlog::logger>("drlr", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DRLR_LOG")) {
    const std::string level(env);
    if (level == "error") log->set_level(spdlog::level::err);
    else if (level == "warn") log->set_level(spdlog::level::warn);
    else if (level == "info") log->set_level(spdlog::level::info);
    else if (level == "debug") log->set_level(spdlog::level::debug);
    else log->warn("ignoring DRLR_LOG={} (expected error, warn, info or debug)", level);
  }
  return log;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

std::pair<Index, Index> parse_size(const std::string& spec) {
  const auto parts = split_list(spec, ',');
  if (parts.size() != 2) throw UsageError("expected N,n but got '" + spec + "'");
  try {
    std::size_t used = 0;
    const long long n_samples = std::stoll(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    const long long n_features = std::stoll(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    if (n_samples < 1 || n_features < 1) throw std::invalid_argument("non-positive");
    return {static_cast<Index>(n_samples), static_cast<Index>(n_features)};
  } catch (const std::logic_error&) {
    throw UsageError("expected positive integers N,n but got '" + spec + "'");
  }
}

// Flags shared by every command that reads data and solves.
struct CommonFlags {
  std::string data;
  std::string synthetic;
  Index dimension = 0;
  DrlrConfig cfg;
  std::string inner = "ascg";
  std::optional<double> gamma;
  std::optional<double> outer_tol;

  void add_data(CLI::App* app) {
    app->add_option("--data", data, "LIBSVM data file");
    app->add_option("--synthetic", synthetic, "generate N,n synthetic data");
    app->add_option("--dimension", dimension, "feature dimension override for --data");
    app->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  }
  void add_model(CLI::App* app) {
    app->add_option("--epsilon", cfg.epsilon, "Wasserstein radius")->capture_default_str();
    app->add_option("--kappa", cfg.kappa, "label reliability")->capture_default_str();
  }
  void add_solver(CLI::App* app) {
    app->add_option("--rho0", cfg.rho0, "initial penalty")->capture_default_str();
    app->add_option("--gamma", gamma, "penalty growth factor (>= 1)");
    app->add_option("--inner", inner, "box-QP solver: apg, coord or ascg")->capture_default_str();
    app->add_option("--tol", cfg.primal_tol, "primal residual tolerance")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "LP-ADMM iteration cap")->capture_default_str();
    app->add_option("--outer-tol", outer_tol, "golden-section interval width");
  }

  DrlrConfig config(double default_gamma) const {
    DrlrConfig c = cfg;
    c.gamma = gamma.value_or(default_gamma);
    c.outer_tol = outer_tol;
    c.validate();
    return c;
  }
  BoxQpSolverKind inner_kind() const {
    try {
      return parse_box_qp_solver(inner);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  // Synthetic data is drawn from the stream seeded with `seed`.
  Dataset load(std::uint64_t seed) const {
    if (data.empty() == synthetic.empty()) {
      throw UsageError("give exactly one of --data and --synthetic");
    }
    if (!data.empty()) {
      LibsvmOptions opts;
      if (dimension > 0) opts.dimension = dimension;
      return load_libsvm(data, opts);
    }
    const auto [n_samples, n_features] = parse_size(synthetic);
    Rng rng(seed);
    return generate_synthetic(n_samples, n_features, rng).data;
  }
  std::string source() const { return data.empty() ? "synthetic:" + synthetic : data; }
};

json config_json(const DrlrConfig& c, const std::string& inner, const std::string& source) {
  json j;
  j["data"] = source;
  j["epsilon"] = c.epsilon;
  j["kappa"] = c.kappa;
  j["rho0"] = c.rho0;
  j["gamma"] = c.gamma;
  j["primal_tol"] = c.primal_tol;
  j["max_iter"] = c.max_iter;
  j["outer_tol"] = c.outer_tol ? json(*c.outer_tol) : json(nullptr);
  j["seed"] = c.seed;
  j["inner"] = inner;
  j["inner_tol"] = c.inner_tol;
  j["inner_max_iter"] = c.inner_max_iter;
  return j;
}

json solution_json(const Solution& s, json config) {
  json j;
  j["beta"] = std::vector<double>(s.beta.data(), s.beta.data() + s.beta.size());
  j["lambda"] = s.lambda;
  j["objective"] = s.objective;
  j["kkt_residual"] = s.kkt_residual;
  j["status"] = std::string(to_string(s.status));
  j["iterations"] = s.iterations;
  j["config"] = std::move(config);
  return j;
}

// Writes to the named file, or to `fallback` when the name is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write(f);
  if (!f) throw std::runtime_error("failed writing " + path);
}

int exit_for(Status s) { return s == Status::Converged ? kOk : kNotConverged; }

void log_warnings(spdlog::logger& log, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) log.warn("{}", w);
}

// ---------------------------------------------------------------------------

struct SolveCmd {
  CommonFlags common;
  std::string out_path;
  std::string trace_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("solve", "solve the DRLR problem over (lambda, beta)");
    common.add_data(sub);
    common.add_model(sub);
    common.add_solver(sub);
    sub->add_option("--out", out_path, "Solution JSON path (default stdout)");
    sub->add_option("--trace", trace_path, "trace CSV of the subproblem at the returned lambda");
  }

  int run(std::ostream& out, spdlog::logger& log) const {
    const DrlrConfig cfg = common.config(1.05);
    const BoxQpSolverKind inner = common.inner_kind();
    const Dataset data = common.load(cfg.seed);
    log.info("solving N={} n={} eps={} kappa={}", data.num_samples(), data.num_features(),
             cfg.epsilon, cfg.kappa);

    GoldenSolveReport report;
    const Solution sol = golden_section_solve(data, cfg, inner, &report);
    log_warnings(log, sol.warnings);
    for (const auto& s : report.subproblems) {
      log.debug("lambda={} objective={} iterations={} status={}", s.lambda, s.objective,
                s.iterations, to_string(s.status));
      for (const auto& w : s.warnings) log.debug("lambda={}: {}", s.lambda, w);
    }

    const json j = solution_json(sol, config_json(cfg, std::string(to_string(inner)), common.source()));
    emit(out_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    if (!trace_path.empty()) {
      for (std::size_t i = 0; i < report.subproblems.size(); ++i) {
        if (report.subproblems[i].lambda == sol.lambda) {
          emit(trace_path, out, [&](std::ostream& os) { write_trace_csv(os, report.traces[i]); });
          break;
        }
      }
    }
    return exit_for(sol.status);
  }
};

// ---------------------------------------------------------------------------

struct SubproblemFlags {
  double lambda = 0.1;
  std::string solver = "lpadmm";
  std::optional<int> iterations;
  std::optional<double> eta;
  double sadmm_rho = 10.0;
  double sigma = 1.0;
  double step_c = 1.0;
  double pdhg_tol = 1e-9;
  int trace_every = 1;

  void add(CLI::App* app) {
    app->add_option("--lambda", lambda, "fixed lambda")->capture_default_str();
    app->add_option("--solver", solver,
                    "lpadmm, lpadmm-adaptive, ladmm, sadmm, pdhg or subgradient")
        ->capture_default_str();
    app->add_option("--eta", eta, "LADMM proximal weight (default 2 L_f)");
    app->add_option("--sadmm-rho", sadmm_rho, "SADMM penalty")->capture_default_str();
    app->add_option("--sigma", sigma, "SADMM dual relaxation")->capture_default_str();
    app->add_option("--step-c", step_c, "subgradient step constant")->capture_default_str();
    app->add_option("--pdhg-tol", pdhg_tol, "PDHG fixed-point tolerance")->capture_default_str();
    app->add_option("--trace-every", trace_every, "record every k-th iteration (pdhg, sadmm, subgradient)")
        ->capture_default_str();
  }
};

SubproblemResult run_subproblem_solver(const SubproblemFlags& f, const CommonFlags& common,
                                       const SubproblemInstance& inst, std::optional<int> max_iter) {
  const BoxQpSolverKind inner = common.inner_kind();
  TraceOptions trace;
  trace.trace_every = f.trace_every;
  if (f.solver == "lpadmm" || f.solver == "lpadmm-adaptive") {
    DrlrConfig cfg = common.config(f.solver == "lpadmm" ? 1.0 : 1.05);
    if (f.solver == "lpadmm-adaptive" && !cfg.adaptive()) {
      throw UsageError("lpadmm-adaptive needs --gamma > 1");
    }
    if (max_iter) cfg.max_iter = *max_iter;
    return solve_subproblem(inst, cfg, inner);
  }
  if (f.solver == "ladmm") {
    DrlrConfig cfg = common.config(1.0);
    if (max_iter) cfg.max_iter = *max_iter;
    return solve_ladmm(inst, cfg, f.eta.value_or(2.0 * inst.lipschitz_f()), inner);
  }
  if (f.solver == "sadmm") {
    DrlrConfig cfg = common.config(1.0);
    if (max_iter) cfg.max_iter = *max_iter;
    SadmmOptions opts;
    opts.rho = f.sadmm_rho;
    opts.sigma = f.sigma;
    opts.trace = trace;
    return solve_sadmm(inst, cfg, opts);
  }
  if (f.solver == "pdhg") {
    PdhgOptions opts;
    if (max_iter) opts.max_iter = *max_iter;
    opts.tol = f.pdhg_tol;
    opts.trace = trace;
    return solve_pdhg(inst, opts);
  }
  if (f.solver == "subgradient") {
    return solve_subgradient(inst, Vector::Zero(inst.num_features()), max_iter.value_or(100000),
                             f.step_c, trace);
  }
  throw UsageError("unknown solver '" + f.solver + "'");
}

struct SubproblemCmd {
  CommonFlags common;
  SubproblemFlags flags;
  std::optional<int> max_iter;
  std::optional<double> ref_objective;
  std::string out_path;
  std::string trace_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("subproblem", "solve the fixed-lambda beta-subproblem");
    common.add_data(sub);
    common.add_model(sub);
    sub->add_option("--rho0", common.cfg.rho0, "initial penalty")->capture_default_str();
    sub->add_option("--gamma", common.gamma, "penalty growth factor (>= 1)");
    sub->add_option("--inner", common.inner, "box-QP solver: apg, coord or ascg")->capture_default_str();
    sub->add_option("--tol", common.cfg.primal_tol, "primal residual tolerance")->capture_default_str();
    sub->add_option("--max-iter", max_iter, "iteration cap (solver-specific default)");
    flags.add(sub);
    sub->add_option("--ref-objective", ref_objective, "adds a suboptimality column to the trace");
    sub->add_option("--out", out_path, "Solution JSON path");
    sub->add_option("--trace", trace_path, "trace CSV path (default stdout)");
  }

  int run(std::ostream& out, spdlog::logger& log) const {
    if (!(flags.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
    if (flags.trace_every < 1) throw UsageError("--trace-every must be >= 1");
    const Dataset data = common.load(common.cfg.seed);
    const SubproblemInstance inst(data, flags.lambda, common.cfg.kappa);
    const SubproblemResult res = run_subproblem_solver(flags, common, inst, max_iter);
    log_warnings(log, res.solution.warnings);
    log.info("{}: objective={} iterations={} status={}", flags.solver, res.solution.objective,
             res.solution.iterations, to_string(res.solution.status));

    emit(trace_path, out, [&](std::ostream& os) { write_trace_csv(os, res.trace, ref_objective); });
    if (!out_path.empty()) {
      DrlrConfig echo = common.cfg;
      echo.gamma = common.gamma.value_or(flags.solver == "lpadmm-adaptive" ? 1.05 : 1.0);
      json cfg = config_json(echo, common.inner, common.source());
      cfg["solver"] = flags.solver;
      cfg["lambda"] = flags.lambda;
      emit(out_path, out, [&](std::ostream& os) {
        os << solution_json(res.solution, std::move(cfg)).dump(2) << '\n';
      });
    }
    return exit_for(res.solution.status);
  }
};

// ---------------------------------------------------------------------------

struct BenchCmd {
  CommonFlags common;
  SubproblemFlags flags;
  std::string sizes;
  std::string data_list;
  int trials = 30;
  std::string solvers = "lpadmm,lpadmm-adaptive";
  std::optional<double> lambda;
  std::optional<int> max_iter;
  std::string out_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("bench", "time solvers over repeated seeded trials");
    sub->add_option("--sizes", sizes, "synthetic instances \"N1,n1;N2,n2;...\"");
    sub->add_option("--data", data_list, "comma-separated LIBSVM files");
    sub->add_option("--dimension", common.dimension, "feature dimension override for --data");
    sub->add_option("--seed", common.cfg.seed, "base seed; trial t uses seed + t")->capture_default_str();
    common.add_model(sub);
    sub->add_option("--rho0", common.cfg.rho0, "initial penalty")->capture_default_str();
    sub->add_option("--inner", common.inner, "box-QP solver: apg, coord or ascg")->capture_default_str();
    sub->add_option("--tol", common.cfg.primal_tol, "primal residual tolerance")->capture_default_str();
    sub->add_option("--max-iter", max_iter, "iteration cap");
    sub->add_option("--trials", trials, "trials per instance")->capture_default_str();
    sub->add_option("--solvers", solvers, "comma-separated solver list")->capture_default_str();
    sub->add_option("--lambda", lambda, "benchmark the fixed-lambda subproblem instead of the full solve");
    sub->add_option("--out", out_path, "CSV path (default stdout)");
  }

  int run(std::ostream& out, spdlog::logger& log) const {
    if (trials < 1) throw UsageError("--trials must be >= 1");
    if (sizes.empty() == data_list.empty()) throw UsageError("give exactly one of --sizes and --data");
    const auto solver_names = split_list(solvers, ',');
    if (solver_names.empty()) throw UsageError("--solvers is empty");
    for (const auto& s : solver_names) {
      const bool full = s == "lpadmm" || s == "lpadmm-adaptive";
      if (!lambda && !full) throw UsageError("solver '" + s + "' needs --lambda (subproblem mode)");
    }

    struct Instance {
      std::string name;
      std::optional<std::pair<Index, Index>> size;
      std::string path;
    };
    std::vector<Instance> instances;
    for (const auto& s : split_list(sizes, ';')) {
      const auto sz = parse_size(s);
      instances.push_back({std::to_string(sz.first) + "x" + std::to_string(sz.second), sz, ""});
    }
    for (const auto& p : split_list(data_list, ',')) instances.push_back({p, std::nullopt, p});

    std::ostringstream table;
    table << "instance,solver,mean_ms,std_ms,mean_objective\n";
    table << std::setprecision(10);
    int worst = kOk;
    for (const auto& instance : instances) {
      std::optional<Dataset> file_data;
      if (!instance.path.empty()) {
        LibsvmOptions opts;
        if (common.dimension > 0) opts.dimension = common.dimension;
        file_data = load_libsvm(instance.path, opts);
      }
      for (const auto& solver : solver_names) {
        std::vector<double> times;
        std::vector<double> objectives;
        for (int t = 0; t < trials; ++t) {
          const std::uint64_t seed = common.cfg.seed + static_cast<std::uint64_t>(t);
          Dataset data = file_data ? *file_data : [&] {
            Rng rng(seed);
            return generate_synthetic(instance.size->first, instance.size->second, rng).data;
          }();
          const Stopwatch clock;
          Solution sol;
          if (lambda) {
            SubproblemFlags f = flags;
            f.solver = solver;
            f.lambda = *lambda;
            const SubproblemInstance inst(data, *lambda, common.cfg.kappa);
            sol = run_subproblem_solver(f, common, inst, max_iter).solution;
          } else {
            DrlrConfig cfg = common.config(solver == "lpadmm" ? 1.0 : 1.05);
            cfg.seed = seed;
            if (max_iter) cfg.max_iter = *max_iter;
            sol = golden_section_solve(data, cfg, common.inner_kind());
          }
          times.push_back(clock.elapsed_ms());
          objectives.push_back(sol.objective);
          if (sol.status != Status::Converged) {
            worst = kNotConverged;
            log.warn("{} on {} trial {}: {}", solver, instance.name, t, to_string(sol.status));
          }
          log.debug("{} {} trial {}: {} ms, objective {}", instance.name, solver, t, times.back(),
                    objectives.back());
        }
        const SampleStats st = sample_stats(times);
        const SampleStats obj = sample_stats(objectives);
        table << instance.name << ',' << solver << ',' << st.mean << ',' << st.stddev << ','
              << obj.mean << '\n';
      }
    }
    emit(out_path, out, [&](std::ostream& os) { os << table.str(); });
    return worst;
  }
};

// ---------------------------------------------------------------------------

struct EvalCmd {
  CommonFlags common;
  std::string models = "lr,rlr,drlr";
  double train_fraction = 0.6;
  int trials = 30;
  double noise = 0.0;
  int parallel = 1;
  std::string out_path;
  std::string per_trial_path;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("eval", "test accuracy of LR, RLR and DRLR over random splits");
    common.add_data(sub);
    common.add_model(sub);
    common.add_solver(sub);
    sub->add_option("--models", models, "comma-separated subset of lr,rlr,drlr")->capture_default_str();
    sub->add_option("--split", train_fraction, "training fraction")->capture_default_str();
    sub->add_option("--trials", trials, "number of random splits")->capture_default_str();
    sub->add_option("--noise", noise, "probability of flipping each training label")->capture_default_str();
    sub->add_option("--parallel", parallel, "worker threads")->capture_default_str();
    sub->add_option("--out", out_path, "summary CSV path (default stdout)");
    sub->add_option("--per-trial", per_trial_path, "per-trial accuracy CSV path");
  }

  int run(std::ostream& out, spdlog::logger& log) const {
    if (trials < 1) throw UsageError("--trials must be >= 1");
    if (parallel < 1) throw UsageError("--parallel must be >= 1");
    const auto model_names = split_list(models, ',');
    if (model_names.empty()) throw UsageError("--models is empty");
    for (const auto& m : model_names) {
      if (m != "lr" && m != "rlr" && m != "drlr") throw UsageError("unknown model '" + m + "'");
    }
    const DrlrConfig cfg = common.config(1.05);
    const BoxQpSolverKind inner = common.inner_kind();
    const Dataset data = common.load(cfg.seed);

    // acc[trial][model]
    std::vector<std::vector<double>> acc(static_cast<std::size_t>(trials),
                                         std::vector<double>(model_names.size(), 0.0));
    std::mutex log_mutex;
    auto run_trial = [&](int t) {
      Rng rng(cfg.seed + static_cast<std::uint64_t>(t));
      auto [train, test] = split(data, train_fraction, rng);
      if (noise > 0.0) train = flip_labels(train, noise, rng);
      for (std::size_t m = 0; m < model_names.size(); ++m) {
        LinearClassifier model;
        if (model_names[m] == "lr") {
          model = train_lr(train);
        } else if (model_names[m] == "rlr") {
          model = train_rlr(train, cfg.epsilon);
        } else {
          const Solution sol = golden_section_solve(train, cfg, inner);
          model.beta = sol.beta;
          model.kind = ModelKind::DRLR;
          model.warnings = sol.warnings;
        }
        if (!model.warnings.empty()) {
          const std::lock_guard lock(log_mutex);
          for (const auto& w : model.warnings) log.warn("trial {} {}: {}", t, model_names[m], w);
        }
        acc[static_cast<std::size_t>(t)][m] = accuracy(model, test);
      }
    };

    const int workers = std::min(parallel, trials);
    if (workers == 1) {
      for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (int t = w; t < trials; t += workers) run_trial(t);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    std::ostringstream summary;
    summary << "model,mean_accuracy,std_accuracy,trials\n" << std::setprecision(10);
    for (std::size_t m = 0; m < model_names.size(); ++m) {
      std::vector<double> xs;
      for (const auto& row : acc) xs.push_back(row[m]);
      const SampleStats st = sample_stats(xs);
      summary << model_names[m] << ',' << st.mean << ',' << st.stddev << ',' << trials << '\n';
    }
    emit(out_path, out, [&](std::ostream& os) { os << summary.str(); });
    if (!per_trial_path.empty()) {
      emit(per_trial_path, out, [&](std::ostream& os) {
        os << "trial,seed";
        for (const auto& m : model_names) os << ',' << m;
        os << '\n' << std::setprecision(10);
        for (int t = 0; t < trials; ++t) {
          os << t << ',' << cfg.seed + static_cast<std::uint64_t>(t);
          for (double a : acc[static_cast<std::size_t>(t)]) os << ',' << a;
          os << '\n';
        }
      });
    }
    return kOk;
  }
};

}  // namespace

SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Wasserstein distributionally robust logistic regression", "drlr"};
  app.require_subcommand(1);
  SolveCmd solve;
  SubproblemCmd subproblem;
  BenchCmd bench;
  EvalCmd eval;
  solve.add(app);
  subproblem.add(app);
  bench.add(app);
  eval.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "solve") return solve.run(out, *log);
    if (name == "subproblem") return subproblem.run(out, *log);
    if (name == "bench") return bench.run(out, *log);
    return eval.run(out, *log);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kError;
  }
}

}  // namespace drlr::cli

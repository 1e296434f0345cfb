#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "proxdist/engine.hpp"
#include "proxdist/matrix_io.hpp"
#include "proxdist/oracles.hpp"
#include "proxdist/problems.hpp"
#include "proxdist/projections.hpp"
#include "proxdist/solvers.hpp"

namespace {

using Eigen::MatrixXd;
using proxdist::engine::PenaltySchedule;
using proxdist::engine::SolveStatus;
using proxdist::engine::Strategy;
using proxdist::projections::SparsityMode;
namespace problems = proxdist::problems;
namespace solvers = proxdist::solvers;
namespace oracles = proxdist::oracles;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "dense") return Strategy::Dense;
  if (s == "sparse") return Strategy::Sparse;
  return Strategy::Auto;
}

solvers::KinshipVariant parse_variant(const std::string& s) {
  if (s == "pd1") return solvers::KinshipVariant::PD1;
  if (s == "pd2") return solvers::KinshipVariant::PD2;
  return solvers::KinshipVariant::PD3;
}

SparsityMode parse_mode(const std::string& s) {
  return s == "matrix" ? SparsityMode::Matrix : SparsityMode::Column;
}

// Schedule, tolerance, and run-shape flags shared by solve/bench/spca.
struct SolveFlags {
  double rho0 = 0.0;
  double mult = 0.0;
  double cap = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  int interval = 0;
  int max_iters = 0;
  int d = 3;
  bool accel = true;
  std::string strategy = "auto";
  std::string variant = "pd3";
  std::uint64_t seed = 0;
  int restarts = 10;
  bool warm_start = false;

  CLI::Option* o_rho0 = nullptr;
  CLI::Option* o_mult = nullptr;
  CLI::Option* o_interval = nullptr;
  CLI::Option* o_cap = nullptr;
  CLI::Option* o_eps1 = nullptr;
  CLI::Option* o_eps2 = nullptr;
  CLI::Option* o_accel = nullptr;
  CLI::Option* o_d = nullptr;
  CLI::Option* o_max_iters = nullptr;

  void attach(CLI::App* cmd, const std::string& seed_name = "--seed") {
    o_rho0 = cmd->add_option("--rho0", rho0, "initial penalty weight");
    o_mult = cmd->add_option("--rho-mult", mult, "penalty multiplier");
    o_interval = cmd->add_option("--rho-interval", interval,
                                 "iterations between penalty increases");
    o_cap = cmd->add_option("--rho-cap", cap, "penalty ceiling");
    o_eps1 = cmd->add_option("--eps1", eps1, "loss-settling tolerance");
    o_eps2 = cmd->add_option("--eps2", eps2, "feasibility-distance tolerance");
    o_accel = cmd->add_flag("--accel,!--no-accel", accel,
                            "toggle the shifted acceleration step");
    o_d = cmd->add_option("--d", d, "acceleration offset (>= 3)");
    o_max_iters = cmd->add_option("--max-iters", max_iters, "iteration budget");
    cmd->add_option("--strategy", strategy, "linear algebra route")
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
    cmd->add_option(seed_name, seed, "seed for solver-side randomness");
    cmd->add_option("--restarts", restarts, "random restarts (copositivity/lcp)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--variant", variant, "kinship iteration variant")
        ->check(CLI::IsMember({"pd1", "pd2", "pd3"}));
    cmd->add_flag("--warm-start", warm_start,
                  "start sparse loadings from the ordinary principal components");
  }

  solvers::SolveConfig build(const problems::ProblemInstance& inst) const {
    solvers::SolveConfig config;
    config.options.strategy = parse_strategy(strategy);
    config.options.seed = seed;
    if (o_accel->count()) config.options.accelerate = accel;
    if (o_d->count()) config.options.nesterov_offset = d;
    config.restarts = restarts;
    config.kinship_variant = parse_variant(variant);
    config.spca_warm_start = warm_start;
    PenaltySchedule s = solvers::default_schedule(inst, config.options.strategy,
                                                  config.kinship_variant);
    bool touched = false;
    if (o_rho0->count()) { s.rho0 = rho0; touched = true; }
    if (o_mult->count()) { s.multiplier = mult; touched = true; }
    if (o_interval->count()) { s.interval = interval; touched = true; }
    if (o_cap->count()) { s.rho_cap = cap; touched = true; }
    if (o_max_iters->count()) { s.max_outer_iters = max_iters; touched = true; }
    if (touched) config.schedule = s;
    if (o_eps1->count()) config.criteria.eps1 = eps1;
    if (o_eps2->count()) config.criteria.eps2 = eps2;
    return config;
  }
};

std::string dims_of(const problems::ProblemInstance& inst) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        std::ostringstream s;
        if constexpr (std::is_same_v<T, problems::LpProblem>) {
          s << "m=" << p.A.rows() << " n=" << p.A.cols();
        } else if constexpr (std::is_same_v<T, problems::NqpProblem>) {
          s << "n=" << p.A.rows();
        } else if constexpr (std::is_same_v<T, problems::KinshipProblem>) {
          s << "n=" << p.Y.rows();
        } else if constexpr (std::is_same_v<T, problems::SocProblem>) {
          s << "m=" << p.A.rows() << " n=" << p.A.cols();
        } else if constexpr (std::is_same_v<T, problems::CopositivityProblem>) {
          s << "n=" << p.M.rows();
        } else if constexpr (std::is_same_v<T, problems::LcpProblem>) {
          s << "n=" << p.A.rows();
        } else {
          s << "p=" << p.dim_p() << " q=" << p.q << " r=" << p.r;
        }
        return s.str();
      },
      inst);
}

struct GenerateArgs {
  std::string kind;
  int m = 0;
  int n = 0;
  int samples = 200;
  int p = 0;
  int q = 1;
  int r = 1;
  std::string mode = "column";
  std::uint64_t seed = 0;
  bool sparse = false;
  bool horn = false;
  double density = 0.01;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  problems::ProblemInstance inst;
  std::optional<std::uint64_t> seed_tag = a.seed;
  std::ostringstream stem;
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::runtime_error(std::string("generate: ") + what);
  };
  if (a.kind == "lp") {
    need(a.m > 0 && a.n > 0, "lp requires --m and --n");
    inst = problems::make_lp(a.m, a.n, a.seed, a.sparse, a.density);
    stem << "lp_m" << a.m << "_n" << a.n;
  } else if (a.kind == "nqp") {
    need(a.n > 0, "nqp requires --n");
    inst = problems::make_nqp(a.n, a.seed, a.sparse);
    stem << "nqp_n" << a.n;
  } else if (a.kind == "kinship") {
    need(a.n > 0, "kinship requires --n");
    inst = problems::make_kinship(a.n, a.seed);
    stem << "kinship_n" << a.n;
  } else if (a.kind == "soc") {
    need(a.m > 0 && a.n > 0, "soc requires --m and --n");
    inst = problems::make_soc(a.m, a.n, a.seed, a.sparse, a.density);
    stem << "soc_m" << a.m << "_n" << a.n;
  } else if (a.kind == "copositivity") {
    if (a.horn) {
      const int n = a.n > 0 ? a.n : 5;
      inst = problems::make_horn(n);
      seed_tag.reset();
      stem << "horn_n" << n;
    } else {
      need(a.n > 0, "copositivity requires --n (or --horn)");
      inst = problems::make_copositivity(a.n, a.seed);
      stem << "copositivity_n" << a.n;
    }
  } else if (a.kind == "lcp") {
    need(a.n > 0, "lcp requires --n");
    inst = problems::make_lcp(a.n, a.seed);
    stem << "lcp_n" << a.n;
  } else if (a.kind == "spca") {
    need(a.p > 0, "spca requires --p");
    inst = problems::make_spca(a.samples, a.p, a.q, a.r, parse_mode(a.mode),
                               a.seed);
    stem << "spca_s" << a.samples << "_p" << a.p << "_q" << a.q << "_r" << a.r
         << "_" << a.mode;
  } else {
    throw std::runtime_error("generate: unknown kind " + a.kind);
  }
  if (a.sparse) stem << "_sparse";
  if (seed_tag) stem << "_seed" << *seed_tag;
  const std::string path = a.out.empty() ? stem.str() + ".json" : a.out;
  problems::save_instance(path, inst, seed_tag);
  std::cout << "wrote " << path << "\n";
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string result_out;
  std::string trace_out;
};

int cmd_solve(const SolveArgs& a, const SolveFlags& flags) {
  const problems::ProblemInstance inst = problems::load_instance(a.instance);
  const solvers::SolveConfig config = flags.build(inst);
  const solvers::SolveResult result = solvers::solve(inst, config);
  const std::string kind = problems::kind_of(inst);

  if (!a.trace_out.empty()) {
    std::ofstream t(a.trace_out);
    if (!t) throw std::runtime_error("cannot write " + a.trace_out);
    proxdist::engine::write_trace_jsonl(t, result.trace);
  }
  if (!a.result_out.empty()) {
    std::ofstream f(a.result_out);
    if (!f) throw std::runtime_error("cannot write " + a.result_out);
    f << solvers::result_to_json_string(kind, result, a.trace_out);
  }
  std::printf("%s %s loss %.8g dist %.3g iters %d seconds %.3f\n", kind.c_str(),
              dims_of(inst).c_str(), result.loss, result.dist,
              result.trace.iterations(), result.trace.seconds());
  return result.status == SolveStatus::Converged ? 0 : 2;
}

struct BenchArgs {
  std::string kind;
  std::vector<int> dims;
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed0 = 1;
  int reps = 1;
  double ratio = 2.0;
  bool sparse = false;
  double density = 0.01;
  std::string out;
};

problems::ProblemInstance bench_instance(const BenchArgs& a, int dim, int cols,
                                         std::uint64_t seed) {
  if (a.kind == "lp") return problems::make_lp(dim, cols, seed, a.sparse, a.density);
  if (a.kind == "nqp") return problems::make_nqp(dim, seed, a.sparse);
  if (a.kind == "kinship") return problems::make_kinship(dim, seed);
  if (a.kind == "soc") return problems::make_soc(dim, cols, seed, a.sparse, a.density);
  if (a.kind == "copositivity") return problems::make_copositivity(dim, seed);
  return problems::make_lcp(dim, seed);
}

std::optional<double> bench_oracle(const std::string& kind,
                                   const problems::ProblemInstance& inst) {
  if (kind == "lp") {
    const auto& p = std::get<problems::LpProblem>(inst);
    if (p.A.cols() <= 20) {
      const auto r = oracles::lp_vertex_oracle(p);
      if (r.feasible) return r.optimum;
    }
  } else if (kind == "nqp") {
    const auto& p = std::get<problems::NqpProblem>(inst);
    if (p.A.rows() <= 16) {
      const auto r = oracles::nqp_activeset_oracle(p);
      if (r.found) return r.optimum;
    }
  } else if (kind == "kinship") {
    const auto& p = std::get<problems::KinshipProblem>(inst);
    const auto r = oracles::dykstra_project(p.Y);
    if (r.converged) return 0.5 * (r.X - p.Y).squaredNorm();
  } else if (kind == "copositivity") {
    const auto& p = std::get<problems::CopositivityProblem>(inst);
    if (p.M.rows() <= 6) return oracles::copositivity_grid_oracle(p.M).minimum;
  } else if (kind == "lcp") {
    const auto& p = std::get<problems::LcpProblem>(inst);
    if (p.A.rows() <= 16 && oracles::lcp_enumeration_oracle(p).solved) {
      return 0.0;  // a complementary pair exists, so the attainable loss is zero
    }
  }
  return std::nullopt;
}

int cmd_bench(const BenchArgs& a, const SolveFlags& flags) {
  if (a.dims.empty()) throw std::runtime_error("bench: --dims must be nonempty");
  for (const int d : a.dims) {
    if (d <= 0) throw std::runtime_error("bench: dimensions must be positive");
  }
  if (a.reps < 1) throw std::runtime_error("bench: --reps must be >= 1");
  std::vector<std::uint64_t> seeds = a.seeds;
  if (seeds.empty()) {
    for (int t = 0; t < a.reps; ++t) seeds.push_back(a.seed0 + static_cast<std::uint64_t>(t));
  }

  const bool two_dims = a.kind == "lp" || a.kind == "soc";
  std::string csv;
  {
    std::vector<std::string> header;
    if (two_dims) header = {"m", "n"};
    else header = {"n"};
    header.insert(header.end(),
                  {"optimum", "oracle_optimum", "seconds", "iters", "status"});
    csv += csv_row(header);
  }

  bool any_ok = false;
  for (const int dim : a.dims) {
    const int cols = two_dims ? static_cast<int>(std::lround(a.ratio * dim)) : 0;
    for (const std::uint64_t seed : seeds) {
      std::vector<std::string> row;
      if (two_dims) row = {std::to_string(dim), std::to_string(cols)};
      else row = {std::to_string(dim)};
      try {
        const problems::ProblemInstance inst = bench_instance(a, dim, cols, seed);
        const solvers::SolveConfig config = flags.build(inst);
        const solvers::SolveResult result = solvers::solve(inst, config);
        const std::optional<double> oracle = bench_oracle(a.kind, inst);
        row.push_back(fmt_g17(result.loss));
        row.push_back(oracle ? fmt_g17(*oracle) : "");
        char seconds[32];
        std::snprintf(seconds, sizeof seconds, "%.6f", result.trace.seconds());
        row.push_back(seconds);
        row.push_back(std::to_string(result.trace.iterations()));
        row.push_back(proxdist::engine::to_string(result.status));
        any_ok = true;
      } catch (const std::exception& e) {
        std::cerr << "bench row dim=" << dim << " seed=" << seed
                  << " failed: " << e.what() << "\n";
        row.insert(row.end(), {"", "", "", "", "error"});
      }
      csv += csv_row(row);
    }
  }

  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << csv;
    std::cout << "wrote " << a.out << "\n";
  }
  return any_ok ? 0 : 1;
}

struct SpcaArgs {
  std::string data;
  bool synthetic = false;
  int samples = 200;
  int p = 0;
  int q = 1;
  int r = 1;
  std::string mode = "column";
  std::uint64_t gen_seed = 0;
  std::string loadings = "spca_loadings.txt";
  std::string csv = "spca_pve.csv";
};

int cmd_spca(const SpcaArgs& a, const SolveFlags& flags) {
  MatrixXd x;
  if (!a.data.empty()) {
    x = proxdist::linalg::read_dense_file(a.data);
    x.rowwise() -= x.colwise().mean();
  } else if (a.synthetic) {
    if (a.p <= 0) throw std::runtime_error("spca: --synthetic requires --p");
    const problems::SpcaProblem seeded = problems::make_spca(
        a.samples, a.p, a.q, a.r, parse_mode(a.mode), a.gen_seed);
    x = *seeded.X;
  } else {
    throw std::runtime_error("spca: pass --data FILE or --synthetic");
  }
  const SparsityMode mode = parse_mode(a.mode);
  const auto p_dim = x.cols();

  std::string csv = csv_row({"q", "pve", "seconds"});
  MatrixXd loadings;
  for (int qq = 1; qq <= a.q; ++qq) {
    if (mode == SparsityMode::Matrix &&
        a.r > static_cast<int>(p_dim) * qq) {
      std::cerr << "spca: skipping q=" << qq << " (budget " << a.r
                << " exceeds " << p_dim * qq << " entries)\n";
      continue;
    }
    problems::SpcaProblem prob;
    prob.X = x;
    prob.q = qq;
    prob.r = a.r;
    prob.mode = mode;
    const problems::ProblemInstance inst{std::move(prob)};
    const solvers::SolveConfig config = flags.build(inst);
    const solvers::SolveResult result = solvers::solve(inst, config);
    const double pve = solvers::compute_pve(x, result.X);
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.6f", result.trace.seconds());
    csv += csv_row({std::to_string(qq), fmt_g17(pve), seconds});
    std::printf("q=%d pve=%.6f iters=%d seconds=%s\n", qq, pve,
                result.trace.iterations(), seconds);
    loadings = result.X;
  }
  if (loadings.size() == 0) throw std::runtime_error("spca: no feasible q in sweep");

  proxdist::linalg::write_dense_file(a.loadings, loadings);
  std::ofstream f(a.csv, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + a.csv);
  f << csv;
  std::cout << "wrote " << a.loadings << "\n";
  std::cout << "wrote " << a.csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximal distance solvers: generate, solve, and benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "write a seeded instance file");
  gen->add_option("kind", gen_args.kind, "problem family")
      ->required()
      ->check(CLI::IsMember({"lp", "nqp", "kinship", "soc", "copositivity",
                             "lcp", "spca"}));
  gen->add_option("--m", gen_args.m, "rows (lp/soc)");
  gen->add_option("--n", gen_args.n, "primary dimension");
  gen->add_option("--samples", gen_args.samples, "data rows (spca)");
  gen->add_option("--p", gen_args.p, "features (spca)");
  gen->add_option("--q", gen_args.q, "components (spca)")->check(CLI::PositiveNumber);
  gen->add_option("--r", gen_args.r, "sparsity budget (spca)");
  gen->add_option("--mode", gen_args.mode, "sparsity mode (spca)")
      ->check(CLI::IsMember({"column", "matrix"}));
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_flag("--sparse", gen_args.sparse, "sparse variant (lp/nqp/soc)");
  gen->add_flag("--horn", gen_args.horn, "emit the Horn pattern (copositivity)");
  gen->add_option("--density", gen_args.density, "fill density for sparse lp/soc");
  gen->add_option("--out", gen_args.out, "output path (defaults to a descriptive name)");

  SolveArgs solve_args;
  SolveFlags solve_flags;
  CLI::App* sol = app.add_subcommand("solve", "solve an instance file");
  sol->add_option("instance", solve_args.instance, "instance JSON path")->required();
  sol->add_option("--out", solve_args.result_out, "write the result as JSON");
  sol->add_option("--trace", solve_args.trace_out, "write the iteration trace as JSONL");
  solve_flags.attach(sol);

  BenchArgs bench_args;
  SolveFlags bench_flags;
  CLI::App* ben = app.add_subcommand("bench", "sweep dimensions and seeds into a CSV");
  ben->add_option("kind", bench_args.kind, "problem family")
      ->required()
      ->check(CLI::IsMember({"lp", "nqp", "kinship", "soc", "copositivity", "lcp"}));
  ben->add_option("--dims", bench_args.dims, "dimension sweep")
      ->required()
      ->delimiter(',');
  ben->add_option("--seeds", bench_args.seeds, "explicit seed list")->delimiter(',');
  ben->add_option("--seed", bench_args.seed0, "first seed when using --reps");
  ben->add_option("--reps", bench_args.reps, "seeds per dimension")
      ->check(CLI::PositiveNumber);
  ben->add_option("--ratio", bench_args.ratio, "columns per row (lp/soc)");
  ben->add_flag("--sparse", bench_args.sparse, "sparse variant (lp/nqp/soc)");
  ben->add_option("--density", bench_args.density, "fill density for sparse lp/soc");
  ben->add_option("--out", bench_args.out, "CSV path (stdout when omitted)");
  bench_flags.attach(ben, "--solver-seed");

  SpcaArgs spca_args;
  SolveFlags spca_flags;
  CLI::App* spc = app.add_subcommand("spca", "sparse loadings and a PVE sweep");
  spc->add_option("--data", spca_args.data, "dense data file, samples by features");
  spc->add_flag("--synthetic", spca_args.synthetic, "generate centered Gaussian data");
  spc->add_option("--samples", spca_args.samples, "synthetic data rows");
  spc->add_option("--p", spca_args.p, "synthetic feature count");
  spc->add_option("--q", spca_args.q, "largest component count in the sweep")
      ->required()
      ->check(CLI::PositiveNumber);
  spc->add_option("--r", spca_args.r, "sparsity budget")->required();
  spc->add_option("--mode", spca_args.mode, "sparsity mode")
      ->check(CLI::IsMember({"column", "matrix"}));
  spc->add_option("--gen-seed", spca_args.gen_seed, "synthetic data seed");
  spc->add_option("--loadings", spca_args.loadings, "loading matrix output path");
  spc->add_option("--csv", spca_args.csv, "PVE sweep CSV path");
  spca_flags.attach(spc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (sol->parsed()) return cmd_solve(solve_args, solve_flags);
    if (ben->parsed()) return cmd_bench(bench_args, bench_flags);
    if (spc->parsed()) return cmd_spca(spca_args, spca_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include "hedmatch/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "hedmatch/conjugacy.hpp"
#include "hedmatch/costs.hpp"
#include "hedmatch/dual_solver.hpp"
#include "hedmatch/error.hpp"
#include "hedmatch/flow_oracle.hpp"
#include "hedmatch/generators.hpp"
#include "hedmatch/io.hpp"
#include "hedmatch/matching.hpp"

namespace hedmatch::cli {
namespace {

constexpr double kIdentityTol = 1e-12;

// Input errors become exit 2; every other failure propagates.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Problem load_problem(const std::filesystem::path& path) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const ValidationReport violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance " + path.string() + ":";
    for (const auto& v : violations) msg += std::string("\n  ") + to_string(v.code) + ": " + v.message;
    throw InputError(msg);
  }
  return Problem(std::move(inst));
}

std::filesystem::path prepare_out(const std::filesystem::path& dir, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
  return dir / name;
}

void write_file(RunReport& report, const std::filesystem::path& dir, const char* name,
                const std::function<void(std::ostream&)>& body) {
  const auto path = prepare_out(dir, name);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  body(os);
  report.outputs.push_back(path);
}

void write_price_csv(std::ostream& os, const PriceVector& p, const SpaceGrid& z) {
  os << "z_index";
  for (std::size_t c = 0; c < z.dim; ++c) os << ",z_" << c;
  os << ",p\n";
  for (Index k = 0; k < p.size(); ++k) {
    os << k;
    for (double c : z[k]) os << ',' << format_double(c);
    os << ',' << format_double(p[k]) << '\n';
  }
}

void print_summary(std::ostream& out, const RunReport& report) {
  out << report.command;
  for (const auto& [key, value] : report.scalars) out << ' ' << key << '=' << format_double(value);
  out << " exit=" << report.exit_code << '\n';
  for (const auto& path : report.outputs) out << "  wrote " << path.string() << '\n';
}

// Runs `body`, mapping input errors and library errors to exit codes.
RunReport guarded(const char* command, const std::filesystem::path& instance, std::ostream& out,
                  std::ostream& err, const std::function<void(RunReport&)>& body) {
  RunReport report;
  report.command = command;
  report.instance_path = instance.string();
  try {
    body(report);
  } catch (const InputError& e) {
    err << command << ": " << e.what() << '\n';
    report.exit_code = kExitInput;
    return report;
  } catch (const Error& e) {
    err << command << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
    const bool input = e.kind() != ErrorKind::kNonFinite;
    report.exit_code = input ? kExitInput : kExitTolerance;
    return report;
  }
  print_summary(out, report);
  return report;
}

SolveResult solve_and_write(RunReport& report, const Problem& prob, const SolveOptions& opts) {
  SolverConfig cfg;
  cfg.max_iters = opts.max_iters;
  cfg.tol_marginal = opts.tol;
  cfg.epsilon = opts.epsilon;
  cfg.validate();
  SolveResult result = solve_dual(prob, cfg);
  const MatchingResult m = extract_matching(result.price, prob);

  write_file(report, opts.out_dir, "price.csv",
             [&](std::ostream& os) { write_price_csv(os, result.price, prob.z_grid()); });
  write_file(report, opts.out_dir, "matching_s.csv", [&](std::ostream& os) {
    write_map_csv(os, prob.x_grid(), prob.mu(), m.s_map, prob.z_grid(), "x");
  });
  write_file(report, opts.out_dir, "matching_t.csv", [&](std::ostream& os) {
    write_map_csv(os, prob.y_grid(), prob.nu(), m.t_map, prob.z_grid(), "y");
  });
  write_file(report, opts.out_dir, "trace.csv",
             [&](std::ostream& os) { write_trace_csv(os, result.trace); });

  report.scalars["iterations"] = result.iterations;
  report.scalars["dual"] = *m.dual_value;
  report.scalars["primal"] = m.primal_value;
  report.scalars["gap"] = *m.gap;
  report.scalars["marginal_tv"] = result.marginal_tv;
  report.scalars["converged"] = result.converged() ? 1.0 : 0.0;
  if (!result.converged()) report.exit_code = kExitTolerance;
  return result;
}

}  // namespace

RunReport cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("solve", opts.instance, out, err, [&](RunReport& report) {
    const Problem prob = load_problem(opts.instance);
    solve_and_write(report, prob, opts);
  });
}

RunReport cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("oracle", opts.instance, out, err, [&](RunReport& report) {
    const Problem prob = load_problem(opts.instance);
    const FlowNetwork net = build_network(prob, opts.mass_scale);
    const FlowSolution sol = solve_flow(net);
    write_file(report, opts.out_dir, "flow.csv",
               [&](std::ostream& os) { write_flow_csv(os, net, sol); });
    report.scalars["optimal_value"] = sol.optimal_value;
    report.scalars["splits_mass"] = sol.splits_mass ? 1.0 : 0.0;
  });
}

RunReport cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("check", opts.instance, out, err, [&](RunReport& report) {
    const Problem prob = load_problem(opts.instance);
    const Instance& inst = prob.instance();
    bool ok = true;

    double cost_scale = 1.0;
    for (const Matrix* m : {&prob.u(), &prob.v()}) {
      for (std::size_t i = 0; i < m->rows(); ++i) {
        for (double c : m->row(i)) cost_scale = std::max(cost_scale, std::abs(c));
      }
    }
    const double tol = kIdentityTol * cost_scale;

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> draw(-cost_scale, cost_scale);
    double triple = 0.0;
    double min_fenchel = 0.0;
    double sharp_excess = 0.0;
    double flat_deficit = 0.0;
    for (int trial = 0; trial < opts.trials; ++trial) {
      PriceVector p = PriceVector::zeros(prob.nz());
      for (auto& v : p.values) v = draw(rng);
      const auto [sharp, sharp3] = triple_conjugate(p, prob);
      for (std::size_t x = 0; x < sharp.size(); ++x) {
        triple = std::max(triple, std::abs(sharp3[x] - sharp[x]));
      }
      const ConjugateResult sub = subconjugate(p, prob);
      const ConjugateResult sup = superconjugate(p, prob);
      for (const Matrix& gap : {fenchel_gap(p, sub, prob, Side::kU),
                                fenchel_gap(p, sup, prob, Side::kV)}) {
        for (std::size_t i = 0; i < gap.rows(); ++i) {
          for (double g : gap.row(i)) min_fenchel = std::min(min_fenchel, g);
        }
      }
      const PriceVector bu = biconjugate_u(p, prob);
      const PriceVector bv = biconjugate_v(p, prob);
      for (Index z = 0; z < prob.nz(); ++z) {
        sharp_excess = std::max(sharp_excess, bu[z] - p[z]);
        flat_deficit = std::max(flat_deficit, p[z] - bv[z]);
      }
    }
    report.scalars["triple_conjugate_dev"] = triple;
    report.scalars["min_fenchel_gap"] = min_fenchel;
    report.scalars["biconjugate_u_excess"] = sharp_excess;
    report.scalars["biconjugate_v_deficit"] = flat_deficit;
    ok = ok && triple <= tol && min_fenchel >= -tol && sharp_excess <= tol && flat_deficit <= tol;

    const struct {
      const char* name;
      const CostSpec& spec;
      const SpaceGrid& source;
    } sides[] = {{"u", inst.u_cost, inst.x_grid}, {"v", inst.v_cost, inst.y_grid}};
    for (const auto& side : sides) {
      const CheckReport sm = spence_mirrlees_check(side.spec, side.source, inst.z_grid);
      out << "spence_mirrlees " << side.name << ": " << to_string(sm.status);
      if (!sm.message.empty()) out << " (" << sm.message << ')';
      out << '\n';
      for (const auto& w : sm.witnesses) {
        out << "  witness " << side.name << ": source " << w.source << " z " << w.z_first
            << " and z " << w.z_second << '\n';
      }
      ok = ok && sm.passed();
      if (side.spec.analytic()) {
        report.scalars[std::string("lipschitz_") + side.name] =
            lipschitz_bound_k(side.spec, side.source, inst.z_grid);
      }
    }
    if (!ok) report.exit_code = kExitTolerance;
  });
}

RunReport cmd_residual(const ResidualOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("residual", opts.solve.instance, out, err, [&](RunReport& report) {
    const Problem prob = load_problem(opts.solve.instance);
    // Preconditions are checked before spending iterations on the solve.
    (void)monge_ampere_residual(PriceVector::zeros(prob.nz()), prob);
    const SolveResult result = solve_and_write(report, prob, opts.solve);
    const ResidualReport res = monge_ampere_residual(result.price, prob);
    write_file(report, opts.solve.out_dir, "residual.csv",
               [&](std::ostream& os) { write_residual_csv(os, res); });
    report.scalars["max_residual"] = res.max_residual;
    if (!(res.max_residual <= opts.residual_tol)) report.exit_code = kExitTolerance;
  });
}

RunReport cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("gen", opts.out_path, out, err, [&](RunReport& report) {
    std::optional<Instance> inst;
    if (opts.kind == "t1") {
      inst = make_t1();
    } else if (opts.kind == "t3") {
      inst = make_t3();
    } else if (opts.kind == "uniform-shift") {
      inst = make_uniform_shift(opts.n, opts.alpha);
    } else if (opts.kind == "random") {
      inst = make_random_table(opts.seed, opts.nx, opts.ny, opts.nz);
    } else {
      throw InputError("unknown kind \"" + opts.kind + "\" (t1, t3, uniform-shift, random)");
    }
    if (opts.out_path.has_parent_path()) prepare_out(opts.out_path.parent_path(), "");
    save_instance(opts.out_path, *inst);
    report.outputs.push_back(opts.out_path);
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hedonic matching solver: dual prices, matchings and exact flow oracle"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Minimize the dual and extract the matching");
  solve_cmd->add_option("instance", solve.instance, "Instance JSON file")->required();
  solve_cmd->add_option("--tol", solve.tol, "Marginal TV tolerance");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration budget");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Log-sum-exp smoothing (0 = exact)");
  solve_cmd->add_option("--out-dir", solve.out_dir, "Directory for CSV outputs");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact min-cost flow value");
  oracle_cmd->add_option("instance", oracle.instance, "Instance JSON file")->required();
  oracle_cmd->add_option("--mass-scale", oracle.mass_scale, "Integer mass multiplier");
  oracle_cmd->add_option("--out-dir", oracle.out_dir, "Directory for CSV outputs");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Conjugacy identities and cost conditions");
  check_cmd->add_option("instance", check.instance, "Instance JSON file")->required();
  check_cmd->add_option("--seed", check.seed, "Seed for random prices");
  check_cmd->add_option("--trials", check.trials, "Number of random prices");

  ResidualOptions residual;
  auto* residual_cmd = app.add_subcommand("residual", "Solve, then the Jacobian residual");
  residual_cmd->add_option("instance", residual.solve.instance, "Instance JSON file")->required();
  residual_cmd->add_option("--tol", residual.solve.tol, "Marginal TV tolerance");
  residual_cmd->add_option("--max-iters", residual.solve.max_iters, "Iteration budget");
  residual_cmd->add_option("--epsilon", residual.solve.epsilon, "Log-sum-exp smoothing");
  residual_cmd->add_option("--out-dir", residual.solve.out_dir, "Directory for CSV outputs");
  residual_cmd->add_option("--residual-tol", residual.residual_tol, "Allowed max residual");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a test instance");
  gen_cmd->add_option("kind", gen.kind, "t1, t3, uniform-shift or random")->required();
  gen_cmd->add_option("out_path", gen.out_path, "Output JSON file")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed (random)");
  gen_cmd->add_option("--nx", gen.nx, "X atoms (random)");
  gen_cmd->add_option("--ny", gen.ny, "Y atoms (random)");
  gen_cmd->add_option("--nz", gen.nz, "Z atoms (random)");
  gen_cmd->add_option("--n", gen.n, "Atoms per side (uniform-shift)");
  gen_cmd->add_option("--alpha", gen.alpha, "Benefit curvature (uniform-shift)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitInput;
  }

  if (*solve_cmd) return cmd_solve(solve, out, err).exit_code;
  if (*oracle_cmd) return cmd_oracle(oracle, out, err).exit_code;
  if (*check_cmd) return cmd_check(check, out, err).exit_code;
  if (*residual_cmd) return cmd_residual(residual, out, err).exit_code;
  return cmd_gen(gen, out, err).exit_code;
}

}  // namespace hedmatch::cli

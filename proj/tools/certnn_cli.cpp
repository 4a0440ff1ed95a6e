#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "certnn/figure.hpp"
#include "certnn/io.hpp"
#include "certnn/lmi.hpp"
#include "certnn/pipeline.hpp"
#include "certnn/sdpa.hpp"

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_report(const certnn::RunReport& report) {
  std::cout << "verdict: " << certnn::verdict_name(report.verdict) << "\n";
  std::cout << "margin: " << num(report.certificate.margin) << " (target "
            << num(report.certificate.margin_target) << ")\n";
  std::cout << "iterations: " << report.certificate.iterations << "\n";
  for (std::size_t j = 0; j < report.pairs.size(); ++j) {
    const certnn::PairReport& p = report.pairs[j];
    std::cout << "pair " << j << ": ";
    if (p.violations < 0) {
      // No weights were produced, so there was nothing to examine.
      std::cout << "not evaluated\n";
      continue;
    }
    std::cout << "violations " << p.violations << "/" << report.mc_samples
              << ", cross margin " << num(p.verify_margin)
              << (p.verify_certified ? " (certified)" : " (not certified)");
    if (p.schur_residual != 0) std::cout << ", schur residual " << num(p.schur_residual);
    std::cout << "\n";
  }
  std::cout << "wall time: " << num(report.wall_seconds) << " s\n";
}

int run_learn(const std::string& problem_path, const std::string& mode,
              bool have_seed, std::uint64_t seed, const std::string& out_path,
              const std::string& report_path, const std::string& svg_path) {
  certnn::ProblemSpec spec = certnn::load_problem(problem_path);
  if (!mode.empty()) spec.mode = certnn::recovery_mode_from_name(mode);
  if (have_seed) {
    spec.solver.seed = seed;
    spec.seed = seed;
  }
  const certnn::RunReport report = certnn::learn(spec);
  print_report(report);
  if (!report_path.empty()) certnn::save_report(report, report_path);
  if (report.network) {
    if (!out_path.empty()) certnn::save_network(*report.network, out_path);
    if (!svg_path.empty())
      certnn::write_text_file(
          svg_path, certnn::emit_figure(spec, *report.network, spec.mc_samples,
                                        spec.seed));
  } else if (!out_path.empty() || !svg_path.empty()) {
    std::cerr << "no weights were recovered, so no weights or figure files "
                 "were written\n";
  }
  return report.verdict == certnn::Verdict::Feasible ? 0 : 2;
}

int run_verify(const std::string& weights_path, const std::string& problem_path) {
  const certnn::Network net = certnn::load_network(weights_path);
  const certnn::ProblemSpec spec = certnn::load_problem(problem_path);
  const certnn::RunReport report = certnn::verify(net, spec);
  print_report(report);
  return report.verdict == certnn::Verdict::Feasible ? 0 : 2;
}

int run_check(const std::string& weights_path, const std::string& problem_path,
              bool have_samples, long samples, bool have_seed,
              std::uint64_t seed) {
  const certnn::Network net = certnn::load_network(weights_path);
  const certnn::ProblemSpec spec = certnn::load_problem(problem_path);
  const long n = have_samples ? samples : spec.mc_samples;
  const std::uint64_t s = have_seed ? seed : spec.seed;
  const std::vector<long> counts = certnn::monte_carlo(net, spec.pairs, n, s);
  long total = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::cout << "pair " << j << ": violations " << counts[j] << "/" << n << "\n";
    total += counts[j];
  }
  std::cout << "total violations: " << total << "\n";
  return total == 0 ? 0 : 2;
}

int run_export(const std::string& problem_path, const std::string& out_path) {
  const certnn::ProblemSpec spec = certnn::load_problem(problem_path);
  const certnn::LearningProblem lp =
      certnn::build_learning(spec.nx, spec.n1, spec.ny, spec.pairs, spec.mode);
  const certnn::SdpaProblem sdpa = certnn::to_sdpa(lp.pencil);
  certnn::write_text_file(out_path, certnn::write_sdpa(sdpa));
  std::cout << "wrote " << out_path << " (" << sdpa.var_count << " variables, "
            << sdpa.block_dims.size() << " blocks, "
            << sdpa.entries.size() << " entries)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesis and verification of feed-forward networks with certified "
      "ellipsoidal input-output bounds"};
  app.require_subcommand(1);

  std::string problem_path, weights_path, out_path, report_path, svg_path, mode;
  std::uint64_t seed = 0;
  long samples = 0;

  CLI::App* learn_cmd =
      app.add_subcommand("learn", "Synthesize certified weights for a problem");
  learn_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  learn_cmd->add_option("--mode", mode, "weight recovery mode")
      ->check(CLI::IsMember({"strict", "residual"}));
  learn_cmd->add_option("--out", out_path, "write recovered weights JSON here");
  learn_cmd->add_option("--report", report_path, "write the run report JSON here");
  learn_cmd->add_option("--svg", svg_path, "write a figure SVG here (planar only)");
  CLI::Option* learn_seed =
      learn_cmd->add_option("--seed", seed, "override the solver and sampling seeds");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Certify a fixed network against a problem");
  verify_cmd->add_option("weights", weights_path, "weights JSON file")->required();
  verify_cmd->add_option("problem", problem_path, "problem JSON file")->required();

  CLI::App* check_cmd = app.add_subcommand(
      "check", "Monte-Carlo spot check of a network against a problem");
  check_cmd->add_option("weights", weights_path, "weights JSON file")->required();
  check_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  CLI::Option* check_samples =
      check_cmd->add_option("--samples", samples, "samples per pair")
          ->check(CLI::NonNegativeNumber);
  CLI::Option* check_seed =
      check_cmd->add_option("--seed", seed, "sampling seed");

  CLI::App* export_cmd = app.add_subcommand(
      "export-sdpa", "Export the learning pencil in sparse SDPA format");
  export_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  export_cmd->add_option("--out", out_path, "output .dat-s path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (learn_cmd->parsed())
      return run_learn(problem_path, mode, learn_seed->count() > 0, seed,
                       out_path, report_path, svg_path);
    if (verify_cmd->parsed()) return run_verify(weights_path, problem_path);
    if (check_cmd->parsed())
      return run_check(weights_path, problem_path, check_samples->count() > 0,
                       samples, check_seed->count() > 0, seed);
    if (export_cmd->parsed()) return run_export(problem_path, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "SOUNDNESS BUG: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

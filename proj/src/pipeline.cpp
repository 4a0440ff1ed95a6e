#include "certnn/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>
#include <string>

#include "certnn/random.hpp"
#include "certnn/sets.hpp"

namespace certnn {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Local sectors from a sound interval forward pass, one per hidden layer.
std::vector<Sector> local_sectors(const Network& net, const Ellipsoid& in) {
  const std::vector<Box> pre = preactivation_boxes(net, ellipsoid_box(in));
  std::vector<Sector> sectors;
  sectors.reserve(pre.size());
  for (const Box& box : pre) sectors.push_back(local_sector(net.activation, box));
  return sectors;
}

AffinePencil verification_pencil(const Network& net, const PairSpec& pair) {
  const std::vector<Sector> sectors = local_sectors(net, pair.in);
  if (net.hidden_layer_count() == 1)
    return build_verification(net, pair.in, pair.out, sectors[0]);
  return build_verification_multilayer(net, pair.in, pair.out, sectors);
}

long fill_violations(RunReport& report, const Network& net,
                     const ProblemSpec& spec) {
  const std::vector<long> counts =
      monte_carlo(net, spec.pairs, spec.mc_samples, spec.seed);
  long total = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    report.pairs[j].violations = counts[j];
    total += counts[j];
  }
  return total;
}

}  // namespace

void ProblemSpec::validate() const {
  if (nx <= 0 || n1 <= 0 || ny <= 0)
    throw std::invalid_argument("problem shape entries must be positive");
  if (pairs.empty())
    throw std::invalid_argument("problem needs at least one specification pair");
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const std::string where = "pair " + std::to_string(j);
    pairs[j].in.validate();
    pairs[j].out.validate();
    if (pairs[j].in.dim() != nx)
      throw std::invalid_argument(where + ": input ellipsoid dimension is not nx");
    if (pairs[j].out.dim() != ny)
      throw std::invalid_argument(where + ": output ellipsoid dimension is not ny");
  }
  solver.validate();
  if (mc_samples < 1)
    throw std::invalid_argument("mc_samples must be at least 1");
}

std::vector<long> monte_carlo(const Network& net,
                              const std::vector<PairSpec>& pairs, long n,
                              std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample count must be nonnegative");
  net.validate();
  // Chunked so the counts are a deterministic aggregate regardless of how
  // chunks would be scheduled.
  constexpr long kChunk = 4096;
  std::vector<long> counts(pairs.size(), 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::uint64_t pair_seed = Rng::derive(seed, static_cast<std::uint64_t>(p));
    long bad = 0;
    for (long start = 0; start < n; start += kChunk) {
      Rng rng(Rng::derive(pair_seed, static_cast<std::uint64_t>(start / kChunk)));
      const long stop = std::min(n, start + kChunk);
      for (long i = start; i < stop; ++i) {
        const Eigen::VectorXd x = pairs[p].in.sample(rng);
        if (!pairs[p].out.contains(forward(net, x), 1e-12)) ++bad;
      }
    }
    counts[p] = bad;
  }
  return counts;
}

RunReport learn(const ProblemSpec& spec) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.mc_samples = spec.mc_samples;
  report.pairs.resize(spec.pairs.size());

  std::string stage = "build_learning";
  try {
    const LearningProblem lp =
        build_learning(spec.nx, spec.n1, spec.ny, spec.pairs, spec.mode);
    stage = "solve";
    const Certificate cert = solve(lp.pencil, spec.solver);
    report.certificate = cert;
    report.verdict = cert.verdict;
    if (cert.verdict == Verdict::Feasible) {
      stage = "recover";
      const TransformedForm tf = lp.vars.decode(cert.z, spec.activation);
      Network net = inverse_two_layer(tf, spec.mode);
      net.validate();
      stage = "schur_check";
      for (std::size_t j = 0; j < spec.pairs.size(); ++j)
        report.pairs[j].schur_residual =
            schur_check(lp.vars, cert.z, spec.pairs[j], static_cast<int>(j));
      stage = "cross_verify";
      SolveOptions vopts = spec.solver;
      vopts.log = nullptr;
      for (std::size_t j = 0; j < spec.pairs.size(); ++j) {
        const Certificate vc = solve(verification_pencil(net, spec.pairs[j]), vopts);
        report.pairs[j].verify_margin = vc.margin;
        report.pairs[j].verify_certified = vc.verdict == Verdict::Feasible;
      }
      stage = "monte_carlo";
      if (fill_violations(report, net, spec) > 0)
        throw std::logic_error(
            "soundness bug: weights solved as Feasible were violated by "
            "sampled inputs; the run was aborted instead of reporting");
      report.network = std::move(net);
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("learn stage " + stage + ": " + e.what());
  } catch (const std::logic_error&) {
    throw;  // the soundness abort, untouched
  } catch (const std::exception& e) {
    throw std::runtime_error("learn stage " + stage + ": " + e.what());
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

RunReport verify(const Network& net, const ProblemSpec& spec) {
  spec.validate();
  net.validate();
  if (net.input_dim() != spec.nx || net.output_dim() != spec.ny)
    throw std::invalid_argument("network dimensions do not match the problem");
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.mc_samples = spec.mc_samples;
  report.pairs.resize(spec.pairs.size());
  report.certificate.margin_target = spec.solver.margin_target;

  bool all_certified = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < spec.pairs.size(); ++j) {
    const Certificate cert = solve(verification_pencil(net, spec.pairs[j]), spec.solver);
    report.pairs[j].verify_margin = cert.margin;
    report.pairs[j].verify_certified = cert.verdict == Verdict::Feasible;
    all_certified = all_certified && report.pairs[j].verify_certified;
    worst_margin = std::min(worst_margin, cert.margin);
    report.certificate.iterations += cert.iterations;
  }
  report.verdict = all_certified ? Verdict::Feasible : Verdict::BudgetExhausted;
  report.certificate.margin = worst_margin;
  report.certificate.verdict = report.verdict;

  const long total = fill_violations(report, net, spec);
  if (report.verdict == Verdict::Feasible && total > 0)
    throw std::logic_error(
        "soundness bug: a certified network was violated by sampled inputs; "
        "the run was aborted instead of reporting");
  report.wall_seconds = seconds_since(t0);
  return report;
}

}  // namespace certnn

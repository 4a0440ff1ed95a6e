// Feasibility-rate sweep over randomized geometries: how often synthesis
// succeeds as the target sets shrink relative to the inputs. Exploratory
// companion to the acceptance gate, not part of it; rates below 100% at
// tight scales are expected, not a defect.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "certnn/pipeline.hpp"
#include "certnn/random.hpp"

using namespace certnn;

namespace {

Eigen::MatrixXd rotation(Rng& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) g.col(i) = rng.gaussian_vector(n);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

Ellipsoid random_set(Rng& rng, int n, double center_span, double rmin,
                     double rmax) {
  Eigen::MatrixXd q = rotation(rng, n);
  Eigen::VectorXd inv_r(n);
  for (int i = 0; i < n; ++i) inv_r[i] = 1.0 / rng.uniform(rmin, rmax);
  Ellipsoid e;
  e.shape = q * inv_r.asDiagonal() * q.transpose();
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.uniform(-center_span, center_span);
  e.center = -e.shape * c;
  return e;
}

ProblemSpec random_problem(std::uint64_t seed, double target_scale) {
  Rng rng(Rng::derive(seed, 7));
  ProblemSpec spec;
  spec.nx = 2 + static_cast<int>(rng.raw() % 2);
  spec.ny = 2 + static_cast<int>(rng.raw() % 2);
  spec.n1 = 4 + static_cast<int>(rng.raw() % 9);
  spec.activation = Activation::Tanh;
  spec.mode = rng.raw() % 2 ? RecoveryMode::Strict : RecoveryMode::Residual;
  int npairs = 1 + static_cast<int>(rng.raw() % 3);
  for (int j = 0; j < npairs; ++j)
    spec.pairs.push_back(
        {random_set(rng, spec.nx, 3.0, 0.5, 1.5),
         random_set(rng, spec.ny, 0.4, 1.3 * target_scale, 2.0 * target_scale)});
  spec.mc_samples = 1000;
  spec.seed = seed;
  spec.solver.seed = seed;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  long trials = 30;
  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [trials-per-scale]\n", argv[0]);
    return 1;
  }
  if (argc == 2) {
    trials = std::strtol(argv[1], nullptr, 10);
    if (trials < 1) {
      std::fprintf(stderr, "trials must be a positive integer\n");
      return 1;
    }
  }

  const double scales[] = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  std::printf("%8s %10s %12s %12s %12s\n", "scale", "feasible", "rate",
              "mean iters", "violations");
  for (double scale : scales) {
    long feasible = 0, iters = 0, violations = 0;
    for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(trials);
         ++seed) {
      RunReport rep = learn(random_problem(seed, scale));
      iters += rep.certificate.iterations;
      if (rep.verdict != Verdict::Feasible) continue;
      ++feasible;
      for (const PairReport& pr : rep.pairs)
        if (pr.violations > 0) violations += pr.violations;
    }
    std::printf("%8.2f %7ld/%-2ld %11.0f%% %12.1f %12ld\n", scale, feasible,
                trials, 100.0 * static_cast<double>(feasible) / trials,
                static_cast<double>(iters) / trials, violations);
  }
  std::printf("\nviolations counts sampled misses across every feasible run; "
              "any nonzero value is a soundness bug.\n");
  return 0;
}

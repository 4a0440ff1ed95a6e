#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "certnn/lmi.hpp"
#include "certnn/loop_transform.hpp"
#include "certnn/network.hpp"
#include "certnn/solver.hpp"

namespace certnn {

/// Everything a learning or verification run needs: the specification pairs,
/// the architecture, and the budgets.
struct ProblemSpec {
  int nx = 0;
  int n1 = 0;
  int ny = 0;
  Activation activation = Activation::Tanh;
  RecoveryMode mode = RecoveryMode::Strict;
  std::vector<PairSpec> pairs;
  SolveOptions solver;
  long mc_samples = 500;
  std::uint64_t seed = 0;  // sampling seed

  void validate() const;
};

struct PairReport {
  long violations = -1;       // sampled outputs outside the target set; -1 if not sampled
  double schur_residual = 0;  // learning runs only
  double verify_margin = 0;   // margin of the independent per-pair verification
  bool verify_certified = false;
};

struct RunReport {
  Verdict verdict = Verdict::BudgetExhausted;
  Certificate certificate;  // from the learning solve; empty for verify runs
  std::optional<Network> network;
  std::vector<PairReport> pairs;
  long mc_samples = 0;
  double wall_seconds = 0;
};

/// Synthesize a network meeting every pair: build the learning pencil,
/// solve, recover weights, then cross-examine the result (Schur residual,
/// independent per-pair verification with local sectors, Monte-Carlo
/// sampling). A feasible verdict with any sampled violation is treated as an
/// internal soundness bug and throws std::logic_error rather than returning.
/// On BudgetExhausted the report carries the best margin and no network.
RunReport learn(const ProblemSpec& spec);

/// Certify a fixed network against spec.pairs: interval bounds, local
/// sectors, then one verification pencil per pair. Verdict Feasible means
/// every pair certified; BudgetExhausted means unknown, never "violated".
/// Monte-Carlo counts are reported alongside as a diagnostic.
RunReport verify(const Network& net, const ProblemSpec& spec);

/// Per-pair count of sampled inputs whose image lands outside the target
/// set (membership tolerance 1e-12). Deterministic per seed; chunked
/// sampling uses derived per-chunk seeds.
std::vector<long> monte_carlo(const Network& net,
                              const std::vector<PairSpec>& pairs, long n,
                              std::uint64_t seed);

}  // namespace certnn

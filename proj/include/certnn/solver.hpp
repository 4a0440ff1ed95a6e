#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "certnn/pencil.hpp"

namespace certnn {

struct SolveOptions {
  double margin_target = 1e-6;  // PSD margin that counts as feasible
  double radius = 1e3;          // norm cap on the solution vector
  long max_iters = 20000;
  double time_budget_sec = 0;  // 0: no wall-clock cap
  double tol_eig = 1e-10;      // eigensolve acceptance used by validation
  std::uint64_t seed = 1;      // initial-point perturbation
  std::ostream* log = nullptr;  // optional one-line-per-iteration trace

  void validate() const;
};

enum class Verdict { Feasible, BudgetExhausted };

const char* verdict_name(Verdict v);

struct Certificate {
  Eigen::VectorXd z;
  double margin = 0;         // min eigenvalue over blocks, recomputed at z
  double margin_target = 0;  // target the solve ran against
  long iterations = 0;
  Verdict verdict = Verdict::BudgetExhausted;
};

/// Maximize the minimum eigenvalue over all pencil blocks, subject to the
/// variable sign constraints and |z| <= radius, by projected supergradient
/// ascent with adaptive-level steps. The objective is concave (a pointwise
/// minimum of concave per-block smallest eigenvalues), so the method cannot
/// get trapped; it returns Feasible the moment a freshly recomputed margin
/// reaches margin_target, and otherwise BudgetExhausted with the best point
/// found. Deterministic for fixed inputs and seed.
Certificate solve(const AffinePencil& pencil, const SolveOptions& opts);

/// Re-derive the verdict from scratch: true iff every block is PSD with
/// margin at least cert.margin_target - 1e-9 at cert.z and every sign
/// constraint holds. Shares no state with solve().
bool check_certificate(const AffinePencil& pencil, const Certificate& cert);

}  // namespace certnn

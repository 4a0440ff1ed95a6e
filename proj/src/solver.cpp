#include "certnn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "certnn/random.hpp"

namespace certnn {

void SolveOptions::validate() const {
  if (!(margin_target > 0)) throw std::invalid_argument("margin target must be positive");
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  if (max_iters < 1) throw std::invalid_argument("iteration budget must be positive");
  if (!(tol_eig > 0)) throw std::invalid_argument("eigensolver tolerance must be positive");
}

const char* verdict_name(Verdict v) {
  return v == Verdict::Feasible ? "feasible" : "budget_exhausted";
}

namespace {

void project(const AffinePencil& pencil, double radius, Eigen::VectorXd& z) {
  // Sign clamps first, then the norm cap, then the positivity floor again:
  // the floor is tiny relative to the radius, so the final point satisfies
  // both for practical purposes.
  for (int pass = 0; pass < 2; ++pass) {
    double floor = 1e-9 * std::max(1.0, z.norm());
    for (int i = 0; i < pencil.var_count(); ++i) {
      switch (pencil.vars[i].sign) {
        case VarSign::Free:
          break;
        case VarSign::NonNeg:
          if (z[i] < 0) z[i] = 0;
          break;
        case VarSign::Positive:
          if (z[i] < floor) z[i] = floor;
          break;
      }
    }
    double norm = z.norm();
    if (norm <= radius) break;
    z *= radius / norm;
  }
}

struct Objective {
  double value;
  Eigen::VectorXd supergradient;
  int active_block;
};

// Minimum eigenvalue across blocks and the averaged supergradient over all
// blocks within 1e-9 of it (averaging avoids zig-zag between tied blocks).
Objective evaluate(const AffinePencil& pencil, const Eigen::VectorXd& z) {
  std::vector<EigenPair> pairs;
  pairs.reserve(pencil.blocks.size());
  double worst = std::numeric_limits<double>::infinity();
  int worst_idx = 0;
  for (std::size_t b = 0; b < pencil.blocks.size(); ++b) {
    pairs.push_back(min_eig(pencil.blocks[b].evaluate(z)));
    if (pairs.back().value < worst) {
      worst = pairs.back().value;
      worst_idx = static_cast<int>(b);
    }
  }
  Objective obj;
  obj.value = worst;
  obj.active_block = worst_idx;
  obj.supergradient = Eigen::VectorXd::Zero(pencil.var_count());
  int active = 0;
  for (std::size_t b = 0; b < pencil.blocks.size(); ++b) {
    if (pairs[b].value > worst + 1e-9) continue;
    ++active;
    const Eigen::VectorXd& v = pairs[b].vector;
    for (const PencilBlock::Term& t : pencil.blocks[b].terms)
      obj.supergradient[t.var] += v.dot(t.coeff * v);
  }
  obj.supergradient /= active;
  return obj;
}

}  // namespace

Certificate solve(const AffinePencil& pencil, const SolveOptions& opts) {
  pencil.validate();
  opts.validate();
  const auto start = std::chrono::steady_clock::now();

  Rng rng(opts.seed);
  Eigen::VectorXd z(pencil.var_count());
  for (int i = 0; i < pencil.var_count(); ++i) {
    switch (pencil.vars[i].sign) {
      case VarSign::Free:
        z[i] = 0.1 * (2.0 * rng.uniform() - 1.0);
        break;
      case VarSign::NonNeg:
        z[i] = 0.5;
        break;
      case VarSign::Positive:
        z[i] = 1.0;
        break;
    }
  }
  project(pencil, opts.radius, z);

  Eigen::VectorXd z_best = z;
  double g_best = -std::numeric_limits<double>::infinity();
  // Level gap, halved whenever progress stalls; reaching the floor means the
  // method has squeezed the level set as far as double precision allows.
  double delta = 0;
  double check_gbest = 0;
  long check_iter = 0;
  long iters = 0;

  for (long iter = 0; iter <= opts.max_iters; ++iter) {
    iters = iter;
    Objective obj = evaluate(pencil, z);
    if (obj.value > g_best) {
      g_best = obj.value;
      z_best = z;
    }
    if (iter == 0) {
      delta = std::max(1e-3, 0.1 * std::abs(opts.margin_target - obj.value));
      check_gbest = g_best;
    }
    if (opts.log)
      *opts.log << "iter=" << iter << " margin=" << obj.value
                << " best=" << g_best << " delta=" << delta
                << " block=" << obj.active_block << "\n";

    if (g_best >= opts.margin_target) {
      double margin = pencil.min_eigenvalue(z_best);
      if (margin >= opts.margin_target)
        return Certificate{z_best, margin, opts.margin_target, iter, Verdict::Feasible};
    }

    if (iter - check_iter >= 50) {
      if (g_best - check_gbest < 0.01 * delta) delta *= 0.5;
      check_gbest = g_best;
      check_iter = iter;
      if (delta < 1e-12) break;
    }
    if (opts.time_budget_sec > 0) {
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > opts.time_budget_sec) break;
    }

    double level = std::min(opts.margin_target, g_best + delta);
    double hn2 = obj.supergradient.squaredNorm();
    if (hn2 < 1e-24) continue;  // stationary point of the active set; let delta decay
    double step = (level - obj.value) / hn2;
    if (step <= 0) continue;
    z += step * obj.supergradient;
    project(pencil, opts.radius, z);
  }

  double margin = pencil.min_eigenvalue(z_best);
  Verdict verdict = margin >= opts.margin_target ? Verdict::Feasible
                                                 : Verdict::BudgetExhausted;
  return Certificate{z_best, margin, opts.margin_target, iters, verdict};
}

bool check_certificate(const AffinePencil& pencil, const Certificate& cert) {
  if (cert.z.size() != pencil.var_count())
    throw std::invalid_argument("certificate length does not match the pencil");
  for (int i = 0; i < pencil.var_count(); ++i) {
    if (pencil.vars[i].sign == VarSign::NonNeg && cert.z[i] < 0) return false;
    if (pencil.vars[i].sign == VarSign::Positive && !(cert.z[i] > 0)) return false;
  }
  for (const PencilBlock& blk : pencil.blocks)
    if (min_eig(blk.evaluate(cert.z)).value < cert.margin_target - 1e-9) return false;
  return true;
}

}  // namespace certnn

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "certnn/loop_transform.hpp"
#include "certnn/network.hpp"
#include "certnn/pencil.hpp"
#include "certnn/sets.hpp"

namespace certnn {

/// One input-output specification: every image of a point of `in` must land
/// inside `out`.
struct PairSpec {
  Ellipsoid in;
  Ellipsoid out;
};

/// Verification pencil for a two-layer network (skip term allowed) against
/// one pair. A single block over the basis [x; w; 1], w standing for the
/// hidden activation output; variables are the input-set multiplier followed
/// by one sector multiplier per hidden neuron, all nonnegative. The block is
/// the negated combination of the three constraint factors, so a positive
/// semidefinite value certifies containment.
AffinePencil build_verification(const Network& net, const Ellipsoid& in,
                                const Ellipsoid& out, const Sector& sector);

/// Verification pencil for arbitrary depth over the stacked normalized basis
/// [x; w_1; ...; w_l; 1], one sector per hidden layer. Degenerate sector
/// entries are handled without inverses. For one hidden layer under the
/// symmetric global sector this produces entry-for-entry the same block as
/// build_verification; for other sectors the two are congruent and agree on
/// feasibility.
AffinePencil build_verification_multilayer(const Network& net,
                                           const Ellipsoid& in,
                                           const Ellipsoid& out,
                                           const std::vector<Sector>& sectors);

/// Variable layout of the learning pencil plus decoding views. All offsets
/// index the flat solution vector; matrices are stored row-major in it.
struct LearningVariables {
  RecoveryMode mode = RecoveryMode::Strict;
  int nx = 0;
  int n1 = 0;
  int ny = 0;
  int pair_count = 0;

  int q_off = 0;       // n1 positive diagonal entries (inverse of the sector multiplier)
  int lambda_off = 0;  // one nonneg input multiplier per pair
  int vx_off = 0;      // n1 x nx hidden weight block
  int l2_off = 0;      // ny x n1 output weight block, right-scaled by diag(q)
  int b0_off = 0;      // n1 hidden bias
  int b1_off = 0;      // ny output bias
  int yx_off = -1;     // ny x nx direct input-output block, Residual mode only
  int count = 0;

  Eigen::VectorXd q(const Eigen::VectorXd& z) const;
  double lambda(const Eigen::VectorXd& z, int pair) const;
  Eigen::MatrixXd v_from_input(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd out_scaled(const Eigen::VectorXd& z) const;
  Eigen::VectorXd hidden_bias(const Eigen::VectorXd& z) const;
  Eigen::VectorXd out_bias(const Eigen::VectorXd& z) const;
  /// Zero matrix in Strict mode (the block has no variables there).
  Eigen::MatrixXd out_from_input(const Eigen::VectorXd& z) const;

  /// Transformed network parameterized by a solution: the output weight
  /// block is recovered as out_scaled * diag(q)^{-1}. Sector comes from the
  /// mode, so the result feeds straight into inverse_two_layer.
  TransformedForm decode(const Eigen::VectorXd& z, Activation act) const;
};

struct LearningProblem {
  AffinePencil pencil;
  LearningVariables vars;
};

/// Convexified learning pencil: one PSD block per pair, of dimension
/// nx + n1 + 1 + n1 + ny, sharing the network variables and the diagonal
/// multiplier across pairs, with one input multiplier per pair. Strict mode
/// pins the direct input-output term to zero (no variables created for it);
/// Residual mode frees it. The coupling block between hidden weights and
/// later layers is structurally zero for two-layer networks in both modes,
/// so no variables are ever created for it.
LearningProblem build_learning(int nx, int n1, int ny,
                               const std::vector<PairSpec>& pairs,
                               RecoveryMode mode);

/// Largest eigenvalue of the combined constraint for one pair, reconstructed
/// from a learning solution without the Schur step: the multiplier matrix is
/// inverted back out of the solution and the three factors are assembled
/// directly over [x; w; 1]. Contract: at most about round-off (<= 1e-8)
/// whenever the learning block is PSD. Requires q > 0; pair_index selects
/// the input multiplier.
double schur_check(const LearningVariables& vars, const Eigen::VectorXd& z,
                   const PairSpec& pair, int pair_index);

}  // namespace certnn

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "certnn/network.hpp"
#include "certnn/sets.hpp"

namespace certnn {

/// Network data after normalizing the activation sectors to [-1, 1].
/// With A = diag(sector.lo), B = diag(sector.hi) and the normalized
/// nonlinearity
///   psi(v) = 2 (B - A)^{-1} (phi(v) - ((A + B) / 2) v),
/// the original network satisfies the implicit system
///   v   = v_from_input * x + v_from_act * w + hidden_bias,
///   out = out_from_input * x + out_from_act * w + out_bias,
/// where w = psi(v) lies in the symmetric sector [-1, 1] coordinate-wise.
struct TransformedForm {
  Eigen::MatrixXd v_from_input;
  Eigen::MatrixXd v_from_act;      // strictly block-subdiagonal; zero for one hidden layer
  Eigen::MatrixXd out_from_input;  // zero in the symmetric-sector two-layer case
  Eigen::MatrixXd out_from_act;
  Eigen::VectorXd hidden_bias;
  Eigen::VectorXd out_bias;

  Sector sector;  // the per-neuron sector the transform normalized away
  Activation activation = Activation::Tanh;
  int input_dim = 0;
  std::vector<int> hidden_sizes;
  int output_dim = 0;

  int total_hidden() const;
};

/// Apply the loop transformation to a pure feed-forward network under the
/// given elementwise sector (one entry per hidden neuron, stacked). Requires
/// sector.hi > sector.lo in every coordinate and, for nets with more than
/// one hidden layer, a well-conditioned inter-layer coupling.
TransformedForm loop_transform(const Network& net, const Sector& sector);

/// Normalized activation value: psi(v) per coordinate for the sector entry
/// (lo, hi). Degenerate entries (hi == lo) map to zero.
Eigen::VectorXd normalized_activation(Activation act, const Sector& sector,
                                      const Eigen::VectorXd& v);

/// Evaluate the transformed system directly, resolving the implicit hidden
/// equation block by block. Agrees with forward() on the source network.
Eigen::VectorXd eval_transformed(const TransformedForm& tf,
                                 const Eigen::VectorXd& x);

/// How inverse_two_layer() realizes the output map of a transformed form.
/// Strict requires a symmetric sector and a zero direct input-output term,
/// and returns a pure two-layer network. Residual accepts any nondegenerate
/// sector and absorbs the leftover direct term into a skip matrix.
enum class RecoveryMode { Strict, Residual };

const char* recovery_mode_name(RecoveryMode mode);
RecoveryMode recovery_mode_from_name(const std::string& name);

/// Sector the learning formulation interprets its solutions under: Strict
/// uses the symmetric global sector [-1, 1], Residual uses [0, 1]. Every
/// supported activation lies inside both on all of R.
Sector learning_sector(RecoveryMode mode, int n);

/// Reconstruct a two-layer network whose loop transformation under
/// tf.sector reproduces the given form. Requires exactly one hidden layer.
/// Throws std::invalid_argument when the mode's preconditions fail, naming
/// the offending block.
Network inverse_two_layer(const TransformedForm& tf, RecoveryMode mode);

}  // namespace certnn

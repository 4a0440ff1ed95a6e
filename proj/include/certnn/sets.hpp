#pragma once

#include <vector>

#include <Eigen/Dense>

#include "certnn/network.hpp"
#include "certnn/random.hpp"

namespace certnn {

/// Ellipsoid in normalized form: the set of x with |shape * x + center| <= 1.
/// Membership and the quadratic constraint take `shape` as given; sampling
/// and box-bounding additionally require it to be invertible.
struct Ellipsoid {
  Eigen::MatrixXd shape;   // A for input sets, C for output sets
  Eigen::VectorXd center;  // b resp. d

  int dim() const { return static_cast<int>(shape.cols()); }
  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
  /// Uniform sample from the ellipsoid. Requires invertible shape.
  Eigen::VectorXd sample(Rng& rng) const;
  void validate() const;
};

/// Membership certificate matrix over [x; 1], scaled by a nonnegative
/// multiplier: P = lambda * [[-A'A, -A'b], [-b'A, 1 - b'b]], so that
/// [x; 1]' P [x; 1] = lambda * (1 - |Ax + b|^2) >= 0 exactly when x is a
/// member. Linear in lambda, hence a convex cone of valid certificates.
Eigen::MatrixXd input_qc(const Ellipsoid& e, double lambda);

/// Output-containment penalty matrix over [x; y; 1]:
/// S = [[0,0,0], [0, C'C, C'd], [0, d'C, d'd - 1]], so the quadratic form
/// equals |Cy + d|^2 - 1 and is <= 0 exactly for members. Only the y rows
/// are nonzero, but the matrix spans the stacked vector, so the input
/// dimension is passed explicitly.
Eigen::MatrixXd output_spec(const Ellipsoid& out, int input_dim);

/// Elementwise sector bounds on an activation: for every coordinate,
/// (phi_i(v) - lo_i v)(hi_i v - phi_i(v)) >= 0 on the region the bounds were
/// derived for.
struct Sector {
  Eigen::VectorXd lo;  // alpha, per-neuron lower slope
  Eigen::VectorXd hi;  // beta, per-neuron upper slope

  int dim() const { return static_cast<int>(lo.size()); }
  bool symmetric(double tol = 0.0) const;
  static Sector uniform(int n, double lo, double hi);
  void validate() const;
};

/// Sector constraint matrix over [v; w] (w standing for phi(v)) with
/// nonnegative diagonal multipliers mu:
///   [[-2 diag(lo*hi*mu), diag((lo+hi)*mu)], [diag((lo+hi)*mu), -2 diag(mu)]].
/// The quadratic form equals 2 sum_i mu_i (w_i - lo_i v_i)(hi_i v_i - w_i),
/// nonnegative whenever phi lies in the sector coordinate-wise.
Eigen::MatrixXd sector_qc(const Sector& sec, const Eigen::VectorXd& mu);

/// Componentwise closed box.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
};

/// Tight axis-aligned bounding box of an ellipsoid: center -A^{-1}b,
/// half-width of axis i the norm of row i of A^{-1}. Requires invertible
/// shape.
Box ellipsoid_box(const Ellipsoid& e);

/// Interval forward pass: sound pre-activation bounds for every hidden
/// layer, by splitting each weight matrix into positive and negative parts.
std::vector<Box> preactivation_boxes(const Network& net, const Box& in);

/// Tightest elementwise sector of the activation over a pre-activation box:
/// infimum and supremum of phi(v)/v over the interval, with the derivative
/// at the origin standing in at v = 0. Results are relaxed outward by 1e-9
/// (clamped to the global sector) so downstream constraints stay sound under
/// round-off.
Sector local_sector(Activation act, const Box& pre);

}  // namespace certnn

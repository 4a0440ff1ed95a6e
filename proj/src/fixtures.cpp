#include "certnn/fixtures.hpp"

namespace certnn {

namespace {

/// Circle of radius r centered at c, in normalized form |Ax + b| <= 1.
Ellipsoid circle(double cx, double cy, double r) {
  Ellipsoid e;
  e.shape = Eigen::Matrix2d::Identity() / r;
  e.center = -e.shape * Eigen::Vector2d(cx, cy);
  return e;
}

/// Axis-aligned ellipse with half-widths (ax, ay) centered at c.
Ellipsoid ellipse(double cx, double cy, double ax, double ay) {
  Ellipsoid e;
  e.shape = Eigen::Vector2d(1.0 / ax, 1.0 / ay).asDiagonal();
  e.center = -e.shape * Eigen::Vector2d(cx, cy);
  return e;
}

}  // namespace

ProblemSpec twin_disks_problem() {
  ProblemSpec spec;
  spec.nx = 2;
  spec.n1 = 10;
  spec.ny = 2;
  spec.activation = Activation::Tanh;
  spec.mode = RecoveryMode::Strict;
  spec.pairs.push_back({circle(3.0, 2.0, 1.0), circle(0.7, 0.3, 1.6)});
  spec.pairs.push_back({circle(-3.0, -2.0, 1.0), circle(-0.7, -0.3, 1.6)});
  spec.mc_samples = 500;
  spec.seed = 0;
  return spec;
}

ProblemSpec three_region_problem() {
  ProblemSpec spec;
  spec.nx = 2;
  spec.n1 = 5;
  spec.ny = 2;
  spec.activation = Activation::Tanh;
  spec.mode = RecoveryMode::Strict;
  spec.pairs.push_back({circle(2.5, 0.0, 1.0), circle(0.5, 0.3, 1.8)});
  spec.pairs.push_back({circle(-2.0, 1.5, 0.7), circle(-0.4, 0.2, 1.5)});
  spec.pairs.push_back({ellipse(0.0, -2.5, 1.2, 0.6), ellipse(0.0, -0.3, 2.0, 1.4)});
  spec.mc_samples = 500;
  spec.seed = 0;
  return spec;
}

}  // namespace certnn

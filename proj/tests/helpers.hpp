#pragma once

#include <vector>

#include <Eigen/Dense>

#include "certnn/network.hpp"
#include "certnn/random.hpp"
#include "certnn/sets.hpp"

namespace testutil {

inline Eigen::MatrixXd random_matrix(certnn::Rng& rng, int rows, int cols,
                                     double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

inline certnn::Network random_network(certnn::Rng& rng,
                                      const std::vector<int>& sizes,
                                      certnn::Activation act,
                                      double scale = 1.0) {
  certnn::Network net;
  net.activation = act;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    certnn::Layer layer;
    layer.W = random_matrix(rng, sizes[k + 1], sizes[k], scale);
    layer.b = random_matrix(rng, sizes[k + 1], 1, scale);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

/// Independent straight-line evaluator used as an oracle for forward().
inline Eigen::VectorXd forward_oracle(const certnn::Network& net,
                                      const Eigen::VectorXd& x) {
  Eigen::VectorXd h = x;
  for (std::size_t k = 0; k + 1 < net.layers.size(); ++k) {
    Eigen::VectorXd pre = net.layers[k].W * h + net.layers[k].b;
    switch (net.activation) {
      case certnn::Activation::Tanh:
        h = pre.array().tanh();
        break;
      case certnn::Activation::ReLU:
        h = pre.cwiseMax(0.0);
        break;
      case certnn::Activation::Identity:
        h = pre;
        break;
    }
  }
  Eigen::VectorXd out = net.layers.back().W * h + net.layers.back().b;
  if (net.skip) out += *net.skip * x;
  return out;
}

/// Rotated positive definite shape matrix, for ellipsoids in general position.
inline Eigen::MatrixXd random_pd_shape(certnn::Rng& rng, int n, double rmin,
                                       double rmax) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) g.col(i) = rng.gaussian_vector(n);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd inv_r(n);
  for (int i = 0; i < n; ++i) inv_r[i] = 1.0 / rng.uniform(rmin, rmax);
  return q * inv_r.asDiagonal() * q.transpose();
}

inline certnn::Ellipsoid random_ellipsoid(certnn::Rng& rng, int n,
                                          double center_span, double rmin,
                                          double rmax) {
  certnn::Ellipsoid e;
  e.shape = random_pd_shape(rng, n, rmin, rmax);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.uniform(-center_span, center_span);
  e.center = -e.shape * c;
  return e;
}

}  // namespace testutil

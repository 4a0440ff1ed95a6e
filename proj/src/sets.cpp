#include "certnn/sets.hpp"

#include <cmath>
#include <stdexcept>

namespace certnn {

bool Ellipsoid::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim())
    throw std::invalid_argument("point dimension does not match ellipsoid");
  return (shape * x + center).norm() <= 1.0 + tol;
}

Eigen::VectorXd Ellipsoid::sample(Rng& rng) const {
  validate();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(shape);
  if (!lu.isInvertible())
    throw std::invalid_argument("ellipsoid shape matrix is singular");
  Eigen::VectorXd u = rng.unit_ball(dim());
  return lu.solve(u - center);
}

void Ellipsoid::validate() const {
  if (shape.rows() != shape.cols())
    throw std::invalid_argument("ellipsoid shape matrix is not square");
  if (center.size() != shape.rows())
    throw std::invalid_argument("ellipsoid center length does not match shape");
  if (!shape.allFinite() || !center.allFinite())
    throw std::invalid_argument("ellipsoid has non-finite entries");
}

Eigen::MatrixXd input_qc(const Ellipsoid& e, double lambda) {
  if (lambda < 0) throw std::invalid_argument("input multiplier must be nonnegative");
  e.validate();
  const int n = e.dim();
  Eigen::MatrixXd p(n + 1, n + 1);
  p.topLeftCorner(n, n) = -lambda * (e.shape.transpose() * e.shape);
  Eigen::VectorXd atb = e.shape.transpose() * e.center;
  p.topRightCorner(n, 1) = -lambda * atb;
  p.bottomLeftCorner(1, n) = (-lambda * atb).transpose();
  p(n, n) = lambda * (1.0 - e.center.squaredNorm());
  return p;
}

Eigen::MatrixXd output_spec(const Ellipsoid& out, int input_dim) {
  out.validate();
  if (input_dim < 0) throw std::invalid_argument("negative input dimension");
  const int ny = out.dim();
  const int n = input_dim + ny + 1;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  s.block(input_dim, input_dim, ny, ny) = out.shape.transpose() * out.shape;
  Eigen::VectorXd ctd = out.shape.transpose() * out.center;
  s.block(input_dim, n - 1, ny, 1) = ctd;
  s.block(n - 1, input_dim, 1, ny) = ctd.transpose();
  s(n - 1, n - 1) = out.center.squaredNorm() - 1.0;
  return s;
}

bool Sector::symmetric(double tol) const {
  return (lo + hi).cwiseAbs().maxCoeff() <= tol;
}

Sector Sector::uniform(int n, double lo, double hi) {
  Sector s;
  s.lo = Eigen::VectorXd::Constant(n, lo);
  s.hi = Eigen::VectorXd::Constant(n, hi);
  s.validate();
  return s;
}

void Sector::validate() const {
  if (lo.size() != hi.size())
    throw std::invalid_argument("sector bound lengths differ");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i]))
      throw std::invalid_argument("sector lower slope exceeds upper slope");
}

Eigen::MatrixXd sector_qc(const Sector& sec, const Eigen::VectorXd& mu) {
  sec.validate();
  const int n = sec.dim();
  if (mu.size() != n)
    throw std::invalid_argument("multiplier length does not match sector");
  if (mu.minCoeff() < 0)
    throw std::invalid_argument("sector multipliers must be nonnegative");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    q(i, i) = -2.0 * sec.lo[i] * sec.hi[i] * mu[i];
    q(i, n + i) = (sec.lo[i] + sec.hi[i]) * mu[i];
    q(n + i, i) = q(i, n + i);
    q(n + i, n + i) = -2.0 * mu[i];
  }
  return q;
}

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim())
    throw std::invalid_argument("point dimension does not match box");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  return true;
}

Box ellipsoid_box(const Ellipsoid& e) {
  e.validate();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e.shape);
  if (!lu.isInvertible())
    throw std::invalid_argument("ellipsoid shape matrix is singular");
  Eigen::MatrixXd inv = lu.inverse();
  Eigen::VectorXd c = -(inv * e.center);
  Box box;
  box.lo.resize(e.dim());
  box.hi.resize(e.dim());
  for (int i = 0; i < e.dim(); ++i) {
    double r = inv.row(i).norm();
    box.lo[i] = c[i] - r;
    box.hi[i] = c[i] + r;
  }
  return box;
}

namespace {

// Interval image of an affine map, splitting W into sign parts.
Box affine_box(const Box& in, const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
  Eigen::MatrixXd wp = w.cwiseMax(0.0);
  Eigen::MatrixXd wm = w.cwiseMin(0.0);
  Box out;
  out.lo = wp * in.lo + wm * in.hi + b;
  out.hi = wp * in.hi + wm * in.lo + b;
  return out;
}

double tanh_ratio(double v) {
  if (v == 0.0) return 1.0;
  return std::tanh(v) / v;
}

}  // namespace

std::vector<Box> preactivation_boxes(const Network& net, const Box& in) {
  net.validate();
  if (in.dim() != net.input_dim())
    throw std::invalid_argument("box dimension does not match network input");
  if (!in.lo.allFinite() || !in.hi.allFinite())
    throw std::invalid_argument("input box must be finite");
  std::vector<Box> pre;
  Box x = in;
  for (int k = 0; k < net.hidden_layer_count(); ++k) {
    Box v = affine_box(x, net.layers[k].W, net.layers[k].b);
    pre.push_back(v);
    // All supported activations are monotone, so the image box is the box
    // of the endpoint images.
    x.lo = activate(net.activation, v.lo);
    x.hi = activate(net.activation, v.hi);
  }
  return pre;
}

Sector local_sector(Activation act, const Box& pre) {
  const int n = pre.dim();
  Sector sec;
  sec.lo.resize(n);
  sec.hi.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = pre.lo[i];
    const double b = pre.hi[i];
    if (!(a <= b)) throw std::invalid_argument("empty pre-activation interval");
    switch (act) {
      case Activation::Identity:
        sec.lo[i] = 1.0;
        sec.hi[i] = 1.0;
        break;
      case Activation::ReLU: {
        const bool pos = b > 0.0;
        const bool neg = a < 0.0;
        if (pos && neg) {
          sec.lo[i] = 0.0;
          sec.hi[i] = 1.0;
        } else if (pos) {
          sec.lo[i] = 1.0;
          sec.hi[i] = 1.0;
        } else if (neg) {
          sec.lo[i] = 0.0;
          sec.hi[i] = 0.0;
        } else {
          sec.lo[i] = 0.0;  // interval pinned at the kink, any sector is valid
          sec.hi[i] = 1.0;
        }
        break;
      }
      case Activation::Tanh: {
        // tanh(v)/v is even and strictly decreasing in |v|, so the extremes
        // sit at the points of the interval nearest and farthest from 0.
        const double near = (a <= 0.0 && 0.0 <= b) ? 0.0 : std::min(std::abs(a), std::abs(b));
        const double far = std::max(std::abs(a), std::abs(b));
        // 1e-9 outward relaxation guards round-off; the true ratio lies in
        // (0, 1], so the clamps keep the relaxed sector sound too.
        sec.lo[i] = std::max(0.0, tanh_ratio(far) - 1e-9);
        sec.hi[i] = std::min(1.0, tanh_ratio(near) + 1e-9);
        break;
      }
    }
  }
  return sec;
}

}  // namespace certnn

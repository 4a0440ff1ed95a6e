#include "certnn/loop_transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace certnn {

int TransformedForm::total_hidden() const {
  int total = 0;
  for (int n : hidden_sizes) total += n;
  return total;
}

namespace {

void require_block_zero(const Eigen::MatrixXd& m, const char* what, double tol) {
  double worst = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (worst > tol)
    throw std::invalid_argument(std::string(what) +
                                " must vanish; max entry " + std::to_string(worst));
}

}  // namespace

TransformedForm loop_transform(const Network& net, const Sector& sector) {
  IsolatedForm iso = isolate(net);
  sector.validate();
  if (sector.dim() != iso.total_hidden())
    throw std::invalid_argument("sector length does not match hidden neurons");

  const Eigen::VectorXd half_span = (sector.hi - sector.lo) / 2.0;
  const Eigen::VectorXd half_sum = (sector.hi + sector.lo) / 2.0;
  const int nv = iso.total_hidden();

  Eigen::MatrixXd c1 = iso.v_from_act * half_span.asDiagonal();
  Eigen::MatrixXd c2 = iso.v_from_act * half_sum.asDiagonal();
  Eigen::MatrixXd c3 = iso.out_from_act * half_span.asDiagonal();
  Eigen::MatrixXd c4 = iso.out_from_act * half_sum.asDiagonal();

  Eigen::MatrixXd coupling = Eigen::MatrixXd::Identity(nv, nv) - c2;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coupling, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0) || smax / smin > 1e12)
    throw std::invalid_argument(
        "inter-layer coupling is singular or ill-conditioned (cond " +
        std::to_string(smin > 0 ? smax / smin : std::nan("")) + ")");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(coupling);

  Eigen::MatrixXd inv_vx = lu.solve(iso.v_from_input);
  Eigen::MatrixXd inv_c1 = lu.solve(c1);
  Eigen::VectorXd inv_b0 = lu.solve(iso.hidden_bias);

  // The true product is strictly block-subdiagonal; scrub factorization dust
  // so the structural invariant holds exactly.
  int off = 0;
  for (std::size_t k = 0; k < iso.hidden_sizes.size(); ++k) {
    int nk = iso.hidden_sizes[k];
    inv_c1.block(off, off, nk, nv - off).setZero();
    off += nk;
  }

  TransformedForm tf;
  tf.v_from_input = inv_vx;
  tf.v_from_act = inv_c1;
  tf.out_from_input = iso.out_from_input + c4 * inv_vx;
  tf.out_from_act = c3 + c4 * inv_c1;
  tf.hidden_bias = inv_b0;
  tf.out_bias = c4 * inv_b0 + iso.out_bias;
  tf.sector = sector;
  tf.activation = net.activation;
  tf.input_dim = iso.input_dim;
  tf.hidden_sizes = iso.hidden_sizes;
  tf.output_dim = iso.output_dim;
  return tf;
}

Eigen::VectorXd normalized_activation(Activation act, const Sector& sector,
                                      const Eigen::VectorXd& v) {
  if (v.size() != sector.dim())
    throw std::invalid_argument("vector length does not match sector");
  Eigen::VectorXd w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double span = (sector.hi[i] - sector.lo[i]) / 2.0;
    double mid = (sector.hi[i] + sector.lo[i]) / 2.0;
    w[i] = span > 0 ? (activate(act, v[i]) - mid * v[i]) / span : 0.0;
  }
  return w;
}

Eigen::VectorXd eval_transformed(const TransformedForm& tf,
                                 const Eigen::VectorXd& x) {
  if (x.size() != tf.input_dim)
    throw std::invalid_argument("input length does not match transformed form");
  const int nv = tf.total_hidden();

  // The implicit hidden equation is solvable in one sweep only when later
  // blocks never feed earlier ones.
  int checked = 0;
  for (int k = 0; k < static_cast<int>(tf.hidden_sizes.size()); ++k) {
    int nk = tf.hidden_sizes[k];
    require_block_zero(tf.v_from_act.block(checked, checked, nk, nv - checked),
                       "upper hidden coupling", 0.0);
    checked += nk;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(nv);
  int offset = 0;
  for (int k = 0; k < static_cast<int>(tf.hidden_sizes.size()); ++k) {
    int nk = tf.hidden_sizes[k];
    Eigen::VectorXd v = tf.v_from_input.middleRows(offset, nk) * x +
                        tf.v_from_act.middleRows(offset, nk) * w +
                        tf.hidden_bias.segment(offset, nk);
    Sector slice;
    slice.lo = tf.sector.lo.segment(offset, nk);
    slice.hi = tf.sector.hi.segment(offset, nk);
    w.segment(offset, nk) = normalized_activation(tf.activation, slice, v);
    offset += nk;
  }
  return tf.out_from_input * x + tf.out_from_act * w + tf.out_bias;
}

const char* recovery_mode_name(RecoveryMode mode) {
  return mode == RecoveryMode::Strict ? "strict" : "residual";
}

RecoveryMode recovery_mode_from_name(const std::string& name) {
  if (name == "strict") return RecoveryMode::Strict;
  if (name == "residual") return RecoveryMode::Residual;
  throw std::invalid_argument("unknown recovery mode: " + name);
}

Sector learning_sector(RecoveryMode mode, int n) {
  return mode == RecoveryMode::Strict ? Sector::uniform(n, -1.0, 1.0)
                                      : Sector::uniform(n, 0.0, 1.0);
}

Network inverse_two_layer(const TransformedForm& tf, RecoveryMode mode) {
  if (tf.hidden_sizes.size() != 1)
    throw std::invalid_argument("two-layer recovery needs exactly one hidden layer");
  require_block_zero(tf.v_from_act, "hidden self-coupling", 1e-12);
  const int n1 = tf.hidden_sizes[0];

  Network net;
  net.activation = tf.activation;
  Layer hidden{tf.v_from_input, tf.hidden_bias};

  if (mode == RecoveryMode::Strict) {
    if (!tf.sector.symmetric(1e-12))
      throw std::invalid_argument("strict recovery needs a symmetric sector");
    require_block_zero(tf.out_from_input, "direct input-output term", 1e-12);
    for (int i = 0; i < n1; ++i)
      if (tf.sector.hi[i] <= 0)
        throw std::invalid_argument("strict recovery needs a nondegenerate sector");
    Layer out{tf.out_from_act * tf.sector.hi.cwiseInverse().asDiagonal(),
              tf.out_bias};
    net.layers = {hidden, out};
  } else {
    Eigen::VectorXd span = tf.sector.hi - tf.sector.lo;
    for (int i = 0; i < n1; ++i)
      if (span[i] <= 0)
        throw std::invalid_argument("residual recovery needs a nondegenerate sector");
    // ratio = (B+A)(B-A)^{-1}, the diagonal factor the bypass absorbs.
    Eigen::VectorXd ratio = (tf.sector.hi + tf.sector.lo).cwiseQuotient(span);
    Eigen::MatrixXd w1 = 2.0 * tf.out_from_act * span.cwiseInverse().asDiagonal();
    Eigen::MatrixXd scaled = tf.out_from_act * ratio.asDiagonal();
    Layer out{w1, tf.out_bias - scaled * tf.hidden_bias};
    net.layers = {hidden, out};
    net.skip = tf.out_from_input - scaled * tf.v_from_input;
  }
  net.validate();
  return net;
}

}  // namespace certnn

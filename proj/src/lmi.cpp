#include "certnn/lmi.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace certnn {

namespace {

std::string idx(const char* base, int i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

std::string idx2(const char* base, int i, int j) {
  return std::string(base) + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

// Negated input-set factor: lambda-coefficient matrix over a basis whose
// first nx coordinates are the input and whose last coordinate is the
// constant. A PSD pencil value spends this as the S-procedure budget.
Eigen::MatrixXd negated_input_factor(const Ellipsoid& in, int dim) {
  const int nx = in.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m.topLeftCorner(nx, nx) = in.shape.transpose() * in.shape;
  Eigen::VectorXd atb = in.shape.transpose() * in.center;
  m.block(0, dim - 1, nx, 1) = atb;
  m.block(dim - 1, 0, 1, nx) = atb.transpose();
  m(dim - 1, dim - 1) = in.center.squaredNorm() - 1.0;
  return m;
}

void check_pair_dims(const Network& net, const Ellipsoid& in, const Ellipsoid& out) {
  if (in.dim() != net.input_dim())
    throw std::invalid_argument("input set dimension does not match network");
  if (out.dim() != net.output_dim())
    throw std::invalid_argument("output set dimension does not match network");
}

}  // namespace

AffinePencil build_verification(const Network& net, const Ellipsoid& in,
                                const Ellipsoid& out, const Sector& sector) {
  net.validate();
  if (net.hidden_layer_count() != 1)
    throw std::invalid_argument("two-layer verification needs exactly one hidden layer");
  check_pair_dims(net, in, out);
  const int nx = net.input_dim();
  const int n1 = net.hidden_dim(0);
  const int ny = net.output_dim();
  if (sector.dim() != n1)
    throw std::invalid_argument("sector length does not match hidden neurons");
  sector.validate();

  const int d = nx + n1 + 1;
  AffinePencil pencil;
  int var_lambda = pencil.add_var("lambda", VarSign::NonNeg);
  std::vector<int> var_mu(n1);
  for (int i = 0; i < n1; ++i) var_mu[i] = pencil.add_var(idx("mu", i), VarSign::NonNeg);

  PencilBlock& blk = pencil.add_block("pair", d);
  blk.add_term(var_lambda, negated_input_factor(in, d));

  // Per-neuron sector constraint on (v_i, w_i), with v affine in the basis
  // and w a basis coordinate; rank-two negated contribution per multiplier.
  const Eigen::MatrixXd& w0 = net.layers[0].W;
  const Eigen::VectorXd& b0 = net.layers[0].b;
  for (int i = 0; i < n1; ++i) {
    Eigen::VectorXd rv = Eigen::VectorXd::Zero(d);
    rv.head(nx) = w0.row(i).transpose();
    rv[d - 1] = b0[i];
    Eigen::VectorXd rw = Eigen::VectorXd::Zero(d);
    rw[nx + i] = 1.0;
    const double a = sector.lo[i];
    const double b = sector.hi[i];
    Eigen::MatrixXd coeff = 2.0 * a * b * (rv * rv.transpose()) -
                            (a + b) * (rv * rw.transpose() + rw * rv.transpose()) +
                            2.0 * (rw * rw.transpose());
    blk.add_term(var_mu[i], coeff);
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nx + ny + 1, d);
  k.topLeftCorner(nx, nx).setIdentity();
  if (net.skip) k.block(nx, 0, ny, nx) = *net.skip;
  k.block(nx, nx, ny, n1) = net.layers[1].W;
  k.block(nx, d - 1, ny, 1) = net.layers[1].b;
  k(nx + ny, d - 1) = 1.0;
  Eigen::MatrixXd s = output_spec(out, nx);
  blk.add_constant(-(k.transpose() * s * k));

  pencil.validate();
  return pencil;
}

AffinePencil build_verification_multilayer(const Network& net,
                                           const Ellipsoid& in,
                                           const Ellipsoid& out,
                                           const std::vector<Sector>& sectors) {
  net.validate();
  if (net.skip)
    throw std::invalid_argument("stacked verification requires a pure feed-forward network");
  const int l = net.hidden_layer_count();
  if (l < 1) throw std::invalid_argument("stacked verification needs a hidden layer");
  check_pair_dims(net, in, out);
  if (static_cast<int>(sectors.size()) != l)
    throw std::invalid_argument("need one sector per hidden layer");

  const int nx = net.input_dim();
  const int ny = net.output_dim();
  const int nh = net.total_hidden();
  const int d = nx + nh + 1;  // basis [input; normalized activations; 1]

  AffinePencil pencil;
  int var_lambda = pencil.add_var("lambda", VarSign::NonNeg);
  PencilBlock& blk = pencil.add_block("pair", d);
  blk.add_term(var_lambda, negated_input_factor(in, d));

  // Pre-activations as affine functions of the basis, built layer by layer:
  // the previous layer's output is span * w + mid * v for its sector, which
  // needs no inverses and tolerates degenerate sector entries.
  Eigen::MatrixXd rows;   // current layer input as rows over the basis (no 1)
  Eigen::VectorXd shift;  // matching constant part
  rows = Eigen::MatrixXd::Zero(nx, d - 1);
  rows.leftCols(nx).setIdentity();
  shift = Eigen::VectorXd::Zero(nx);

  int offset = nx;
  for (int h = 0; h < l; ++h) {
    const int nk = net.hidden_dim(h);
    if (sectors[h].dim() != nk)
      throw std::invalid_argument("sector length does not match layer " + std::to_string(h));
    sectors[h].validate();
    Eigen::MatrixXd va = net.layers[h].W * rows;
    Eigen::VectorXd vc = net.layers[h].W * shift + net.layers[h].b;

    for (int i = 0; i < nk; ++i) {
      int mu = pencil.add_var(idx2("mu", h, i), VarSign::NonNeg);
      Eigen::VectorXd rv = Eigen::VectorXd::Zero(d);
      rv.head(d - 1) = va.row(i).transpose();
      rv[d - 1] = vc[i];
      Eigen::VectorXd rw = Eigen::VectorXd::Zero(d);
      rw[offset + i] = 1.0;
      // Normalized activation lies in [-1, 1], so the constraint is
      // mu * (v^2 - w^2) with nonnegative mu.
      blk.add_term(mu, 2.0 * (rw * rw.transpose() - rv * rv.transpose()));
    }

    Eigen::VectorXd span = (sectors[h].hi - sectors[h].lo) / 2.0;
    Eigen::VectorXd mid = (sectors[h].hi + sectors[h].lo) / 2.0;
    Eigen::MatrixXd next = mid.asDiagonal() * va;
    for (int i = 0; i < nk; ++i) next(i, offset + i) += span[i];
    rows = next;
    shift = mid.asDiagonal() * vc;
    offset += nk;
  }

  Eigen::MatrixXd g = net.layers.back().W * rows;
  Eigen::VectorXd gh = net.layers.back().W * shift + net.layers.back().b;

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nx + ny + 1, d);
  k.topLeftCorner(nx, nx).setIdentity();
  k.block(nx, 0, ny, d - 1) = g;
  k.block(nx, d - 1, ny, 1) = gh;
  k(nx + ny, d - 1) = 1.0;
  Eigen::MatrixXd s = output_spec(out, nx);
  blk.add_constant(-(k.transpose() * s * k));

  pencil.validate();
  return pencil;
}

Eigen::VectorXd LearningVariables::q(const Eigen::VectorXd& z) const {
  return z.segment(q_off, n1);
}

double LearningVariables::lambda(const Eigen::VectorXd& z, int pair) const {
  if (pair < 0 || pair >= pair_count)
    throw std::invalid_argument("pair index out of range");
  return z[lambda_off + pair];
}

namespace {

Eigen::MatrixXd unflatten(const Eigen::VectorXd& z, int off, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = z[off + i * cols + j];
  return m;
}

}  // namespace

Eigen::MatrixXd LearningVariables::v_from_input(const Eigen::VectorXd& z) const {
  return unflatten(z, vx_off, n1, nx);
}

Eigen::MatrixXd LearningVariables::out_scaled(const Eigen::VectorXd& z) const {
  return unflatten(z, l2_off, ny, n1);
}

Eigen::VectorXd LearningVariables::hidden_bias(const Eigen::VectorXd& z) const {
  return z.segment(b0_off, n1);
}

Eigen::VectorXd LearningVariables::out_bias(const Eigen::VectorXd& z) const {
  return z.segment(b1_off, ny);
}

Eigen::MatrixXd LearningVariables::out_from_input(const Eigen::VectorXd& z) const {
  if (mode == RecoveryMode::Strict) return Eigen::MatrixXd::Zero(ny, nx);
  return unflatten(z, yx_off, ny, nx);
}

TransformedForm LearningVariables::decode(const Eigen::VectorXd& z,
                                          Activation act) const {
  Eigen::VectorXd qd = q(z);
  if (qd.minCoeff() <= 0)
    throw std::invalid_argument("decoding needs strictly positive diagonal entries");
  TransformedForm tf;
  tf.v_from_input = v_from_input(z);
  tf.v_from_act = Eigen::MatrixXd::Zero(n1, n1);
  tf.out_from_input = out_from_input(z);
  tf.out_from_act = out_scaled(z) * qd.cwiseInverse().asDiagonal();
  tf.hidden_bias = hidden_bias(z);
  tf.out_bias = out_bias(z);
  tf.sector = learning_sector(mode, n1);
  tf.activation = act;
  tf.input_dim = nx;
  tf.hidden_sizes = {n1};
  tf.output_dim = ny;
  return tf;
}

LearningProblem build_learning(int nx, int n1, int ny,
                               const std::vector<PairSpec>& pairs,
                               RecoveryMode mode) {
  if (nx <= 0 || n1 <= 0 || ny <= 0)
    throw std::invalid_argument("layer sizes must be positive");
  if (pairs.empty()) throw std::invalid_argument("need at least one specification pair");
  for (const PairSpec& p : pairs) {
    p.in.validate();
    p.out.validate();
    if (p.in.dim() != nx) throw std::invalid_argument("input set dimension mismatch");
    if (p.out.dim() != ny) throw std::invalid_argument("output set dimension mismatch");
    Eigen::MatrixXd sym = 0.5 * (p.in.shape + p.in.shape.transpose());
    if ((p.in.shape - sym).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("input shape matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0)
      throw std::invalid_argument("input shape matrix must be positive definite");
  }

  LearningProblem lp;
  LearningVariables& lv = lp.vars;
  lv.mode = mode;
  lv.nx = nx;
  lv.n1 = n1;
  lv.ny = ny;
  lv.pair_count = static_cast<int>(pairs.size());

  AffinePencil& pencil = lp.pencil;
  lv.q_off = pencil.var_count();
  for (int i = 0; i < n1; ++i) pencil.add_var(idx("q", i), VarSign::Positive);
  lv.lambda_off = pencil.var_count();
  for (int j = 0; j < lv.pair_count; ++j) pencil.add_var(idx("lambda", j), VarSign::NonNeg);
  lv.vx_off = pencil.var_count();
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < nx; ++k) pencil.add_var(idx2("hidden_w", i, k), VarSign::Free);
  lv.l2_off = pencil.var_count();
  for (int r = 0; r < ny; ++r)
    for (int i = 0; i < n1; ++i) pencil.add_var(idx2("out_scaled", r, i), VarSign::Free);
  lv.b0_off = pencil.var_count();
  for (int i = 0; i < n1; ++i) pencil.add_var(idx("hidden_b", i), VarSign::Free);
  lv.b1_off = pencil.var_count();
  for (int r = 0; r < ny; ++r) pencil.add_var(idx("out_b", r), VarSign::Free);
  if (mode == RecoveryMode::Residual) {
    lv.yx_off = pencil.var_count();
    for (int r = 0; r < ny; ++r)
      for (int k = 0; k < nx; ++k) pencil.add_var(idx2("direct", r, k), VarSign::Free);
  }
  lv.count = pencil.var_count();

  // Block rows: input, hidden copy, constant, Schur hidden copy, Schur
  // output copy.
  const int off_x = 0;
  const int off_eta = nx;
  const int off_one = nx + n1;
  const int off_zeta = nx + n1 + 1;
  const int off_rho = nx + 2 * n1 + 1;
  const int d = nx + 2 * n1 + 1 + ny;

  for (int j = 0; j < lv.pair_count; ++j) {
    const Ellipsoid& in = pairs[j].in;
    const Ellipsoid& out = pairs[j].out;
    const int var_lambda = lv.lambda_off + j;
    PencilBlock& blk = pencil.add_block(idx("pair", j), d);

    Eigen::MatrixXd ata = in.shape.transpose() * in.shape;
    Eigen::VectorXd atb = in.shape.transpose() * in.center;
    for (int i = 0; i < nx; ++i)
      for (int k = i; k < nx; ++k)
        blk.add_term_entry(var_lambda, off_x + i, off_x + k, ata(i, k));
    for (int i = 0; i < nx; ++i)
      blk.add_term_entry(var_lambda, off_x + i, off_one, atb[i]);
    blk.add_term_entry(var_lambda, off_one, off_one, in.center.squaredNorm() - 1.0);
    blk.add_constant_entry(off_one, off_one, 1.0);

    for (int i = 0; i < n1; ++i) {
      blk.add_term_entry(lv.q_off + i, off_eta + i, off_eta + i, 1.0);
      blk.add_term_entry(lv.q_off + i, off_zeta + i, off_zeta + i, 1.0);
    }
    for (int i = 0; i < n1; ++i)
      for (int k = 0; k < nx; ++k)
        blk.add_term_entry(lv.vx_off + i * nx + k, off_x + k, off_zeta + i, 1.0);
    for (int i = 0; i < n1; ++i)
      blk.add_term_entry(lv.b0_off + i, off_one, off_zeta + i, 1.0);

    const Eigen::MatrixXd& c = out.shape;
    const Eigen::VectorXd& dd = out.center;
    for (int s = 0; s < ny; ++s)
      for (int i = 0; i < n1; ++i)
        for (int r = 0; r < ny; ++r)
          if (c(r, s) != 0.0)
            blk.add_term_entry(lv.l2_off + s * n1 + i, off_eta + i, off_rho + r, c(r, s));
    for (int s = 0; s < ny; ++s)
      for (int r = 0; r < ny; ++r)
        if (c(r, s) != 0.0)
          blk.add_term_entry(lv.b1_off + s, off_one, off_rho + r, c(r, s));
    for (int r = 0; r < ny; ++r)
      blk.add_constant_entry(off_one, off_rho + r, dd[r]);
    if (mode == RecoveryMode::Residual) {
      for (int s = 0; s < ny; ++s)
        for (int k = 0; k < nx; ++k)
          for (int r = 0; r < ny; ++r)
            if (c(r, s) != 0.0)
              blk.add_term_entry(lv.yx_off + s * nx + k, off_x + k, off_rho + r, c(r, s));
    }
    for (int r = 0; r < ny; ++r)
      blk.add_constant_entry(off_rho + r, off_rho + r, 1.0);
  }

  pencil.validate();
  return lp;
}

double schur_check(const LearningVariables& vars, const Eigen::VectorXd& z,
                   const PairSpec& pair, int pair_index) {
  Eigen::VectorXd qd = vars.q(z);
  if (qd.minCoeff() <= 0)
    throw std::invalid_argument("schur check needs strictly positive diagonal entries");
  const int nx = vars.nx;
  const int n1 = vars.n1;
  const int ny = vars.ny;
  const int d = nx + n1 + 1;

  const double lam = vars.lambda(z, pair_index);
  if (lam < 0) throw std::invalid_argument("input multiplier must be nonnegative");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(d, d);

  Eigen::MatrixXd p = input_qc(pair.in, lam);
  total.topLeftCorner(nx, nx) += p.topLeftCorner(nx, nx);
  total.block(0, d - 1, nx, 1) += p.block(0, nx, nx, 1);
  total.block(d - 1, 0, 1, nx) += p.block(nx, 0, 1, nx);
  total(d - 1, d - 1) += p(nx, nx);

  // Sector factor with the multiplier diagonal recovered as q^{-1}.
  Eigen::VectorXd m = qd.cwiseInverse();
  Eigen::MatrixXd nvx = vars.v_from_input(z);
  Eigen::VectorXd hb = vars.hidden_bias(z);
  for (int i = 0; i < n1; ++i) {
    Eigen::VectorXd rv = Eigen::VectorXd::Zero(d);
    rv.head(nx) = nvx.row(i).transpose();
    rv[d - 1] = hb[i];
    Eigen::VectorXd rw = Eigen::VectorXd::Zero(d);
    rw[nx + i] = 1.0;
    total += m[i] * (rv * rv.transpose() - rw * rw.transpose());
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nx + ny + 1, d);
  k.topLeftCorner(nx, nx).setIdentity();
  k.block(nx, 0, ny, nx) = vars.out_from_input(z);
  k.block(nx, nx, ny, n1) = vars.out_scaled(z) * qd.cwiseInverse().asDiagonal();
  k.block(nx, d - 1, ny, 1) = vars.out_bias(z);
  k(nx + ny, d - 1) = 1.0;
  total += k.transpose() * output_spec(pair.out, nx) * k;

  return -min_eig(-total).value;
}

}  // namespace certnn

#include "certnn/pencil.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace certnn {

PencilBlock::PencilBlock(std::string block_name, int dim)
    : name(std::move(block_name)) {
  if (dim <= 0) throw std::invalid_argument("pencil block dimension must be positive");
  constant = Eigen::MatrixXd::Zero(dim, dim);
}

void PencilBlock::add_constant_entry(int i, int j, double v) {
  constant(i, j) += v;
  if (i != j) constant(j, i) += v;
}

int PencilBlock::term_index(int var) {
  if (var < 0) throw std::invalid_argument("negative variable index");
  // Terms stay sorted by variable so evaluation order is reproducible even
  // after a round trip through an external format.
  auto it = std::lower_bound(
      terms.begin(), terms.end(), var,
      [](const Term& t, int v) { return t.var < v; });
  if (it == terms.end() || it->var != var)
    it = terms.insert(it, Term{var, Eigen::MatrixXd::Zero(dim(), dim())});
  return static_cast<int>(it - terms.begin());
}

void PencilBlock::add_term_entry(int var, int i, int j, double v) {
  Eigen::MatrixXd& coeff = terms[term_index(var)].coeff;
  coeff(i, j) += v;
  if (i != j) coeff(j, i) += v;
}

void PencilBlock::add_constant(const Eigen::MatrixXd& m) {
  if (m.rows() != dim() || m.cols() != dim())
    throw std::invalid_argument("constant contribution has wrong dimension");
  constant += 0.5 * (m + m.transpose());
}

void PencilBlock::add_term(int var, const Eigen::MatrixXd& m) {
  if (m.rows() != dim() || m.cols() != dim())
    throw std::invalid_argument("term contribution has wrong dimension");
  terms[term_index(var)].coeff += 0.5 * (m + m.transpose());
}

Eigen::MatrixXd PencilBlock::evaluate(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd f = constant;
  for (const Term& t : terms) {
    if (t.var >= z.size())
      throw std::invalid_argument("evaluation point is shorter than the variable registry");
    f += z[t.var] * t.coeff;
  }
  return f;
}

int AffinePencil::add_var(std::string name, VarSign sign) {
  vars.push_back(VarInfo{std::move(name), sign});
  return static_cast<int>(vars.size()) - 1;
}

PencilBlock& AffinePencil::add_block(std::string name, int dim) {
  blocks.emplace_back(std::move(name), dim);
  return blocks.back();
}

double AffinePencil::min_eigenvalue(const Eigen::VectorXd& z) const {
  if (blocks.empty()) throw std::invalid_argument("pencil has no blocks");
  if (z.size() != var_count())
    throw std::invalid_argument("evaluation point length does not match the variable registry");
  double worst = std::numeric_limits<double>::infinity();
  for (const PencilBlock& blk : blocks)
    worst = std::min(worst, min_eig(blk.evaluate(z)).value);
  return worst;
}

void AffinePencil::validate() const {
  for (const PencilBlock& blk : blocks) {
    if (blk.constant.rows() != blk.constant.cols())
      throw std::invalid_argument("pencil block constant is not square");
    int prev = -1;
    for (const PencilBlock::Term& t : blk.terms) {
      if (t.var < 0 || t.var >= var_count())
        throw std::invalid_argument("pencil term references unknown variable");
      if (t.var <= prev)
        throw std::invalid_argument("pencil terms out of order");
      prev = t.var;
      if (t.coeff.rows() != blk.dim() || t.coeff.cols() != blk.dim())
        throw std::invalid_argument("pencil term coefficient has wrong dimension");
    }
  }
}

EigenPair min_eig(const Eigen::MatrixXd& sym) {
  if (sym.rows() != sym.cols())
    throw std::invalid_argument("eigensolve needs a square matrix");
  double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  if ((sym - sym.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("eigensolve needs a symmetric matrix");
  Eigen::MatrixXd m = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolve failed to converge");
  EigenPair out;
  out.value = es.eigenvalues()[0];
  out.vector = es.eigenvectors().col(0);
  return out;
}

}  // namespace certnn

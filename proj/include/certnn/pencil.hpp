#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace certnn {

/// Sign restriction on a scalar decision variable.
enum class VarSign { Free, NonNeg, Positive };

struct VarInfo {
  std::string name;
  VarSign sign = VarSign::Free;
};

/// One symmetric block of an affine matrix pencil:
///   F(z) = constant + sum_k z[terms[k].var] * terms[k].coeff.
/// Coefficients are kept dense and are symmetrized on insertion, so F(z) is
/// symmetric for every z by construction.
struct PencilBlock {
  std::string name;
  Eigen::MatrixXd constant;

  struct Term {
    int var;
    Eigen::MatrixXd coeff;
  };
  std::vector<Term> terms;

  explicit PencilBlock(std::string block_name, int dim);
  int dim() const { return static_cast<int>(constant.rows()); }

  /// Add v to constant(i, j) and, when i != j, to constant(j, i).
  void add_constant_entry(int i, int j, double v);
  /// Add v to the (i, j) and (j, i) entries of the coefficient of variable
  /// `var`, creating the term if the variable has no coefficient here yet.
  void add_term_entry(int var, int i, int j, double v);
  /// Add a full symmetric matrix contribution.
  void add_constant(const Eigen::MatrixXd& m);
  void add_term(int var, const Eigen::MatrixXd& m);

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& z) const;

 private:
  int term_index(int var);
};

/// Affine symmetric matrix pencil split into independent blocks. Feasibility
/// means: find z (respecting the variable signs) making every block positive
/// semidefinite with margin at least the target.
struct AffinePencil {
  std::vector<VarInfo> vars;
  std::vector<PencilBlock> blocks;

  int add_var(std::string name, VarSign sign);
  PencilBlock& add_block(std::string name, int dim);
  int var_count() const { return static_cast<int>(vars.size()); }

  /// Smallest eigenvalue over all blocks at z.
  double min_eigenvalue(const Eigen::VectorXd& z) const;
  void validate() const;
};

/// Smallest eigenvalue and a corresponding unit eigenvector of a symmetric
/// matrix. The matrix is symmetrized before the decomposition to shed
/// round-off asymmetry.
struct EigenPair {
  double value;
  Eigen::VectorXd vector;
};
EigenPair min_eig(const Eigen::MatrixXd& sym);

}  // namespace certnn

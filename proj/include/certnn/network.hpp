#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace certnn {

enum class Activation { Tanh, ReLU, Identity };

const char* activation_name(Activation act);
Activation activation_from_name(const std::string& name);

double activate(Activation act, double v);
Eigen::VectorXd activate(Activation act, const Eigen::VectorXd& v);

/// One affine stage: maps a vector of size W.cols() to one of size W.rows().
struct Layer {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
};

/// Feed-forward network. `layers` holds l+1 affine stages; the activation is
/// applied after every stage except the last, which stays affine. An optional
/// `skip` matrix adds a direct input-to-output bypass term, produced when
/// two-layer weights are recovered under a nonsymmetric sector (see
/// loop_transform.hpp).
struct Network {
  std::vector<Layer> layers;
  Activation activation = Activation::Tanh;
  std::optional<Eigen::MatrixXd> skip;

  int input_dim() const { return static_cast<int>(layers.front().W.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().W.rows()); }
  /// Number of hidden (activated) layers.
  int hidden_layer_count() const { return static_cast<int>(layers.size()) - 1; }
  /// Size of hidden layer k, k in [0, hidden_layer_count()).
  int hidden_dim(int k) const { return static_cast<int>(layers[k].W.rows()); }
  /// Total number of hidden neurons.
  int total_hidden() const;

  /// Throws std::invalid_argument if layer dimensions do not chain or the
  /// skip matrix has the wrong shape.
  void validate() const;
};

/// The network rewritten as one implicit linear system
///   [v; out] = N [x; x_act] + [hidden_bias; out_bias],  x_act = phi(v),
/// where v stacks all pre-activations and x_act all post-activations. The
/// four fields below are the blocks of N.
struct IsolatedForm {
  Eigen::MatrixXd v_from_input;    // couples v to the network input
  Eigen::MatrixXd v_from_act;      // strictly block-subdiagonal; zero when l = 1
  Eigen::MatrixXd out_from_input;  // zero for a pure feed-forward net
  Eigen::MatrixXd out_from_act;
  Eigen::VectorXd hidden_bias;
  Eigen::VectorXd out_bias;

  int input_dim = 0;
  std::vector<int> hidden_sizes;
  int output_dim = 0;

  int total_hidden() const;
};

/// Stacked-state block matrices over x_st = [x^0; x^1; ...; x^l]:
/// `weights` maps x_st to the stacked pre-activations, `hidden_selector`
/// picks out [x^1; ...; x^l], and `bias` stacks the hidden-layer biases.
struct StackedForm {
  Eigen::MatrixXd weights;
  Eigen::MatrixXd hidden_selector;
  Eigen::VectorXd bias;
  std::vector<int> sizes;  // n_0 .. n_l (input plus all hidden widths)

  int stacked_dim() const;
  /// Selector E_k with E_k * x_st = x^k.
  Eigen::MatrixXd entry_selector(int k) const;
};

/// Evaluate the network. Throws on input dimension mismatch.
Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& x);

/// Build the isolated implicit form. Requires a pure feed-forward net
/// (no skip term).
IsolatedForm isolate(const Network& net);

/// Build the stacked-state block matrices. Requires a pure feed-forward net.
StackedForm stacked_form(const Network& net);

}  // namespace certnn

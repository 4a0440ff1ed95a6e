#include "certnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace certnn {

const char* activation_name(Activation act) {
  switch (act) {
    case Activation::Tanh:
      return "tanh";
    case Activation::ReLU:
      return "relu";
    case Activation::Identity:
      return "identity";
  }
  throw std::invalid_argument("unknown activation enum value");
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::ReLU;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation name: " + name);
}

double activate(Activation act, double v) {
  switch (act) {
    case Activation::Tanh:
      return std::tanh(v);
    case Activation::ReLU:
      return v > 0 ? v : 0.0;
    case Activation::Identity:
      return v;
  }
  throw std::invalid_argument("unknown activation enum value");
}

Eigen::VectorXd activate(Activation act, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = activate(act, v[i]);
  return out;
}

int Network::total_hidden() const {
  int total = 0;
  for (int k = 0; k < hidden_layer_count(); ++k) total += hidden_dim(k);
  return total;
}

void Network::validate() const {
  if (layers.empty()) throw std::invalid_argument("network has no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& lay = layers[k];
    if (lay.W.rows() != lay.b.size())
      throw std::invalid_argument("layer bias length does not match weight rows");
    if (k > 0 && layers[k - 1].W.rows() != lay.W.cols())
      throw std::invalid_argument("layer dimensions do not chain");
  }
  if (skip &&
      (skip->rows() != output_dim() || skip->cols() != input_dim()))
    throw std::invalid_argument("skip matrix is not output_dim x input_dim");
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("input length does not match network input");
  Eigen::VectorXd h = x;
  for (int k = 0; k < net.hidden_layer_count(); ++k)
    h = activate(net.activation, net.layers[k].W * h + net.layers[k].b);
  Eigen::VectorXd y = net.layers.back().W * h + net.layers.back().b;
  if (net.skip) y += *net.skip * x;
  return y;
}

int IsolatedForm::total_hidden() const {
  int total = 0;
  for (int n : hidden_sizes) total += n;
  return total;
}

IsolatedForm isolate(const Network& net) {
  net.validate();
  if (net.skip)
    throw std::invalid_argument("isolation requires a pure feed-forward network");
  if (net.hidden_layer_count() < 1)
    throw std::invalid_argument("isolation requires at least one hidden layer");

  IsolatedForm iso;
  iso.input_dim = net.input_dim();
  iso.output_dim = net.output_dim();
  for (int k = 0; k < net.hidden_layer_count(); ++k)
    iso.hidden_sizes.push_back(net.hidden_dim(k));
  const int nv = iso.total_hidden();

  iso.v_from_input = Eigen::MatrixXd::Zero(nv, iso.input_dim);
  iso.v_from_act = Eigen::MatrixXd::Zero(nv, nv);
  iso.out_from_input = Eigen::MatrixXd::Zero(iso.output_dim, iso.input_dim);
  iso.out_from_act = Eigen::MatrixXd::Zero(iso.output_dim, nv);
  iso.hidden_bias.resize(nv);
  iso.out_bias = net.layers.back().b;

  // Pre-activation block k is W^k applied to the input (k = 0) or to
  // activation block k-1, so the act coupling is strictly block-subdiagonal.
  int row = 0;
  int prev_col = 0;
  for (int k = 0; k < net.hidden_layer_count(); ++k) {
    const Layer& lay = net.layers[k];
    const int nk = iso.hidden_sizes[k];
    if (k == 0) {
      iso.v_from_input.topRows(nk) = lay.W;
    } else {
      iso.v_from_act.block(row, prev_col, nk, iso.hidden_sizes[k - 1]) = lay.W;
      prev_col += iso.hidden_sizes[k - 1];
    }
    iso.hidden_bias.segment(row, nk) = lay.b;
    row += nk;
  }
  iso.out_from_act.rightCols(iso.hidden_sizes.back()) = net.layers.back().W;
  return iso;
}

int StackedForm::stacked_dim() const {
  int total = 0;
  for (int n : sizes) total += n;
  return total;
}

Eigen::MatrixXd StackedForm::entry_selector(int k) const {
  if (k < 0 || k >= static_cast<int>(sizes.size()))
    throw std::invalid_argument("entry selector index out of range");
  int offset = 0;
  for (int j = 0; j < k; ++j) offset += sizes[j];
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(sizes[k], stacked_dim());
  e.block(0, offset, sizes[k], sizes[k]).setIdentity();
  return e;
}

StackedForm stacked_form(const Network& net) {
  net.validate();
  if (net.skip)
    throw std::invalid_argument("stacked form requires a pure feed-forward network");
  if (net.hidden_layer_count() < 1)
    throw std::invalid_argument("stacked form requires at least one hidden layer");

  StackedForm st;
  st.sizes.push_back(net.input_dim());
  for (int k = 0; k < net.hidden_layer_count(); ++k)
    st.sizes.push_back(net.hidden_dim(k));

  const int total = st.stacked_dim();
  int hidden_total = total - net.input_dim();
  st.weights = Eigen::MatrixXd::Zero(hidden_total, total);
  st.hidden_selector = Eigen::MatrixXd::Zero(hidden_total, total);
  st.hidden_selector.rightCols(hidden_total).setIdentity();
  st.bias.resize(hidden_total);

  int row = 0;
  int col = 0;
  for (int k = 0; k < net.hidden_layer_count(); ++k) {
    const Layer& lay = net.layers[k];
    st.weights.block(row, col, lay.W.rows(), lay.W.cols()) = lay.W;
    st.bias.segment(row, lay.b.size()) = lay.b;
    row += static_cast<int>(lay.W.rows());
    col += static_cast<int>(lay.W.cols());
  }
  return st;
}

}  // namespace certnn

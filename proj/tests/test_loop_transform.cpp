#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"

#include "certnn/loop_transform.hpp"

using namespace certnn;
using testutil::random_network;

TEST_CASE("recovery mode names round-trip") {
  CHECK(recovery_mode_from_name("strict") == RecoveryMode::Strict);
  CHECK(recovery_mode_from_name("residual") == RecoveryMode::Residual);
  CHECK_THROWS_AS(recovery_mode_from_name("loose"), std::invalid_argument);
  CHECK(learning_sector(RecoveryMode::Strict, 3).symmetric());
  CHECK(learning_sector(RecoveryMode::Residual, 3).lo[0] == 0.0);
}

TEST_CASE("symmetric sector leaves a one-hidden-layer network untouched") {
  Rng rng(211);
  Network net = random_network(rng, {2, 10, 2}, Activation::Tanh);
  TransformedForm tf = loop_transform(net, Sector::uniform(10, -1.0, 1.0));
  CHECK((tf.v_from_input - net.layers[0].W).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(tf.v_from_act.cwiseAbs().maxCoeff() == 0.0);
  CHECK(tf.out_from_input.cwiseAbs().maxCoeff() == 0.0);
  CHECK((tf.out_from_act - net.layers[1].W).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((tf.hidden_bias - net.layers[0].b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((tf.out_bias - net.layers[1].b).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("nonnegative unit sector halves the output weights and adds a bypass") {
  Rng rng(223);
  Network net = random_network(rng, {3, 6, 2}, Activation::Tanh);
  TransformedForm tf = loop_transform(net, Sector::uniform(6, 0.0, 1.0));
  const Eigen::MatrixXd& w0 = net.layers[0].W;
  const Eigen::MatrixXd& w1 = net.layers[1].W;
  CHECK((tf.v_from_input - w0).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((tf.out_from_act - 0.5 * w1).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((tf.out_from_input - 0.5 * (w1 * w0)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((tf.out_bias - (0.5 * (w1 * net.layers[0].b) + net.layers[1].b))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("strict recovery round-trips random networks under a symmetric sector") {
  Rng rng(227);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = random_network(rng, {2, 4 + static_cast<int>(rng.raw() % 5), 2},
                                 Activation::Tanh);
    TransformedForm tf =
        loop_transform(net, Sector::uniform(net.hidden_dim(0), -1.0, 1.0));
    Network back = inverse_two_layer(tf, RecoveryMode::Strict);
    CHECK_FALSE(back.skip.has_value());
    for (int k = 0; k < 2; ++k) {
      CHECK((back.layers[k].W - net.layers[k].W).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((back.layers[k].b - net.layers[k].b).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("residual recovery round-trips random networks under the unit sector") {
  Rng rng(229);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = random_network(rng, {3, 5, 2}, Activation::Tanh);
    TransformedForm tf = loop_transform(net, Sector::uniform(5, 0.0, 1.0));
    Network back = inverse_two_layer(tf, RecoveryMode::Residual);
    REQUIRE(back.skip.has_value());
    CHECK(back.skip->cwiseAbs().maxCoeff() <= 1e-10);  // pure net needs no bypass
    for (int k = 0; k < 2; ++k) {
      CHECK((back.layers[k].W - net.layers[k].W).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((back.layers[k].b - net.layers[k].b).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("transformed evaluation agrees with forward across sectors and depths") {
  Rng rng(233);
  struct Shape {
    std::vector<int> sizes;
  };
  for (const Shape& s : {Shape{{2, 10, 2}}, Shape{{3, 4, 5, 2}}, Shape{{2, 3, 4, 3, 2}}}) {
    Network net = random_network(rng, s.sizes, Activation::Tanh, 0.8);
    const int nv = isolate(net).total_hidden();
    Sector sym = Sector::uniform(nv, -1.0, 1.0);
    Sector unit = Sector::uniform(nv, 0.0, 1.0);
    Sector skew;
    skew.lo.resize(nv);
    skew.hi.resize(nv);
    for (int i = 0; i < nv; ++i) {
      skew.lo[i] = rng.uniform(0.0, 0.2);
      skew.hi[i] = rng.uniform(0.8, 1.0);
    }
    for (const Sector& sec : {sym, unit, skew}) {
      TransformedForm tf = loop_transform(net, sec);
      for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x = rng.gaussian_vector(s.sizes.front()) * 2.0;
        CHECK((eval_transformed(tf, x) - forward(net, x)).cwiseAbs().maxCoeff() <=
              1e-10);
      }
    }
  }
}

TEST_CASE("normalized activation lands in the symmetric unit sector") {
  Rng rng(239);
  Sector unit = Sector::uniform(1, 0.0, 1.0);
  for (Activation act : {Activation::Tanh, Activation::ReLU}) {
    for (int i = 0; i < 10000; ++i) {
      Eigen::VectorXd v(1);
      v[0] = rng.uniform(-6.0, 6.0);
      Eigen::VectorXd w = normalized_activation(act, unit, v);
      CHECK(std::abs(w[0]) <= std::abs(v[0]) + 1e-12);
    }
  }
}

TEST_CASE("degenerate sector entries map to zero and keep identity nets exact") {
  Sector line = Sector::uniform(3, 1.0, 1.0);
  Eigen::VectorXd v(3);
  v << -2.0, 0.0, 5.0;
  CHECK(normalized_activation(Activation::Identity, line, v).cwiseAbs().maxCoeff() ==
        0.0);

  Rng rng(241);
  Network net = random_network(rng, {2, 4, 2}, Activation::Identity);
  TransformedForm tf = loop_transform(net, Sector::uniform(4, 1.0, 1.0));
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd x = rng.gaussian_vector(2);
    CHECK((eval_transformed(tf, x) - forward(net, x)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("recovery rejects unsupported forms") {
  Rng rng(251);
  Network deep = random_network(rng, {2, 3, 3, 2}, Activation::Tanh);
  TransformedForm tf_deep = loop_transform(deep, Sector::uniform(6, 0.0, 1.0));
  CHECK_THROWS_AS(inverse_two_layer(tf_deep, RecoveryMode::Residual),
                  std::invalid_argument);

  Network net = random_network(rng, {2, 5, 2}, Activation::Tanh);
  TransformedForm tf_unit = loop_transform(net, Sector::uniform(5, 0.0, 1.0));
  CHECK_THROWS_AS(inverse_two_layer(tf_unit, RecoveryMode::Strict),
                  std::invalid_argument);  // sector is not symmetric

  TransformedForm tf_line = loop_transform(net, Sector::uniform(5, 0.0, 0.0));
  CHECK_THROWS_AS(inverse_two_layer(tf_line, RecoveryMode::Residual),
                  std::invalid_argument);  // zero span cannot be inverted

  CHECK_THROWS_AS(loop_transform(net, Sector::uniform(4, -1.0, 1.0)),
                  std::invalid_argument);  // sector length mismatch
}

TEST_CASE("transformed evaluation rejects mismatched inputs") {
  Rng rng(257);
  Network net = random_network(rng, {2, 5, 2}, Activation::Tanh);
  TransformedForm tf = loop_transform(net, Sector::uniform(5, -1.0, 1.0));
  CHECK_THROWS_AS(eval_transformed(tf, Eigen::Vector3d::Zero()),
                  std::invalid_argument);
}

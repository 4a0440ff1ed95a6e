// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each criterion re-derives its own evidence; nothing is shared with the
// unit suite except the library and the test helpers.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "helpers.hpp"

#include "certnn/fixtures.hpp"
#include "certnn/lmi.hpp"
#include "certnn/loop_transform.hpp"
#include "certnn/pipeline.hpp"
#include "certnn/sdpa.hpp"
#include "certnn/sets.hpp"
#include "certnn/solver.hpp"

using namespace certnn;

namespace {

int g_failures = 0;
std::vector<double> g_schur_residuals;  // from every feasible synthesis run

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void run(int idx, const std::string& label,
         const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& err) {
    detail = std::string("exception: ") + err.what();
  }
  if (!ok) ++g_failures;
  std::printf("criterion %d %s %s%s%s%s\n", idx, ok ? "PASS" : "FAIL",
              label.c_str(), detail.empty() ? "" : " (", detail.c_str(),
              detail.empty() ? "" : ")");
  std::fflush(stdout);
}

bool synthesis_benchmark(const ProblemSpec& spec, std::string& detail) {
  RunReport rep = learn(spec);
  long violations = 0;
  for (const PairReport& pr : rep.pairs) {
    if (pr.violations > 0) violations += pr.violations;
    if (rep.verdict == Verdict::Feasible)
      g_schur_residuals.push_back(pr.schur_residual);
  }
  detail = std::string(verdict_name(rep.verdict)) +
           ", margin=" + num(rep.certificate.margin) +
           ", violations=" + std::to_string(violations) +
           ", wall=" + num(rep.wall_seconds) + "s";
  return rep.verdict == Verdict::Feasible &&
         rep.certificate.margin >= 1e-6 && rep.network.has_value() &&
         violations == 0 && rep.wall_seconds < 60.0;
}

ProblemSpec random_problem(std::uint64_t seed) {
  Rng rng(Rng::derive(seed, 7));
  ProblemSpec spec;
  spec.nx = 2 + static_cast<int>(rng.raw() % 2);
  spec.ny = 2 + static_cast<int>(rng.raw() % 2);
  spec.n1 = 4 + static_cast<int>(rng.raw() % 9);
  spec.activation = Activation::Tanh;
  spec.mode = rng.raw() % 2 ? RecoveryMode::Strict : RecoveryMode::Residual;
  int npairs = 1 + static_cast<int>(rng.raw() % 3);
  for (int j = 0; j < npairs; ++j)
    spec.pairs.push_back(
        {testutil::random_ellipsoid(rng, spec.nx, 3.0, 0.5, 1.5),
         testutil::random_ellipsoid(rng, spec.ny, 0.4, 1.3, 2.0)});
  spec.mc_samples = 100000;
  spec.seed = seed;
  spec.solver.seed = seed;
  return spec;
}

double weight_gap(const Network& a, const Network& b) {
  double worst = 0;
  for (std::size_t k = 0; k < a.layers.size(); ++k) {
    worst = std::max(worst,
                     (a.layers[k].W - b.layers[k].W).cwiseAbs().maxCoeff());
    worst = std::max(worst,
                     (a.layers[k].b - b.layers[k].b).cwiseAbs().maxCoeff());
  }
  return worst;
}

double quad_form(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  return v.dot(m * v);
}

AffinePencil balance_pencil() {
  AffinePencil p;
  int z = p.add_var("z", VarSign::Free);
  p.add_block("grow", 1).add_term_entry(z, 0, 0, 1.0);
  PencilBlock& shrink = p.add_block("shrink", 1);
  shrink.add_constant_entry(0, 0, 1.0);
  shrink.add_term_entry(z, 0, 0, -1.0);
  return p;
}

AffinePencil stuck_pencil() {
  AffinePencil p;
  int z = p.add_var("z", VarSign::Free);
  PencilBlock& blk = p.add_block("stuck", 2);
  blk.add_term_entry(z, 0, 0, 1.0);
  blk.add_constant_entry(1, 1, -1.0);
  return p;
}

}  // namespace

int main() {
  run(1, "synthesis on the twin-disks benchmark", [](std::string& detail) {
    return synthesis_benchmark(twin_disks_problem(), detail);
  });

  run(2, "synthesis on the three-region benchmark", [](std::string& detail) {
    return synthesis_benchmark(three_region_problem(), detail);
  });

  run(3, "randomized synthesis stays sound", [](std::string& detail) {
    int feasible = 0;
    long violations = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RunReport rep = learn(random_problem(seed));
      if (rep.verdict != Verdict::Feasible) continue;
      ++feasible;
      for (const PairReport& pr : rep.pairs) {
        if (pr.violations > 0) violations += pr.violations;
        g_schur_residuals.push_back(pr.schur_residual);
      }
    }
    detail = std::to_string(feasible) + "/20 feasible, " +
             std::to_string(violations) + " violations at 100000 samples/pair";
    return feasible == 20 && violations == 0;
  });

  run(4, "reconstruction residual small on every feasible solution",
      [](std::string& detail) {
        double worst = -std::numeric_limits<double>::infinity();
        for (double r : g_schur_residuals) worst = std::max(worst, r);
        detail = std::to_string(g_schur_residuals.size()) +
                 " solutions, worst residual " + num(worst);
        return !g_schur_residuals.empty() && worst <= 1e-8;
      });

  run(5, "loop transform inverts and preserves the map", [](std::string& detail) {
    Rng rng(5001);
    double worst_gap = 0, worst_skip = 0, worst_fwd = 0;
    for (int t = 0; t < 100; ++t) {
      int nx = 2 + t % 3, n1 = 3 + t % 6, ny = 2 + t % 2;
      Network net = testutil::random_network(rng, {nx, n1, ny}, Activation::Tanh);

      TransformedForm sym = loop_transform(net, Sector::uniform(n1, -1.0, 1.0));
      Network strict = inverse_two_layer(sym, RecoveryMode::Strict);
      worst_gap = std::max(worst_gap, weight_gap(net, strict));

      TransformedForm shifted = loop_transform(net, Sector::uniform(n1, 0.0, 1.0));
      Network residual = inverse_two_layer(shifted, RecoveryMode::Residual);
      worst_gap = std::max(worst_gap, weight_gap(net, residual));
      if (residual.skip)
        worst_skip = std::max(worst_skip, residual.skip->cwiseAbs().maxCoeff());

      for (int s = 0; s < 100; ++s) {
        Eigen::VectorXd x = 2.0 * rng.gaussian_vector(nx);
        Eigen::VectorXd y = forward(net, x);
        worst_fwd = std::max(worst_fwd,
                             (y - eval_transformed(sym, x)).cwiseAbs().maxCoeff());
        worst_fwd = std::max(
            worst_fwd, (y - eval_transformed(shifted, x)).cwiseAbs().maxCoeff());
      }
    }
    detail = "weight gap " + num(worst_gap) + ", skip " + num(worst_skip) +
             ", forward gap " + num(worst_fwd);
    return worst_gap <= 1e-10 && worst_skip <= 1e-10 && worst_fwd <= 1e-10;
  });

  run(6, "quadratic constraints hold on sampled members", [](std::string& detail) {
    Rng rng(6001);
    double worst = 0;  // most negative form value seen, sign flipped
    const Eigen::VectorXd ones4 = Eigen::VectorXd::Ones(4);

    // Global sectors on the raw activations.
    struct { Activation act; double lo, hi; } global[] = {
        {Activation::Tanh, 0.0, 1.0},
        {Activation::ReLU, 0.0, 1.0},
        {Activation::Identity, 1.0, 1.0}};
    for (const auto& g : global) {
      Eigen::MatrixXd qc = sector_qc(Sector::uniform(4, g.lo, g.hi), ones4);
      for (int s = 0; s < 10000; ++s) {
        Eigen::VectorXd v(8);
        v.head(4) = 8.0 * rng.gaussian_vector(4);
        v.tail(4) = activate(g.act, Eigen::VectorXd(v.head(4)));
        worst = std::min(worst, quad_form(qc, v));
      }
    }

    // Normalized activations against the symmetric sector.
    Eigen::MatrixXd sym_qc = sector_qc(Sector::uniform(4, -1.0, 1.0), ones4);
    for (Activation act : {Activation::Tanh, Activation::ReLU}) {
      Sector base = Sector::uniform(4, 0.0, 1.0);
      for (int s = 0; s < 10000; ++s) {
        Eigen::VectorXd v(8);
        v.head(4) = 8.0 * rng.gaussian_vector(4);
        v.tail(4) = normalized_activation(act, base, Eigen::VectorXd(v.head(4)));
        worst = std::min(worst, quad_form(sym_qc, v));
      }
    }

    // Local sectors over random pre-activation boxes.
    for (Activation act : {Activation::Tanh, Activation::ReLU,
                           Activation::Identity}) {
      for (int trial = 0; trial < 25; ++trial) {
        Box box;
        box.lo = Eigen::VectorXd(4);
        box.hi = Eigen::VectorXd(4);
        for (int i = 0; i < 4; ++i) {
          double a = rng.uniform(-4.0, 4.0), b = rng.uniform(-4.0, 4.0);
          box.lo[i] = std::min(a, b);
          box.hi[i] = std::max(a, b);
        }
        Eigen::MatrixXd qc = sector_qc(local_sector(act, box), ones4);
        for (int s = 0; s < 400; ++s) {
          Eigen::VectorXd v(8);
          for (int i = 0; i < 4; ++i)
            v[i] = rng.uniform(box.lo[i], box.hi[i]);
          v.tail(4) = activate(act, Eigen::VectorXd(v.head(4)));
          worst = std::min(worst, quad_form(qc, v));
        }
      }
    }

    // Input-set certificates on sampled members.
    for (int trial = 0; trial < 20; ++trial) {
      int n = 2 + trial % 3;
      Ellipsoid e = testutil::random_ellipsoid(rng, n, 2.0, 0.5, 2.0);
      Eigen::MatrixXd qc = input_qc(e, 1.0);
      for (int s = 0; s < 500; ++s) {
        Eigen::VectorXd x1(n + 1);
        x1.head(n) = e.sample(rng);
        x1[n] = 1.0;
        worst = std::min(worst, quad_form(qc, x1));
      }
    }

    // Interval bounds contain every sampled pre-activation trajectory.
    bool boxes_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      Activation act = trial % 2 ? Activation::Tanh : Activation::ReLU;
      std::vector<int> sizes =
          trial % 3 ? std::vector<int>{2, 5, 2} : std::vector<int>{2, 4, 3, 2};
      Network net = testutil::random_network(rng, sizes, act);
      Box in;
      in.lo = Eigen::VectorXd::Constant(2, -1.5);
      in.hi = Eigen::VectorXd::Constant(2, 1.5);
      std::vector<Box> boxes = preactivation_boxes(net, in);
      for (int s = 0; s < 500; ++s) {
        Eigen::VectorXd h(2);
        for (int i = 0; i < 2; ++i) h[i] = rng.uniform(in.lo[i], in.hi[i]);
        for (int k = 0; k + 1 < static_cast<int>(net.layers.size()); ++k) {
          Eigen::VectorXd v = net.layers[k].W * h + net.layers[k].b;
          boxes_ok = boxes_ok && boxes[k].contains(v, 1e-9);
          h = activate(act, v);
        }
      }
    }

    detail = "lowest form value " + num(worst) +
             std::string(boxes_ok ? ", bounds tight" : ", BOUNDS VIOLATED");
    return worst >= -1e-10 && boxes_ok;
  });

  run(7, "solver lands on known optima and certificates revalidate",
      [](std::string& detail) {
        SolveOptions hard;
        hard.margin_target = 1.0;
        Certificate split = solve(balance_pencil(), hard);
        bool balance_ok = split.verdict == Verdict::BudgetExhausted &&
                          std::abs(split.margin - 0.5) <= 1e-4;

        SolveOptions easy;
        easy.margin_target = 0.4;
        Certificate reach = solve(balance_pencil(), easy);
        bool reach_ok = reach.verdict == Verdict::Feasible &&
                        check_certificate(balance_pencil(), reach);

        SolveOptions plain;
        Certificate floor = solve(stuck_pencil(), plain);
        bool stuck_ok = floor.verdict == Verdict::BudgetExhausted &&
                        floor.margin <= -1.0 + 1e-9 && floor.margin >= -1.0 - 1e-9;

        bool learned_ok = true;
        for (const ProblemSpec& spec :
             {twin_disks_problem(), three_region_problem()}) {
          LearningProblem lp =
              build_learning(spec.nx, spec.n1, spec.ny, spec.pairs, spec.mode);
          Certificate cert = solve(lp.pencil, spec.solver);
          learned_ok = learned_ok && cert.verdict == Verdict::Feasible &&
                       check_certificate(lp.pencil, cert);
        }

        detail = "balanced margin " + num(split.margin) + ", floored margin " +
                 num(floor.margin);
        return balance_ok && reach_ok && stuck_ok && learned_ok;
      });

  run(8, "a violating network is never certified", [](std::string& detail) {
    Network bad;
    bad.activation = Activation::Tanh;
    bad.layers.push_back(
        {0.1 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)});
    bad.layers.push_back(
        {100.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)});

    Ellipsoid unit;
    unit.shape = Eigen::MatrixXd::Identity(2, 2);
    unit.center = Eigen::VectorXd::Zero(2);
    ProblemSpec spec;
    spec.nx = spec.ny = spec.n1 = 2;
    spec.pairs = {{unit, unit}};
    spec.solver.max_iters = 3000;

    int certified = 0;
    long violations = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      spec.solver.seed = seed;
      RunReport rep = verify(bad, spec);
      if (rep.verdict == Verdict::Feasible) ++certified;
      violations = rep.pairs[0].violations;
    }
    detail = std::to_string(certified) + "/50 certified, " +
             std::to_string(violations) + "/500 sampled violations";
    return certified == 0 && violations > 0;
  });

  run(9, "solver-format export round-trips exactly", [](std::string& detail) {
    ProblemSpec spec = twin_disks_problem();
    LearningProblem lp =
        build_learning(spec.nx, spec.n1, spec.ny, spec.pairs, spec.mode);
    SdpaProblem out = to_sdpa(lp.pencil);
    std::string text = write_sdpa(out);
    SdpaProblem back = parse_sdpa(text);

    bool entries_ok = back.var_count == out.var_count &&
                      back.block_dims == out.block_dims &&
                      back.entries.size() == out.entries.size();
    if (entries_ok) {
      for (std::size_t k = 0; k < out.entries.size(); ++k) {
        const SdpaEntry &a = out.entries[k], &b = back.entries[k];
        entries_ok = entries_ok && a.mat == b.mat && a.block == b.block &&
                     a.i == b.i && a.j == b.j && a.value == b.value;
      }
    }
    bool render_ok = write_sdpa(back) == text;

    AffinePencil rebuilt = from_sdpa(back);
    Rng rng(9001);
    bool eval_ok = rebuilt.blocks.size() == lp.pencil.blocks.size() + 1;
    for (int trial = 0; trial < 3 && eval_ok; ++trial) {
      Eigen::VectorXd z(lp.pencil.var_count());
      for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform(-1.0, 1.0);
      for (std::size_t b = 0; b < lp.pencil.blocks.size(); ++b)
        eval_ok = eval_ok && (rebuilt.blocks[b].evaluate(z).array() ==
                              lp.pencil.blocks[b].evaluate(z).array())
                                 .all();
    }
    detail = std::to_string(out.entries.size()) + " entries, " +
             std::to_string(text.size()) + " bytes";
    return entries_ok && render_ok && eval_ok;
  });

  if (g_failures > 0) {
    std::printf("%d of 9 criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}

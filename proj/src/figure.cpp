#include "certnn/figure.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "certnn/random.hpp"
#include "certnn/sets.hpp"

namespace certnn {

namespace {

const char* kPalette[] = {"#2563eb", "#dc2626", "#059669",
                          "#9333ea", "#ea580c", "#0891b2"};
constexpr int kPaletteSize = 6;
constexpr int kBoundarySegments = 128;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void expand(const Eigen::Vector2d& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }

  void pad(double frac) {
    double dx = std::max(xmax - xmin, 1e-9);
    double dy = std::max(ymax - ymin, 1e-9);
    xmin -= frac * dx;
    xmax += frac * dx;
    ymin -= frac * dy;
    ymax += frac * dy;
  }
};

/// Screen mapping with uniform scale and a flipped vertical axis.
struct Panel {
  double x0, y0, w, h;
  Bounds world;
  double scale = 1, offx = 0, offy = 0;

  void finish() {
    world.pad(0.08);
    scale = std::min(w / (world.xmax - world.xmin),
                     h / (world.ymax - world.ymin));
    offx = x0 + (w - scale * (world.xmax - world.xmin)) / 2;
    offy = y0 + (h - scale * (world.ymax - world.ymin)) / 2;
  }
  double px(double x) const { return offx + scale * (x - world.xmin); }
  double py(double y) const { return offy + scale * (world.ymax - y); }
};

std::vector<Eigen::Vector2d> boundary(const Ellipsoid& e) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e.shape);
  if (!lu.isInvertible())
    throw std::invalid_argument("figure: ellipsoid shape matrix is singular");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(kBoundarySegments + 1);
  for (int i = 0; i <= kBoundarySegments; ++i) {
    const double t = 2.0 * M_PI * i / kBoundarySegments;
    const Eigen::Vector2d u(std::cos(t), std::sin(t));
    pts.push_back(lu.solve(u - e.center));
  }
  return pts;
}

void draw_boundary(std::ostringstream& svg, const Panel& panel,
                   const std::vector<Eigen::Vector2d>& pts, const char* color) {
  svg << "  <polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg << " ";
    svg << num(panel.px(pts[i].x())) << "," << num(panel.py(pts[i].y()));
  }
  svg << "\"/>\n";
}

void draw_points(std::ostringstream& svg, const Panel& panel,
                 const std::vector<Eigen::Vector2d>& pts, const char* color,
                 double radius) {
  for (const Eigen::Vector2d& p : pts)
    svg << "  <circle cx=\"" << num(panel.px(p.x())) << "\" cy=\""
        << num(panel.py(p.y())) << "\" r=\"" << num(radius) << "\" fill=\""
        << color << "\" fill-opacity=\"0.55\"/>\n";
}

}  // namespace

std::string emit_figure(const ProblemSpec& spec, const Network& net,
                        long samples_per_pair, std::uint64_t seed) {
  spec.validate();
  net.validate();
  if (spec.nx != 2 || spec.ny != 2)
    throw std::invalid_argument("figure rendering is restricted to planar problems");
  if (net.input_dim() != 2 || net.output_dim() != 2)
    throw std::invalid_argument("network dimensions do not match the planar problem");
  if (samples_per_pair < 0)
    throw std::invalid_argument("sample count must be nonnegative");

  const std::size_t npairs = spec.pairs.size();
  std::vector<std::vector<Eigen::Vector2d>> in_bounds(npairs), out_bounds(npairs);
  std::vector<std::vector<Eigen::Vector2d>> in_pts(npairs), out_pts(npairs);

  Panel left{30, 40, 340, 340, {}, 1, 0, 0};
  Panel right{410, 40, 340, 340, {}, 1, 0, 0};
  for (std::size_t j = 0; j < npairs; ++j) {
    in_bounds[j] = boundary(spec.pairs[j].in);
    out_bounds[j] = boundary(spec.pairs[j].out);
    for (const Eigen::Vector2d& p : in_bounds[j]) left.world.expand(p);
    for (const Eigen::Vector2d& p : out_bounds[j]) right.world.expand(p);

    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(j)));
    for (long i = 0; i < samples_per_pair; ++i) {
      const Eigen::VectorXd x = spec.pairs[j].in.sample(rng);
      const Eigen::VectorXd y = forward(net, x);
      in_pts[j].emplace_back(x[0], x[1]);
      out_pts[j].emplace_back(y[0], y[1]);
      left.world.expand(in_pts[j].back());
      right.world.expand(out_pts[j].back());
    }
  }
  left.finish();
  right.finish();

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"780\" height=\"410\" "
         "viewBox=\"0 0 780 410\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"780\" height=\"410\" fill=\"#ffffff\"/>\n";
  svg << "  <text x=\"200\" y=\"25\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">input sets and samples</text>\n";
  svg << "  <text x=\"580\" y=\"25\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">output sets and images</text>\n";
  for (const Panel& panel : {left, right})
    svg << "  <rect x=\"" << num(panel.x0) << "\" y=\"" << num(panel.y0)
        << "\" width=\"" << num(panel.w) << "\" height=\"" << num(panel.h)
        << "\" fill=\"none\" stroke=\"#d4d4d8\"/>\n";

  for (std::size_t j = 0; j < npairs; ++j) {
    const char* color = kPalette[j % kPaletteSize];
    draw_points(svg, left, in_pts[j], color, 2.2);
    draw_points(svg, right, out_pts[j], color, 1.8);
    draw_boundary(svg, left, in_bounds[j], color);
    draw_boundary(svg, right, out_bounds[j], color);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace certnn

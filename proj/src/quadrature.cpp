#include "scmfem/quadrature.hpp"

#include <algorithm>
#include <cfloat>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

namespace scmfem {

namespace {

// Expands the symmetric half-table of boost's Gauss-Legendre rule on [-1,1]
// into a full rule on [0,1].
template <int N>
LineRule boost_gauss() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  LineRule rule;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.nodes.push_back(0.5);
      rule.weights.push_back(0.5 * w[i]);
    } else {
      rule.nodes.push_back(0.5 * (1.0 - x[i]));
      rule.weights.push_back(0.5 * w[i]);
      rule.nodes.push_back(0.5 * (1.0 + x[i]));
      rule.weights.push_back(0.5 * w[i]);
    }
  }
  return rule;
}

LineRule make_line_rule(int n) {
  switch (n) {
    case 1:
      return {{0.5}, {1.0}};
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      return {{0.5 - d, 0.5 + d}, {0.5, 0.5}};
    }
    case 3: {
      const double d = 0.5 * std::sqrt(0.6);
      return {{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
    }
    case 7:
      return boost_gauss<7>();
    case 10:
      return boost_gauss<10>();
    case 15:
      return boost_gauss<15>();
    case 20:
      return boost_gauss<20>();
    default:
      throw std::invalid_argument(fmt::format("no Gauss-Legendre rule with {} points", n));
  }
}

void add_orbit3(TriRule& r, double a, double b, double c, double w) {
  r.points.push_back({a, b, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

TriRule make_tri_rule(int order) {
  TriRule r;
  r.order = order;
  switch (order) {
    case 1:
      r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
      r.weights.push_back(1.0);
      break;
    case 2:
      add_orbit3(r, 0.5, 0.5, 0.0, 1.0 / 3);
      break;
    case 3: {
      // Strang-Fix, six points on one full S3 orbit.
      const double a = 0.659027622374092, b = 0.231933368553031, c = 0.109039009072877;
      add_orbit3(r, a, b, c, 1.0 / 6);
      add_orbit3(r, b, a, c, 1.0 / 6);
      break;
    }
    case 5: {
      // Radon's seven-point rule.
      const double s15 = std::sqrt(15.0);
      r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
      r.weights.push_back(9.0 / 40);
      const double a1 = (6.0 - s15) / 21.0;
      const double a2 = (6.0 + s15) / 21.0;
      add_orbit3(r, a1, a1, 1.0 - 2 * a1, (155.0 - s15) / 1200.0);
      add_orbit3(r, a2, a2, 1.0 - 2 * a2, (155.0 + s15) / 1200.0);
      break;
    }
    case 7: {
      // Gatermann's twelve-point rule (rotational symmetry only).
      constexpr double tab[4][3] = {{0.06238226509439084, 0.06751786707392436, 0.02651702815743450},
                                    {0.05522545665692000, 0.32150249385201560, 0.04388140871444811},
                                    {0.03432430294509488, 0.66094919618679800, 0.02877504278497528},
                                    {0.51584233435360010, 0.27771616697640500, 0.06749318700980879}};
      for (const auto& row : tab) {
        const double x = row[0], y = row[1];
        add_orbit3(r, 1.0 - x - y, x, y, 2.0 * row[2]);
      }
      break;
    }
    default:
      throw std::invalid_argument(fmt::format("unsupported triangle rule order {}", order));
  }
  return r;
}

}  // namespace

const TriRule& tri_rule(int order) {
  static const std::map<int, TriRule> rules = [] {
    std::map<int, TriRule> m;
    for (int k : {1, 2, 3, 5, 7}) m.emplace(k, make_tri_rule(k));
    return m;
  }();
  const auto it = rules.find(order);
  if (it == rules.end()) throw std::invalid_argument(fmt::format("unsupported triangle rule order {}", order));
  return it->second;
}

TriRule composite_rule(const TriRule& base, int levels) {
  using Bary = std::array<double, 3>;
  std::vector<std::array<Bary, 3>> cells{{Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}}};
  auto mid = [](const Bary& p, const Bary& q) {
    return Bary{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])};
  };
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<Bary, 3>> next;
    for (const auto& c : cells) {
      const Bary m01 = mid(c[0], c[1]), m12 = mid(c[1], c[2]), m20 = mid(c[2], c[0]);
      next.push_back({c[0], m01, m20});
      next.push_back({m01, c[1], m12});
      next.push_back({m20, m12, c[2]});
      next.push_back({m12, m20, m01});
    }
    cells = std::move(next);
  }
  TriRule out;
  out.order = base.order;
  const double scale = 1.0 / static_cast<double>(cells.size());
  for (const auto& c : cells) {
    for (std::size_t q = 0; q < base.points.size(); ++q) {
      const Bary& l = base.points[q];
      Bary b{};
      for (int k = 0; k < 3; ++k) b[k] = l[0] * c[0][k] + l[1] * c[1][k] + l[2] * c[2][k];
      out.points.push_back(b);
      out.weights.push_back(base.weights[q] * scale);
    }
  }
  return out;
}

const LineRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, LineRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_line_rule(n)).first;
  return it->second;
}

int corner_layers(double alpha, int dimension, const CornerRuleOptions& opts) {
  const double decay = alpha + dimension;
  if (!(decay > 0.0)) {
    throw std::invalid_argument(fmt::format("r^{} is not integrable in dimension {}", alpha, dimension));
  }
  const double base = std::ceil(std::log2(1.0 / opts.tail_tolerance) / decay);
  const double layers = std::ceil(std::max(1.0, base) * opts.depth_factor);
  // Keeps 2^-layers normal and r^alpha finite at the innermost layer.
  const double cap = std::floor(1000.0 / std::max(1.0, -alpha));
  return static_cast<int>(std::min(layers, cap));
}

// The innermost layer also stands in for the dropped remainder (0, 2^-L]:
// for an integrand homogeneous of degree alpha in r the layers form a
// geometric series with ratio 2^-(alpha+dim), summed here in closed form.
static double tail_factor(double alpha, int dimension, const CornerRuleOptions& opts) {
  if (!opts.extrapolate_tail) return 1.0;
  const double ratio = std::exp2(-(alpha + dimension));
  return 1.0 / (1.0 - ratio);
}

std::vector<QuadPoint> corner_triangle_points(const Triangle& tri, double alpha, const CornerRuleOptions& opts) {
  if (norm(tri[0]) != 0.0) throw std::invalid_argument("corner triangle must have vertex 0 at the origin");
  const int layers = corner_layers(alpha, 2, opts);
  const LineRule& g = gauss_legendre(opts.gauss_points);
  const Point p = tri[1];
  const Point pq = tri[2] - tri[1];
  const double jac = 2.0 * std::abs(signed_area(tri));
  // |p + t pq|^alpha has complex singularities at distance d/|pq| from [0,1];
  // angular pieces of that length keep the Gauss rule converging fast.
  const double d = jac / norm(pq);
  const int pieces = static_cast<int>(std::clamp(std::ceil(norm(pq) / d), 1.0, 64.0));
  const double piece = 1.0 / pieces;

  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(layers) * g.nodes.size() * g.nodes.size() * pieces);
  const double tail = tail_factor(alpha, 2, opts);
  double hi = 1.0;
  for (int k = 0; k < layers; ++k) {
    const double lo = 0.5 * hi;
    const double len = hi - lo;
    const double scale = (k + 1 == layers) ? tail : 1.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = lo + len * g.nodes[i];
      const double ws = scale * len * g.weights[i];
      for (int m = 0; m < pieces; ++m) {
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
          const double t = piece * (m + g.nodes[j]);
          const Point x = s * (p + t * pq);
          out.push_back({x, {1.0 - s, s * (1.0 - t), s * t}, ws * piece * g.weights[j] * s * jac});
        }
      }
    }
    hi = lo;
  }
  return out;
}

std::vector<QuadPoint> corner_sector_points(double radius, double theta0, double theta1, double alpha,
                                            const CornerRuleOptions& opts) {
  const int layers = corner_layers(alpha, 2, opts);
  const LineRule& g = gauss_legendre(opts.gauss_points);
  const double span = theta1 - theta0;
  std::vector<QuadPoint> out;
  const double tail = tail_factor(alpha, 2, opts);
  double hi = 1.0;
  for (int k = 0; k < layers; ++k) {
    const double lo = 0.5 * hi;
    const double len = hi - lo;
    const double scale = (k + 1 == layers) ? tail : 1.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = lo + len * g.nodes[i];
      const double r = s * radius;
      const double wr = scale * len * g.weights[i] * radius;
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const double th = theta0 + span * g.nodes[j];
        out.push_back({{r * std::cos(th), r * std::sin(th)}, {0, 0, 0}, wr * span * g.weights[j] * r});
      }
    }
    hi = lo;
  }
  return out;
}

std::vector<QuadPoint> corner_segment_points(Point a, Point b, double alpha, const CornerRuleOptions& opts) {
  const int layers = corner_layers(alpha, 1, opts);
  const LineRule& g = gauss_legendre(opts.gauss_points);
  const Point d = b - a;
  const double length = norm(d);
  std::vector<QuadPoint> out;
  const double tail = tail_factor(alpha, 1, opts);
  double hi = 1.0;
  for (int k = 0; k < layers; ++k) {
    const double lo = 0.5 * hi;
    const double len = hi - lo;
    const double scale = (k + 1 == layers) ? tail : 1.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double t = lo + len * g.nodes[i];
      out.push_back({a + t * d, {1.0 - t, t, 0.0}, scale * len * g.weights[i] * length});
    }
    hi = lo;
  }
  return out;
}

double default_grading_mu(double omega) { return std::min(1.0, 2.0 * pi / omega - 1.0); }

GradedBoundaryRule graded_boundary_rule(const TriMesh& mesh, double h, double mu, double R, int points_per_segment) {
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument(fmt::format("grading mu={} outside (0,1]", mu));
  if (!(R > 0.0 && R <= std::sqrt(2.0) + 1e-15)) {
    throw std::invalid_argument(fmt::format("grading radius R={} outside (0,√2]", R));
  }
  if (!(h > 0.0)) throw std::invalid_argument("grading base size must be positive");

  GradedBoundaryRule rule;
  rule.edges = boundary_edges(mesh);
  rule.mu = mu;
  rule.R = R;
  rule.h = h;
  rule.points_per_segment = points_per_segment;
  rule.graded_edge.assign(rule.edges.size(), false);

  const auto& x = mesh.nodes();
  for (std::size_t k = 0; k < rule.edges.size(); ++k) {
    const BoundaryEdge& e = rule.edges[k];
    if (e.r_min >= R) {
      rule.segments.push_back({k, false, 0.0, e.length});
      continue;
    }
    rule.graded_edge[k] = true;
    const bool from_b = norm(x[e.b]) < norm(x[e.a]);
    const Point near = from_b ? x[e.b] : x[e.a];
    const Point dir = (1.0 / e.length) * ((from_b ? x[e.a] : x[e.b]) - near);

    double s = 0.0;
    if (e.r_min == 0.0) {
      const double first = std::min(std::max(std::pow(h, 1.0 / mu), DBL_MIN), e.length);
      rule.segments.push_back({k, from_b, 0.0, first});
      s = first;
    }
    while (s < e.length) {
      const double r = norm(near + s * dir);
      const double next = (r >= R) ? e.length : std::min(e.length, s + h * std::pow(r, 1.0 - mu));
      if (!(next > s)) throw std::runtime_error("graded boundary partition stalled");
      rule.segments.push_back({k, from_b, s, next});
      s = next;
    }
  }
  rule.points = segment_points(mesh, rule, points_per_segment);
  return rule;
}

std::vector<BoundaryQuadPoint> segment_points(const TriMesh& mesh, const GradedBoundaryRule& rule,
                                              int points_per_segment) {
  const LineRule& g = gauss_legendre(points_per_segment);
  const auto& x = mesh.nodes();
  std::vector<BoundaryQuadPoint> out;
  out.reserve(rule.segments.size() * g.nodes.size());
  for (const GradedSegment& seg : rule.segments) {
    const BoundaryEdge& e = rule.edges[seg.edge];
    const Point a = x[e.a];
    const Point b = x[e.b];
    const Point near = seg.from_b ? b : a;
    const Point far = seg.from_b ? a : b;
    const Point dir = (1.0 / e.length) * (far - near);
    const Point tangent = (1.0 / e.length) * (b - a);
    const Point normal{tangent.y, -tangent.x};
    const double len = seg.s1 - seg.s0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = seg.s0 + len * g.nodes[i];
      const Point p = near + s * dir;
      const double hat_far = s / e.length;
      const double hat_near = 1.0 - hat_far;
      BoundaryQuadPoint q;
      q.x = p;
      q.weight = len * g.weights[i];
      q.r = norm(p);
      q.edge = seg.edge;
      q.hat_a = seg.from_b ? hat_far : hat_near;
      q.hat_b = seg.from_b ? hat_near : hat_far;
      q.normal = normal;
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace scmfem

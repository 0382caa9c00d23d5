#include "scmfem/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "scmfem/integration.hpp"

namespace scmfem {

Case model_case(double omega) {
  if (!(omega > pi && omega < 2.0 * pi)) throw std::invalid_argument("the model problem needs pi < omega < 2 pi");
  const PolygonalDomain domain = make_domain(omega);
  auto y = [domain](Point p) {
    const PolarPoint pp = polar_of(domain, p);
    if (pp.r == 0.0) throw std::domain_error("the exact solution is singular at the corner");
    return std::pow(pp.r, kModelExponent) * std::sin(kModelExponent * pp.theta);
  };
  return {"paper", {}, y, y, kModelExponent};
}

Case smooth_case(double) {
  auto y = [](Point p) { return p.x * p.y; };
  return {"smooth", {}, y, y, 0.0};
}

Case zero_case(double) {
  auto y = [](Point) { return 0.0; };
  return {"zero", {}, {}, y, 0.0};
}

Case make_case(const std::string& name, double omega) {
  if (name == "paper") return model_case(omega);
  if (name == "smooth") return smooth_case(omega);
  if (name == "zero") return zero_case(omega);
  throw std::invalid_argument(fmt::format("unknown case '{}'", name));
}

double l2_error(const FeSpace& space, const AugmentedFunction& approx, const ScalarField& exact,
                double singular_strength) {
  const TriMesh& mesh = *space.mesh();
  const PolygonalDomain& domain = space.domain();
  const double lambda = domain.lambda();
  const double c = approx.singular.coefficient;
  const int sign = approx.singular.sign();

  double worst = singular_strength;
  if (c != 0.0) worst = std::min(worst, sign * lambda);

  auto integrand = [&](std::size_t e, const QuadPoint& q) {
    double v = exact(q.x) - approx.fe_part.value_in(e, q.bary);
    if (c != 0.0) {
      const PolarPoint pp = polar_of(domain, q.x);
      v -= c * singular_shape(lambda, sign, pp.r, pp.theta);
    }
    return v * v;
  };

  MeshQuadrature mq;
  mq.corner_alpha = 2.0 * worst;
  mq.corner = space.corner_options;
  mq.filter = ElementFilter::regular;
  const double regular = integrate_mesh(mesh, mq, integrand);

  mq.filter = ElementFilter::corner;
  const double corner = integrate_mesh(mesh, mq, integrand);
  mq.corner.depth_factor *= 2.0;
  const double corner_deep = integrate_mesh(mesh, mq, integrand);

  const double total = regular + corner_deep;
  if (std::abs(corner_deep - corner) > 1e-4 * std::abs(total)) {
    throw QuadratureError(fmt::format("L2 error not stable under depth doubling ({} vs {})", regular + corner, total));
  }
  return std::sqrt(std::max(0.0, total));
}

double eoc(double e_prev, double e_next, double h_prev, double h_next) {
  if (!(e_prev > 0.0 && e_next > 0.0 && h_prev > 0.0 && h_next > 0.0)) {
    throw std::invalid_argument("eoc needs positive errors and mesh sizes");
  }
  if (h_prev == h_next) throw std::invalid_argument("eoc needs two distinct mesh sizes");
  return std::log(e_prev / e_next) / std::log(h_prev / h_next);
}

std::string to_string(Method m) { return m == Method::scm ? "scm" : "standard"; }

Method parse_method(const std::string& s) {
  if (s == "scm") return Method::scm;
  if (s == "standard") return Method::standard;
  throw std::invalid_argument(fmt::format("unknown method '{}'", s));
}

bool ConvergenceRow::operator==(const ConvergenceRow& o) const {
  return level == o.level && h_nominal == o.h_nominal && h_measured == o.h_measured && dofs == o.dofs &&
         method == o.method && error_l2 == o.error_l2 && eoc == o.eoc && runtime_ms == o.runtime_ms;
}

namespace {

double solve_level(const ConvergenceConfig& config, const Case& cs, const FeSpace& space, double h_nominal,
                   ConvergenceRow& row) {
  ScmOptions opts;
  opts.mu = config.mu;
  opts.grading_radius = config.grading_radius;
  opts.grading_h = h_nominal;
  opts.source_exponent = cs.singular_strength;
  opts.alpha.denominator_squared = config.alpha_denominator_squared;

  if (config.method == Method::scm) {
    const ScmResult r = solve_scm(space, cs.f, cs.u, opts);
    row.coefficients = r.coeffs;
    return l2_error(space, r.z_h, cs.exact, cs.singular_strength);
  }
  ProjectionOptions popts;
  popts.estimate_norm = false;
  const BoundaryDatum datum = l2_project_boundary(cs.u, *space.mesh(), default_graded_rule(space, opts), popts);
  const AugmentedFunction y{solve_standard(space, datum, cs.f), {SingularKind::dual, 0.0}};
  return l2_error(space, y, cs.exact, cs.singular_strength);
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config,
                                            const std::function<void(const ConvergenceRow&)>& on_row) {
  return run_convergence(config, make_case(config.case_name, config.omega), on_row);
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config, const Case& cs,
                                            const std::function<void(const ConvergenceRow&)>& on_row) {
  if (config.levels < 1) throw std::invalid_argument("at least one level is required");
  const PolygonalDomain domain = make_domain(config.omega);
  CgOptions cg;
  cg.tol = config.tol;

  std::vector<ConvergenceRow> rows;
  std::shared_ptr<const TriMesh> mesh;
  for (int level = 0; level < config.levels; ++level) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.level = level;
    row.method = config.method;
    row.h_nominal = std::ldexp(config.h0, -level);
    try {
      mesh = level == 0 ? std::make_shared<const TriMesh>(initial_triangulation(domain, config.h0))
                        : std::make_shared<const TriMesh>(refine_uniform(*mesh));
      row.h_measured = mesh->h();
      row.dofs = mesh->num_nodes();
      if (!config.mesh_dump_dir.empty()) {
        std::filesystem::create_directories(config.mesh_dump_dir);
        std::ofstream out(std::filesystem::path(config.mesh_dump_dir) / fmt::format("mesh_level{}.txt", level));
        write_mesh(out, *mesh);
      }
      const FeSpace space(mesh, domain, cg);
      row.error_l2 = solve_level(config, cs, space, row.h_nominal, row);
      if (!rows.empty() && rows.back().error_l2 > 0.0 && row.error_l2 > 0.0) {
        row.eoc = eoc(rows.back().error_l2, row.error_l2, rows.back().h_nominal, row.h_nominal);
      }
    } catch (const std::exception& e) {
      row.error_l2 = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
    }
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
    if (on_row) on_row(row);
    if (!row.failure.empty()) break;
  }
  return rows;
}

std::string csv_line(const ConvergenceRow& row) {
  return fmt::format("{},{},{},{},{},{},{},{}", row.level, row.h_nominal, row.h_measured, row.dofs,
                     to_string(row.method), row.error_l2, row.eoc ? fmt::format("{}", *row.eoc) : std::string(),
                     row.runtime_ms);
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kCsvHeader << '\n';
  for (const ConvergenceRow& r : rows) os << csv_line(r) << '\n';
}

std::vector<ConvergenceRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("missing or unexpected CSV header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 8) throw std::runtime_error(fmt::format("expected 8 CSV fields, got {}: '{}'", f.size(), line));
    try {
      ConvergenceRow r;
      r.level = std::stoi(f[0]);
      r.h_nominal = std::stod(f[1]);
      r.h_measured = std::stod(f[2]);
      r.dofs = std::stoul(f[3]);
      r.method = parse_method(f[4]);
      r.error_l2 = std::stod(f[5]);
      if (!f[6].empty()) r.eoc = std::stod(f[6]);
      r.runtime_ms = std::stod(f[7]);
      rows.push_back(r);
    } catch (const std::logic_error& e) {
      throw std::runtime_error(fmt::format("malformed CSV row '{}': {}", line, e.what()));
    }
  }
  return rows;
}

}  // namespace scmfem

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scmfem/geometry.hpp"
#include "scmfem/singular_complement.hpp"

namespace scmfem {

/// Exponent of the boundary datum in the model problem.
inline constexpr double kModelExponent = -0.4999;

struct Case {
  std::string name;
  /// Empty means f = 0.
  ScalarField f;
  ScalarField u;
  /// Exact solution when known.
  ScalarField exact;
  /// Leading exponent of u and of the exact solution at the corner.
  double singular_strength = 0.0;
};

/// f = 0 and u = y|_Γ with the harmonic y = r^-0.4999 sin(-0.4999 θ).
/// Throws std::invalid_argument unless π < ω < 2π.
Case model_case(double omega);
/// y = x₁x₂ (harmonic), f = 0.
Case smooth_case(double omega);
Case zero_case(double omega);
Case make_case(const std::string& name, double omega);

/// ‖exact - approx‖_{L²(Ω)}. Corner elements use the dyadic rule for the
/// class r^(2 min(strength, -λ)) and are recomputed with doubled depth;
/// a relative change above 1e-4 raises QuadratureError.
double l2_error(const FeSpace& space, const AugmentedFunction& approx, const ScalarField& exact,
                double singular_strength);

/// ln(e_prev/e_next) / ln(h_prev/h_next). Throws std::invalid_argument
/// unless all arguments are positive.
double eoc(double e_prev, double e_next, double h_prev, double h_next);

enum class Method { scm, standard };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct ConvergenceConfig {
  double omega = 1.5 * pi;
  int levels = 6;
  double h0 = 0.25;
  /// 0 selects 2π/ω - 1 capped at 1.
  double mu = 0.0;
  double grading_radius = 0.1;
  Method method = Method::scm;
  double tol = 1e-12;
  std::string case_name = "paper";
  bool alpha_denominator_squared = false;
  /// When non-empty, every level's mesh is written there.
  std::string mesh_dump_dir;
};

struct ConvergenceRow {
  int level = 0;
  double h_nominal = 0.0;
  double h_measured = 0.0;
  std::size_t dofs = 0;
  Method method = Method::scm;
  double error_l2 = 0.0;
  std::optional<double> eoc;
  double runtime_ms = 0.0;
  /// Set for the scm method.
  std::optional<CorrectionCoefficients> coefficients;
  /// Non-empty when the level failed; error_l2 is NaN then.
  std::string failure;

  bool operator==(const ConvergenceRow& o) const;
};

/// Level k uses the mesh refined k times from the initial triangulation with
/// h <= h0; its nominal size is h0·2^-k. Rows are passed to on_row as soon
/// as they are finished. A failing level yields a diagnostic row and ends
/// the study.
std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config,
                                            const std::function<void(const ConvergenceRow&)>& on_row = {});

/// Same study for a caller-supplied case (config.case_name is ignored).
std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config, const Case& cs,
                                            const std::function<void(const ConvergenceRow&)>& on_row = {});

inline constexpr const char* kCsvHeader = "level,h_nominal,h_measured,dofs,method,error_l2,eoc,runtime_ms";

std::string csv_line(const ConvergenceRow& row);
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
/// Parses the output of write_csv. Throws std::runtime_error on malformed input.
std::vector<ConvergenceRow> parse_csv(std::istream& is);

}  // namespace scmfem

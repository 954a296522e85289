#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wlab/fem.hpp"
#include "wlab/mesh.hpp"
#include "wlab/radial.hpp"
#include "wlab/spaceform.hpp"
#include "wlab/weights.hpp"

namespace wlab {

/// Concentric shell inner <= t <= outer about the origin (a ball when
/// inner == 0), in any dimension. Served by the radial decomposition.
struct ShellSpec {
  double inner = 0.0;
  double outer = 1.0;
  void validate() const;
  std::string describe() const;
};

/// A 2D triangulation loaded from a mesh file; refined without boundary
/// projection.
struct ExternalMesh {
  std::string path;
  Mesh mesh;
};

using Domain = std::variant<DomainSpec, ShellSpec, ExternalMesh>;

std::string describe(const Domain& domain);

/// Where the weight and the comparison ball are centered.
///  ambient       at the origin of the space, as the inequalities are stated
///  trial-center  the domain is first translated so that its trial center
///                (the zero of V with the weight moving along) is the origin;
///                Euclidean meshed domains only
enum class Frame { Ambient, TrialCenter };

std::string_view to_string(Frame frame);
std::optional<Frame> parse_frame(std::string_view name);

struct CheckSettings {
  /// Uniform refinements applied to the generated mesh; the two finest levels
  /// feed Richardson extrapolation, so at least 1.
  int refinement_levels = 2;
  ShootingOptions shooting;
  int monotonicity_grid = 4000;
  /// Extra refinements applied before a conjecture counterexample is flagged.
  int confirm_refinements = 2;
  Frame frame = Frame::Ambient;
};

/// One inequality check: a domain, a certified weight, a space form and the
/// ambient dimension (2 for meshed domains).
struct Problem {
  std::string id;
  Domain domain;
  WeightFunction phi;
  SpaceForm space;
  int dimension = 2;
  CheckSettings settings;

  /// Throws std::invalid_argument when the combination is unsupported.
  void validate() const;
};

/// Nonzero Neumann eigenvalues of a domain with an error estimate.
struct DomainSpectrum {
  std::vector<double> eigenvalues;  // mu_1 <= mu_2 <= ...
  double rel_error = 0.0;
  double volume = 0.0;
  double volume_rel_error = 0.0;
  std::string path;                 // "fem" or "radial"
  std::vector<std::vector<double>> level_eigenvalues;
  std::vector<int> level_nodes;
};

struct MainResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tol_budget = 0.0;
  double equality_ratio = 0.0;  // lhs * mu1(B_R) / (n-1)
  bool corollary_holds = false; // mu_1(Omega) <= mu_1(B_R) within tolerance
  bool passed = false;
};

struct SharperResult {
  double r1 = 0.0;
  double r2 = 0.0;
  double inside_volume = 0.0;   // |Omega cap B_R|_phi
  double sharper_rhs = 0.0;
  double sharper_gap = 0.0;
  double rhs_tol = 0.0;
  double gap_tol = 0.0;
  bool rhs_nonnegative = false;
  bool passed = false;
};

struct ConjectureResult {
  double lhs = 0.0;  // sum_{i=1}^{n} 1/mu_i
  double rhs = 0.0;  // n / mu_1(B_R)
  double margin = 0.0;
  double tol = 0.0;
  bool confirmed_by_refinement = false;
  std::string verdict;  // "conjecture-consistent" or "counterexample-candidate"
};

struct TrialCenterResult {
  Vec2 center = Vec2::Zero();
  double field_norm = 0.0;
  double scale = 0.0;
  int iterations = 0;
  bool converged = false;
  bool inside_hull = true;
  std::string note;
};

struct InequalityReport {
  std::string case_id;
  std::string domain;
  int dimension = 2;
  int curvature = 0;
  std::string weight;
  std::string path;
  double volume = 0.0;
  double radius = 0.0;  // matched R
  double ball_mu = 0.0; // mu_1(B_R)
  std::vector<double> eigenvalues;
  double eigen_rel_error = 0.0;
  double volume_rel_error = 0.0;
  std::string frame = "ambient";
  Vec2 frame_shift = Vec2::Zero();  // translation applied to the domain

  std::optional<MainResult> main;
  std::optional<SharperResult> sharper;
  std::optional<ConjectureResult> conjecture;
  std::optional<MonotonicityReport> monotonicity;
  std::optional<TrialCenterResult> center;
  std::vector<std::string> notes;

  std::string verdict = "pass";  // "pass", "fail", or "error"
  std::string error;

  /// Recomputes verdict from the filled sections.
  void finalize();
};

/// R with |B_R(o)|_phi = target to 1e-10 relative (Brent on the increasing
/// volume map). Throws std::invalid_argument when the target exceeds the
/// volume at the weight's domain cap.
double match_ball_radius(double target_volume, int n, SpaceForm space,
                         const WeightFunction& phi);

/// Shared state of the checks on one problem; spectra and the ball solve are
/// computed once on first use.
class CaseAnalysis {
 public:
  explicit CaseAnalysis(Problem problem);
  ~CaseAnalysis();
  CaseAnalysis(CaseAnalysis&&) noexcept;
  CaseAnalysis& operator=(CaseAnalysis&&) noexcept;

  const Problem& problem() const;
  const DomainSpectrum& spectrum(int count);
  double matched_radius();
  const RadialSolution& ball_solution();
  const ExtendedProfile& extended_profile();

  MainResult main();
  SharperResult sharper();
  ConjectureResult conjectures();
  MonotonicityReport monotonicity();
  TrialCenterResult trial_center();

  /// Skeleton report (identity, radius, eigenvalues) for the given count.
  InequalityReport base_report(int eigen_count);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

InequalityReport check_theorem_main(const Problem& problem);
InequalityReport check_theorem_sharper(const Problem& problem);
InequalityReport check_conjectures(const Problem& problem);

struct PointwiseResult {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

/// sum_i (1 - xi_i^2)/mu_i <= sum_{i<n} 1/mu_i for ascending positive mu and
/// a unit vector xi. Throws std::invalid_argument for unsorted or
/// nonpositive mu, a size mismatch, or |xi| != 1.
PointwiseResult check_pointwise_bound(const std::vector<double>& mu,
                                      const std::vector<double>& xi);

/// V(o') = int_Omega f(|x-o'|) (x-o')/|x-o'| exp(-phi(|x|)) dx on the mesh.
/// With weight_follows the density is exp(-phi(|x-o'|)) instead.
Vec2 trial_center_field(const Mesh& mesh, const WeightFunction& phi,
                        const ExtendedProfile& ext, const Vec2& origin,
                        bool weight_follows = false);

/// Damped Newton iteration for V(o') = 0 started at the domain's weighted
/// centroid. By default the weight stays centered at the ambient origin and
/// only the trial center moves.
TrialCenterResult find_trial_center(const Mesh& mesh, const WeightFunction& phi,
                                    const ExtendedProfile& ext, double tol = 1e-8,
                                    bool weight_follows = false);

}  // namespace wlab

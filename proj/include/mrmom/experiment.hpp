#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mrmom/hierarchy.hpp"
#include "mrmom/mesh.hpp"

namespace mrmom {

enum class Scenario {
  kResonantSphere,   // fixed sphere, frequency sweep across a cavity mode
  kCubeRefinement,   // fixed low frequency, mesh density sweep
  kHeteroSphere,     // fixed frequency, growing local refinement contrast
  kMieValidation,    // solve and score bistatic RCS against the series
};

enum class Formulation { kEfie, kCfie };
enum class BasisKind { kRwg, kMrPoint, kMrHier };

std::string to_string(Scenario s);
std::string to_string(Formulation f);
std::string to_string(BasisKind b);
Scenario parse_scenario(const std::string& s);
Formulation parse_formulation(const std::string& s);
BasisKind parse_basis(const std::string& s);

struct SolverSettings {
  std::string method = "gmres";  // gmres | bicgstab | direct
  double tol = 1e-4;
  int restart = 200;
  int max_iterations = 1000;
  // none | jacobi | full_lu | coarse_lu | coarse_ilu0 (coarse_* need an MR
  // basis; the block is every column on the stop level)
  std::string preconditioner = "none";
};

struct ExperimentConfig {
  Scenario scenario = Scenario::kCubeRefinement;
  std::vector<double> frequencies;       // Hz
  std::vector<Formulation> formulations;
  std::vector<BasisKind> bases;
  SolverSettings solver;
  std::string output_dir = ".";

  double cube_size = 1.0;                // m
  std::vector<int> cube_divisions = {1, 2, 4, 8};  // edges per cube side
  double sphere_radius = 0.5;            // m
  int sphere_subdivisions = 3;
  std::vector<int> hetero_stages = {1, 3, 5};  // cumulative cap refinements

  int stop_level = -1;      // fixed level index, or -1 for the h <= lambda/8 rule
  bool compute_condition = false;
  int dense_cap = 6000;     // refuse rows above this many unknowns
  int mie_angles = 181;     // bistatic cut resolution for kMieValidation
  double cfie_alpha = 0.5;
  int seed = 0;             // recorded only; every algorithm is deterministic
};

// One output row; `error` is nonempty when the row failed (the run continues).
struct CaseRow {
  std::string scenario;
  std::string mesh_label;
  double frequency = 0.0;
  std::string formulation;
  std::string basis;
  int n = 0;
  int stop_level = -1;  // -1 when no change of basis was applied
  double condition = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  double relative_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t precond_memory_bytes = 0;
  double area_ratio = std::numeric_limits<double>::quiet_NaN();
  double length_ratio = std::numeric_limits<double>::quiet_NaN();
  double rcs_rms_error = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;  // reported in JSON only; timings are not
                              // deterministic, every other field is
  std::string error;
  std::vector<double> history;
};

struct ExperimentReport {
  std::vector<CaseRow> rows;
  std::vector<std::pair<std::string, std::string>> environment;
};

// Throws std::invalid_argument on empty lists, unknown solver/preconditioner
// names, or nonsensical scenario parameters.
void validate(const ExperimentConfig& cfg);

// Rows the config will produce: meshes x frequencies x formulations x bases.
std::size_t expected_rows(const ExperimentConfig& cfg);

// Runs every row of the cross-product in config order.  Row failures are
// recorded in the row and the run continues.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes <dir>/report.csv (deterministic fields only), <dir>/report.json
// (adds environment and wall-clock times) and one residual-history CSV per
// solved row (history_<row>.csv).
void write_report(const ExperimentReport& report, const std::string& dir);

// ---- scenario building blocks (also used directly by tests) ---------------

// Uniform sphere graded by a sequence of shrinking polar-cap refinements,
// one extra level per stage; stage s caps the colatitude at 40/2^(s-1)
// degrees.  Shrinking keeps every pass clear of the previous pass's
// conformity bisections.
TriMesh hetero_sphere_mesh(double radius, int base_subdivisions, int stages);

// Symmetric frequency grid center*(1 +/- fraction) with `points` samples,
// used to pin a discrete-mesh resonance that sits slightly off the
// continuous-sphere value.
std::vector<double> resonance_sweep(double center, double fraction,
                                    int points);

// Bistatic cut sigma(theta_i) in the E-plane (phi = 0), theta uniform on
// [0, pi] with `angles` samples, for a solved current coefficient vector.
std::vector<double> bistatic_sweep(const TriMesh& mesh,
                                   const EdgeConnectivity& conn,
                                   const Medium& med, const Eigen::VectorXcd& x,
                                   double incident_amplitude, int angles);

// Series reference for the same cut.
std::vector<double> mie_sweep(double radius, const Medium& med, int angles);

// Relative root-mean-square mismatch of two equal-length samplings.
double rms_relative_error(const std::vector<double>& computed,
                          const std::vector<double>& reference);

}  // namespace mrmom

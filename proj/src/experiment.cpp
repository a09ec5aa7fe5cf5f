#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mrmom/experiment.hpp"
#include "mrmom/farfield.hpp"
#include "mrmom/mie.hpp"
#include "mrmom/operator_io.hpp"
#include "mrmom/operators.hpp"
#include "mrmom/solvers.hpp"

namespace mrmom {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::kResonantSphere: return "resonant_sphere";
    case Scenario::kCubeRefinement: return "cube_refinement";
    case Scenario::kHeteroSphere: return "hetero_sphere";
    case Scenario::kMieValidation: return "mie_validation";
  }
  return "?";
}

std::string to_string(Formulation f) {
  return f == Formulation::kEfie ? "EFIE" : "CFIE";
}

std::string to_string(BasisKind b) {
  switch (b) {
    case BasisKind::kRwg: return "RWG";
    case BasisKind::kMrPoint: return "MR-point";
    case BasisKind::kMrHier: return "MR-hier";
  }
  return "?";
}

Scenario parse_scenario(const std::string& s) {
  if (s == "resonant_sphere") return Scenario::kResonantSphere;
  if (s == "cube_refinement") return Scenario::kCubeRefinement;
  if (s == "hetero_sphere") return Scenario::kHeteroSphere;
  if (s == "mie_validation") return Scenario::kMieValidation;
  throw std::invalid_argument("unknown scenario: " + s);
}

Formulation parse_formulation(const std::string& s) {
  if (s == "EFIE" || s == "efie") return Formulation::kEfie;
  if (s == "CFIE" || s == "cfie") return Formulation::kCfie;
  throw std::invalid_argument("unknown formulation: " + s);
}

BasisKind parse_basis(const std::string& s) {
  if (s == "RWG" || s == "rwg") return BasisKind::kRwg;
  if (s == "MR-point" || s == "mr-point") return BasisKind::kMrPoint;
  if (s == "MR-hier" || s == "mr-hier") return BasisKind::kMrHier;
  throw std::invalid_argument("unknown basis: " + s);
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("experiment config: " + what);
  };
  if (cfg.frequencies.empty()) fail("frequency list is empty");
  for (double f : cfg.frequencies)
    if (!(f > 0)) fail("frequencies must be positive");
  if (cfg.formulations.empty()) fail("formulation list is empty");
  if (cfg.bases.empty()) fail("basis list is empty");
  if (!(cfg.solver.tol > 0 && cfg.solver.tol < 1))
    fail("solver tolerance must lie in (0, 1)");
  if (cfg.solver.restart < 1 || cfg.solver.max_iterations < 1)
    fail("solver iteration limits must be positive");
  if (cfg.solver.method != "gmres" && cfg.solver.method != "bicgstab" &&
      cfg.solver.method != "direct")
    fail("unknown solver method: " + cfg.solver.method);
  const std::string& p = cfg.solver.preconditioner;
  if (p != "none" && p != "jacobi" && p != "full_lu" && p != "coarse_lu" &&
      p != "coarse_ilu0")
    fail("unknown preconditioner: " + p);
  if (p == "coarse_lu" || p == "coarse_ilu0") {
    bool any_mr = false;
    for (BasisKind b : cfg.bases) any_mr |= b != BasisKind::kRwg;
    if (!any_mr) fail("preconditioner " + p + " needs a multiresolution basis");
  }
  if (cfg.scenario == Scenario::kCubeRefinement) {
    if (cfg.cube_divisions.empty()) fail("cube division list is empty");
    for (int m : cfg.cube_divisions)
      if (m < 1) fail("cube divisions must be >= 1");
    if (!(cfg.cube_size > 0)) fail("cube size must be positive");
  } else {
    if (!(cfg.sphere_radius > 0)) fail("sphere radius must be positive");
    if (cfg.sphere_subdivisions < 0 || cfg.sphere_subdivisions > 6)
      fail("sphere subdivisions out of range");
  }
  if (cfg.scenario == Scenario::kHeteroSphere) {
    if (cfg.hetero_stages.empty()) fail("hetero stage list is empty");
    int prev = 0;
    for (int s : cfg.hetero_stages) {
      if (s <= prev) fail("hetero stages must be strictly increasing");
      prev = s;
    }
  }
  if (cfg.scenario == Scenario::kMieValidation && cfg.mie_angles < 2)
    fail("mie_angles must be at least 2");
  if (!(cfg.cfie_alpha > 0 && cfg.cfie_alpha < 1))
    fail("cfie_alpha must lie in (0, 1)");
  if (cfg.dense_cap < 1) fail("dense_cap must be positive");
}

namespace {

struct MeshCase {
  std::string label;
  TriMesh mesh;
  EdgeConnectivity conn;
  double area_ratio = 0, length_ratio = 0;
};

std::vector<MeshCase> build_mesh_cases(const ExperimentConfig& cfg) {
  std::vector<MeshCase> out;
  auto push = [&out](std::string label, TriMesh mesh) {
    MeshCase mc;
    mc.label = std::move(label);
    mc.conn = build_connectivity(mesh);
    const MeshStats st = mesh_stats(mesh);
    mc.area_ratio = st.area_max / st.area_min;
    mc.length_ratio = st.h_max / st.h_min;
    mc.mesh = std::move(mesh);
    out.push_back(std::move(mc));
  };
  switch (cfg.scenario) {
    case Scenario::kCubeRefinement:
      for (int m : cfg.cube_divisions)
        push("cube[1/h=" + std::to_string(m) + "]",
             generate_primitive(PrimitiveShape::Cube, cfg.cube_size,
                                cfg.cube_size / m));
      break;
    case Scenario::kHeteroSphere: {
      TriMesh mesh = make_icosphere(cfg.sphere_radius, cfg.sphere_subdivisions);
      int done = 0;
      for (int target : cfg.hetero_stages) {
        for (; done < target; ++done) {
          const double cap_deg = 40.0 / std::pow(2.0, done);
          mesh = refine_region(mesh,
                               cap_region(Eigen::Vector3d::UnitZ(),
                                          cap_deg * kPi / 180.0),
                               1, cfg.sphere_radius);
        }
        push("hetero[stage=" + std::to_string(target) + "]", mesh);
      }
      break;
    }
    case Scenario::kResonantSphere:
    case Scenario::kMieValidation:
      push("sphere[s=" + std::to_string(cfg.sphere_subdivisions) + "]",
           make_icosphere(cfg.sphere_radius, cfg.sphere_subdivisions));
      break;
  }
  return out;
}

std::size_t mesh_case_count(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::kCubeRefinement: return cfg.cube_divisions.size();
    case Scenario::kHeteroSphere: return cfg.hetero_stages.size();
    default: return 1;
  }
}

// Operators shared by every row of one (mesh, frequency) block.
struct AssembledBlock {
  Eigen::MatrixXcd Z;             // electric operator
  Eigen::VectorXcd v;             // tested incident electric field
  Eigen::MatrixXcd C;             // combined operator (when requested)
  Eigen::VectorXcd rhs_c;
  bool has_cfie = false;
};

AssembledBlock assemble_block(const MeshCase& mc, const Medium& med,
                              const ExperimentConfig& cfg, bool need_cfie) {
  const PlaneWave pw = make_plane_wave(Eigen::Vector3d::UnitZ(),
                                       Eigen::Vector3d::UnitX());
  AssembledBlock blk;
  blk.Z = assemble_efie(mc.mesh, mc.conn, med);
  blk.v = efie_rhs(mc.mesh, mc.conn, pw, med);
  if (need_cfie) {
    const Eigen::MatrixXcd B = assemble_mfie(mc.mesh, mc.conn, med);
    const std::vector<bool> efie_only = efie_only_rows(mc.mesh, mc.conn);
    blk.C = cfie_combine(blk.Z, B, med, efie_only, cfg.cfie_alpha);
    blk.rhs_c = cfie_rhs(blk.v, mfie_rhs(mc.mesh, mc.conn, pw, med), med,
                         efie_only, cfg.cfie_alpha);
    blk.has_cfie = true;
  }
  return blk;
}

int resolve_stop_level(const MeshCase& mc, const Medium& med,
                       const ExperimentConfig& cfg) {
  if (cfg.stop_level >= 0) return cfg.stop_level;
  return choose_stop_level(build_levels(mc.mesh), med, StopRule{});
}

std::unique_ptr<Preconditioner> make_preconditioner(
    const std::string& name, const Eigen::MatrixXcd& A, const MrBasis* basis) {
  if (name == "none") return identity_preconditioner(static_cast<int>(A.rows()));
  if (name == "jacobi") return jacobi_preconditioner(A);
  if (name == "full_lu") return full_lu_preconditioner(A);
  if (!basis)
    throw std::runtime_error(
        "coarse preconditioners require a multiresolution basis");
  const std::vector<int> block = basis->columns_at(basis->stop_level);
  if (name == "coarse_lu") return block_lu_preconditioner(A, block);
  return block_ilu0_preconditioner(A, block);
}

void solve_case(const ExperimentConfig& cfg, const MeshCase& mc,
                const Medium& med, const AssembledBlock& blk,
                Formulation form, BasisKind basis, CaseRow& row) {
  const int n = mc.conn.num_dofs();
  if (n > cfg.dense_cap)
    throw std::runtime_error("problem size " + std::to_string(n) +
                             " exceeds the dense cap " +
                             std::to_string(cfg.dense_cap));
  const Eigen::MatrixXcd& A0 =
      form == Formulation::kEfie ? blk.Z : blk.C;
  const Eigen::VectorXcd& b0 =
      form == Formulation::kEfie ? blk.v : blk.rhs_c;

  std::optional<MrBasis> mr;
  Eigen::MatrixXcd A;
  Eigen::VectorXcd b;
  Eigen::VectorXcd scale;
  if (basis == BasisKind::kRwg) {
    A = A0;
    b = b0;
  } else {
    const LoopVariant variant = basis == BasisKind::kMrPoint
                                    ? LoopVariant::kPointLoops
                                    : LoopVariant::kHierarchicalLoops;
    mr = build_mr_basis(mc.mesh, mc.conn, resolve_stop_level(mc, med, cfg),
                        variant);
    row.stop_level = mr->stop_level;
    MrTransformed t = apply_mr(A0, mr->Q);
    A = std::move(t.matrix);
    scale = std::move(t.scale);
    b = mr_rhs(mr->Q, scale, b0);
  }

  if (cfg.compute_condition) row.condition = condition_number(A);

  if (cfg.solver.method == "direct") {
    const Eigen::VectorXcd x = direct_solve(A, b);
    row.iterations = 0;
    row.converged = true;
    row.relative_residual = (b - A * x).norm() / b.norm();
    row.history = {1.0, row.relative_residual};
  } else {
    IterativeOptions opts;
    opts.tol = cfg.solver.tol;
    opts.restart = cfg.solver.restart;
    opts.max_iterations = cfg.solver.max_iterations;
    const auto precond =
        make_preconditioner(cfg.solver.preconditioner, A,
                            mr ? &*mr : nullptr);
    opts.precond = precond.get();
    row.precond_memory_bytes = precond->memory_bytes();
    const SolveReport rep = cfg.solver.method == "gmres"
                                ? gmres_solve(A, b, opts)
                                : bicgstab_solve(A, b, opts);
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    row.relative_residual = rep.final_residual;
    row.history = rep.history;
    if (cfg.scenario == Scenario::kMieValidation) {
      const Eigen::VectorXcd x_rwg =
          mr ? mr_recover(mr->Q, scale, rep.x) : rep.x;
      row.rcs_rms_error = rms_relative_error(
          bistatic_sweep(mc.mesh, mc.conn, med, x_rwg, 1.0, cfg.mie_angles),
          mie_sweep(cfg.sphere_radius, med, cfg.mie_angles));
    }
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::size_t expected_rows(const ExperimentConfig& cfg) {
  return mesh_case_count(cfg) * cfg.frequencies.size() *
         cfg.formulations.size() * cfg.bases.size();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport rep;
  const char* threads = std::getenv("MRMOM_THREADS");
  rep.environment = {
      {"solver", cfg.solver.method},
      {"tolerance", format_double(cfg.solver.tol)},
      {"restart", std::to_string(cfg.solver.restart)},
      {"max_iterations", std::to_string(cfg.solver.max_iterations)},
      {"preconditioner", cfg.solver.preconditioner},
      {"cfie_alpha", format_double(cfg.cfie_alpha)},
      {"stop_level", cfg.stop_level >= 0 ? std::to_string(cfg.stop_level)
                                         : "coarsest with h <= lambda/8"},
      {"threads", threads ? threads : "1"},
      {"seed", std::to_string(cfg.seed)},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
  };

  std::vector<MeshCase> meshes = build_mesh_cases(cfg);
  const bool need_cfie =
      std::find(cfg.formulations.begin(), cfg.formulations.end(),
                Formulation::kCfie) != cfg.formulations.end();

  for (const MeshCase& mc : meshes) {
    for (double f : cfg.frequencies) {
      const Medium med = free_space(f);
      std::optional<AssembledBlock> blk;
      std::string assembly_error;
      const int n = mc.conn.num_dofs();
      if (n <= cfg.dense_cap) {
        try {
          blk = assemble_block(mc, med, cfg, need_cfie);
        } catch (const std::exception& e) {
          assembly_error = e.what();
        }
      }
      for (Formulation form : cfg.formulations) {
        for (BasisKind basis : cfg.bases) {
          CaseRow row;
          row.scenario = to_string(cfg.scenario);
          row.mesh_label = mc.label;
          row.frequency = f;
          row.formulation = to_string(form);
          row.basis = to_string(basis);
          row.n = n;
          row.area_ratio = mc.area_ratio;
          row.length_ratio = mc.length_ratio;
          const auto start = std::chrono::steady_clock::now();
          try {
            if (!assembly_error.empty())
              throw std::runtime_error(assembly_error);
            if (!blk)
              throw std::runtime_error(
                  "problem size " + std::to_string(n) +
                  " exceeds the dense cap " + std::to_string(cfg.dense_cap));
            solve_case(cfg, mc, med, *blk, form, basis, row);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          row.wall_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
          rep.rows.push_back(std::move(row));
        }
      }
    }
  }
  return rep;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir + "/report.csv");
    if (!csv) throw std::runtime_error("cannot write report.csv in " + dir);
    csv << "scenario,mesh,frequency_hz,formulation,basis,n,stop_level,"
           "condition,iterations,converged,relative_residual,"
           "precond_memory_bytes,area_ratio,length_ratio,rcs_rms_error,"
           "error\n";
    for (const CaseRow& r : report.rows) {
      csv << r.scenario << ',' << r.mesh_label << ','
          << format_double(r.frequency) << ',' << r.formulation << ','
          << r.basis << ',' << r.n << ',' << r.stop_level << ','
          << format_double(r.condition) << ',' << r.iterations << ','
          << (r.converged ? 1 : 0) << ','
          << format_double(r.relative_residual) << ','
          << r.precond_memory_bytes << ',' << format_double(r.area_ratio)
          << ',' << format_double(r.length_ratio) << ','
          << format_double(r.rcs_rms_error) << ',' << r.error << '\n';
    }
  }
  nlohmann::json j;
  for (const auto& [k, v] : report.environment) j["environment"][k] = v;
  j["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const CaseRow& r = report.rows[i];
    nlohmann::json row{{"scenario", r.scenario},
                       {"mesh", r.mesh_label},
                       {"frequency_hz", r.frequency},
                       {"formulation", r.formulation},
                       {"basis", r.basis},
                       {"n", r.n},
                       {"stop_level", r.stop_level},
                       {"iterations", r.iterations},
                       {"converged", r.converged},
                       {"precond_memory_bytes", r.precond_memory_bytes},
                       {"wall_seconds", r.wall_seconds},
                       {"error", r.error}};
    if (!std::isnan(r.condition)) row["condition"] = r.condition;
    if (!std::isnan(r.relative_residual))
      row["relative_residual"] = r.relative_residual;
    if (!std::isnan(r.area_ratio)) row["area_ratio"] = r.area_ratio;
    if (!std::isnan(r.length_ratio)) row["length_ratio"] = r.length_ratio;
    if (!std::isnan(r.rcs_rms_error)) row["rcs_rms_error"] = r.rcs_rms_error;
    if (!r.history.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "history_%03zu.csv", i);
      save_history_csv(r.history, dir + "/" + name);
      row["history_file"] = name;
    }
    j["rows"].push_back(std::move(row));
  }
  std::ofstream js(dir + "/report.json");
  if (!js) throw std::runtime_error("cannot write report.json in " + dir);
  js << j.dump(2) << '\n';
}

TriMesh hetero_sphere_mesh(double radius, int base_subdivisions, int stages) {
  TriMesh mesh = make_icosphere(radius, base_subdivisions);
  for (int s = 0; s < stages; ++s) {
    const double cap_deg = 40.0 / std::pow(2.0, s);
    mesh = refine_region(
        mesh, cap_region(Eigen::Vector3d::UnitZ(), cap_deg * kPi / 180.0), 1,
        radius);
  }
  return mesh;
}

std::vector<double> resonance_sweep(double center, double fraction,
                                    int points) {
  if (points < 1 || fraction < 0 || center <= 0)
    throw std::invalid_argument("resonance_sweep: bad parameters");
  std::vector<double> freqs;
  freqs.reserve(points);
  if (points == 1) {
    freqs.push_back(center);
    return freqs;
  }
  for (int i = 0; i < points; ++i)
    freqs.push_back(center * (1.0 - fraction +
                              2.0 * fraction * i / (points - 1.0)));
  return freqs;
}

std::vector<double> bistatic_sweep(const TriMesh& mesh,
                                   const EdgeConnectivity& conn,
                                   const Medium& med, const Eigen::VectorXcd& x,
                                   double incident_amplitude, int angles) {
  std::vector<double> out(angles);
  for (int i = 0; i < angles; ++i) {
    const double theta = kPi * i / (angles - 1.0);
    out[i] = bistatic_rcs(mesh, conn, med, x, spherical_dir(theta, 0.0),
                          incident_amplitude);
  }
  return out;
}

std::vector<double> mie_sweep(double radius, const Medium& med, int angles) {
  std::vector<double> out(angles);
  for (int i = 0; i < angles; ++i)
    out[i] = mie_pec_rcs(radius, med, kPi * i / (angles - 1.0), 0.0);
  return out;
}

double rms_relative_error(const std::vector<double>& computed,
                          const std::vector<double>& reference) {
  if (computed.size() != reference.size() || reference.empty())
    throw std::invalid_argument("rms_relative_error: length mismatch");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    num += (computed[i] - reference[i]) * (computed[i] - reference[i]);
    den += reference[i] * reference[i];
  }
  return std::sqrt(num / den);
}

}  // namespace mrmom

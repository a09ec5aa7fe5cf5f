// Command-line front end: mesh generation/inspection, operator assembly,
// linear solves, condition numbers, scripted experiments, and the series
// reference for the PEC sphere.
#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrmom/experiment.hpp"
#include "mrmom/mie.hpp"
#include "mrmom/operator_io.hpp"
#include "mrmom/operators.hpp"
#include "mrmom/solvers.hpp"

namespace {

using nlohmann::json;

Eigen::Vector3d parse_vec3(const std::string& s) {
  Eigen::Vector3d v;
  std::istringstream in(s);
  char comma;
  if (!(in >> v.x() >> comma >> v.y() >> comma >> v.z()))
    throw CLI::ValidationError("expected three comma-separated numbers: " + s);
  return v;
}

json stats_json(const mrmom::TriMesh& mesh) {
  const mrmom::MeshStats st = mrmom::mesh_stats(mesh);
  return json{{"vertices", st.vertices},
              {"edges", st.edges},
              {"triangles", st.triangles},
              {"h_min", st.h_min},
              {"h_max", st.h_max},
              {"area_min", st.area_min},
              {"area_max", st.area_max},
              {"area_total", st.area_total},
              {"closed", st.closed},
              {"euler_characteristic", st.euler_characteristic},
              {"genus", st.genus},
              {"components", st.components},
              {"nesting_depth", mesh.nesting ? mesh.nesting->depth() : 1}};
}

mrmom::ExperimentConfig config_from_json(const json& j) {
  mrmom::ExperimentConfig cfg;
  cfg.scenario = mrmom::parse_scenario(j.at("scenario").get<std::string>());
  for (const auto& f : j.at("frequencies")) cfg.frequencies.push_back(f);
  for (const auto& f : j.at("formulations"))
    cfg.formulations.push_back(mrmom::parse_formulation(f));
  for (const auto& b : j.at("bases"))
    cfg.bases.push_back(mrmom::parse_basis(b));
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (s.contains("method")) cfg.solver.method = s["method"];
    if (s.contains("tol")) cfg.solver.tol = s["tol"];
    if (s.contains("restart")) cfg.solver.restart = s["restart"];
    if (s.contains("max_iterations"))
      cfg.solver.max_iterations = s["max_iterations"];
    if (s.contains("preconditioner"))
      cfg.solver.preconditioner = s["preconditioner"];
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"];
  if (j.contains("cube_size")) cfg.cube_size = j["cube_size"];
  if (j.contains("cube_divisions"))
    cfg.cube_divisions = j["cube_divisions"].get<std::vector<int>>();
  if (j.contains("sphere_radius")) cfg.sphere_radius = j["sphere_radius"];
  if (j.contains("sphere_subdivisions"))
    cfg.sphere_subdivisions = j["sphere_subdivisions"];
  if (j.contains("hetero_stages"))
    cfg.hetero_stages = j["hetero_stages"].get<std::vector<int>>();
  if (j.contains("stop_level")) cfg.stop_level = j["stop_level"];
  if (j.contains("compute_condition"))
    cfg.compute_condition = j["compute_condition"];
  if (j.contains("dense_cap")) cfg.dense_cap = j["dense_cap"];
  if (j.contains("mie_angles")) cfg.mie_angles = j["mie_angles"];
  if (j.contains("cfie_alpha")) cfg.cfie_alpha = j["cfie_alpha"];
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MRMOM_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"desk-scale method-of-moments scattering workbench"};
  app.require_subcommand(1);
  int seed = 0;
  app.add_option("--seed", seed,
                 "recorded in reports; all algorithms are deterministic");

  // ---- mesh ----------------------------------------------------------------
  auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect a mesh");
  std::string mesh_in, mesh_out, shape = "cube";
  double size = 1.0, target_h = 0.25;
  int subdivisions = -1;
  mesh_cmd->add_option("--in", mesh_in, "inspect an existing mesh file");
  mesh_cmd->add_option("--out", mesh_out, "write the mesh (.msh or .off)");
  mesh_cmd->add_option("--shape", shape, "cube | sphere | torus | genus2");
  mesh_cmd->add_option("--size", size, "edge length / radius / scale (m)");
  mesh_cmd->add_option("--target-h", target_h, "requested edge length (m)");
  mesh_cmd->add_option("--subdivisions", subdivisions,
                       "sphere only: exact subdivision count (overrides "
                       "--target-h)");

  // ---- assemble ------------------------------------------------------------
  auto* asm_cmd = app.add_subcommand("assemble", "assemble an operator");
  std::string asm_mesh, asm_out, asm_rhs_out, formulation = "efie";
  std::string direction = "0,0,1", polarization = "1,0,0";
  double frequency = 3e8, alpha = 0.5;
  asm_cmd->add_option("--mesh", asm_mesh, "input mesh file")->required();
  asm_cmd->add_option("--frequency", frequency, "Hz")->required();
  asm_cmd->add_option("--formulation", formulation,
                      "efie | mfie | cfie | gram");
  asm_cmd->add_option("--alpha", alpha, "combination weight for cfie");
  asm_cmd->add_option("--out", asm_out, "operator output file")->required();
  asm_cmd->add_option("--rhs", asm_rhs_out,
                      "also project the plane-wave excitation");
  asm_cmd->add_option("--direction", direction, "propagation direction x,y,z");
  asm_cmd->add_option("--polarization", polarization, "E-field direction");

  // ---- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve a saved linear system");
  std::string op_path, rhs_path, x_out, history_out;
  mrmom::SolverSettings settings;
  settings.tol = 1e-6;
  solve_cmd->add_option("--operator", op_path)->required();
  solve_cmd->add_option("--rhs", rhs_path)->required();
  solve_cmd->add_option("--out", x_out, "solution vector file");
  solve_cmd->add_option("--history", history_out, "residual history CSV");
  solve_cmd->add_option("--method", settings.method,
                        "gmres | bicgstab | direct");
  solve_cmd->add_option("--tol", settings.tol);
  solve_cmd->add_option("--restart", settings.restart);
  solve_cmd->add_option("--max-iterations", settings.max_iterations);
  solve_cmd->add_option("--precond", settings.preconditioner,
                        "none | jacobi | full_lu");

  // ---- cond ----------------------------------------------------------------
  auto* cond_cmd = app.add_subcommand("cond", "condition number of a saved "
                                              "operator");
  std::string cond_path;
  cond_cmd->add_option("--operator", cond_path)->required();

  // ---- experiment ----------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "run a scripted study");
  std::string config_path, exp_out;
  bool strict = false;
  exp_cmd->add_option("--config", config_path, "JSON config file")->required();
  exp_cmd->add_option("--out", exp_out, "override the output directory");
  exp_cmd->add_flag("--strict", strict,
                    "exit nonzero if any row failed or did not converge");

  // ---- rcs -----------------------------------------------------------------
  auto* rcs_cmd = app.add_subcommand(
      "rcs", "series reference: PEC-sphere bistatic cut (E-plane)");
  double rcs_radius = 0.5, rcs_frequency = 3e8;
  int rcs_angles = 181;
  std::string rcs_out;
  rcs_cmd->add_option("--radius", rcs_radius, "m");
  rcs_cmd->add_option("--frequency", rcs_frequency, "Hz");
  rcs_cmd->add_option("--angles", rcs_angles);
  rcs_cmd->add_option("--out", rcs_out, "CSV file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh_cmd) {
      mrmom::TriMesh mesh;
      if (!mesh_in.empty()) {
        mesh = mrmom::load_mesh(mesh_in);
      } else if (shape == "cube") {
        mesh = mrmom::generate_primitive(mrmom::PrimitiveShape::Cube, size,
                                         target_h);
      } else if (shape == "sphere") {
        mesh = subdivisions >= 0
                   ? mrmom::make_icosphere(size, subdivisions)
                   : mrmom::generate_primitive(mrmom::PrimitiveShape::Sphere,
                                               size, target_h);
      } else if (shape == "torus") {
        mesh = mrmom::make_torus(size, 0.35 * size, 24, 12);
      } else if (shape == "genus2") {
        mesh = mrmom::make_genus2(size);
      } else {
        throw std::runtime_error("unknown shape: " + shape);
      }
      if (!mesh_out.empty()) mrmom::save_mesh(mesh, mesh_out);
      std::cout << stats_json(mesh).dump(2) << '\n';
    } else if (*asm_cmd) {
      const mrmom::TriMesh mesh = mrmom::load_mesh(asm_mesh);
      const mrmom::EdgeConnectivity conn = mrmom::build_connectivity(mesh);
      const mrmom::Medium med = mrmom::free_space(frequency);
      const mrmom::PlaneWave pw = mrmom::make_plane_wave(
          parse_vec3(direction).normalized(),
          parse_vec3(polarization).normalized());
      Eigen::MatrixXcd A;
      Eigen::VectorXcd b;
      if (formulation == "efie") {
        A = mrmom::assemble_efie(mesh, conn, med);
        b = mrmom::efie_rhs(mesh, conn, pw, med);
      } else if (formulation == "mfie") {
        A = mrmom::assemble_mfie(mesh, conn, med);
        b = mrmom::mfie_rhs(mesh, conn, pw, med);
      } else if (formulation == "cfie") {
        A = mrmom::assemble_cfie(mesh, conn, med, alpha);
        b = mrmom::assemble_cfie_rhs(mesh, conn, pw, med, alpha);
      } else if (formulation == "gram") {
        A = mrmom::assemble_gram(mesh, conn).cast<mrmom::Complex>();
        b.setZero(A.rows());
      } else {
        throw std::runtime_error("unknown formulation: " + formulation);
      }
      mrmom::save_operator(A, asm_out);
      if (!asm_rhs_out.empty()) mrmom::save_vector(b, asm_rhs_out);
      std::cout << json{{"n", A.rows()}, {"operator", asm_out}}.dump(2)
                << '\n';
    } else if (*solve_cmd) {
      const Eigen::MatrixXcd A = mrmom::load_operator(op_path);
      const Eigen::VectorXcd b = mrmom::load_vector(rhs_path);
      json out;
      if (settings.method == "direct") {
        const Eigen::VectorXcd x = mrmom::direct_solve(A, b);
        out = {{"method", "direct"},
               {"relative_residual", (b - A * x).norm() / b.norm()}};
        if (!x_out.empty()) mrmom::save_vector(x, x_out);
      } else {
        mrmom::IterativeOptions opts;
        opts.tol = settings.tol;
        opts.restart = settings.restart;
        opts.max_iterations = settings.max_iterations;
        std::unique_ptr<mrmom::Preconditioner> precond;
        if (settings.preconditioner == "none")
          precond = mrmom::identity_preconditioner(static_cast<int>(A.rows()));
        else if (settings.preconditioner == "jacobi")
          precond = mrmom::jacobi_preconditioner(A);
        else if (settings.preconditioner == "full_lu")
          precond = mrmom::full_lu_preconditioner(A);
        else
          throw std::runtime_error("unknown preconditioner: " +
                                   settings.preconditioner);
        opts.precond = precond.get();
        const mrmom::SolveReport rep =
            settings.method == "gmres" ? mrmom::gmres_solve(A, b, opts)
                                       : mrmom::bicgstab_solve(A, b, opts);
        out = {{"method", settings.method},
               {"iterations", rep.iterations},
               {"converged", rep.converged},
               {"reason", rep.reason},
               {"relative_residual", rep.final_residual}};
        if (!x_out.empty()) mrmom::save_vector(rep.x, x_out);
        if (!history_out.empty())
          mrmom::save_history_csv(rep.history, history_out);
        if (!rep.converged) {
          std::cout << out.dump(2) << '\n';
          return 2;
        }
      }
      std::cout << out.dump(2) << '\n';
    } else if (*cond_cmd) {
      const Eigen::MatrixXcd A = mrmom::load_operator(cond_path);
      std::cout << json{{"n", A.rows()},
                        {"condition", mrmom::condition_number(A)}}
                       .dump(2)
                << '\n';
    } else if (*exp_cmd) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config: " + config_path);
      json jcfg = json::parse(in);
      mrmom::ExperimentConfig cfg = config_from_json(jcfg);
      cfg.seed = seed;
      if (!exp_out.empty()) cfg.output_dir = exp_out;
      const mrmom::ExperimentReport report = mrmom::run_experiment(cfg);
      mrmom::write_report(report, cfg.output_dir);
      int failed = 0;
      for (const auto& row : report.rows)
        if (!row.error.empty() || !row.converged) ++failed;
      std::cout << json{{"rows", report.rows.size()},
                        {"failed_or_unconverged", failed},
                        {"output_dir", cfg.output_dir}}
                       .dump(2)
                << '\n';
      if (strict && failed > 0) return 1;
    } else if (*rcs_cmd) {
      const mrmom::Medium med = mrmom::free_space(rcs_frequency);
      std::ostringstream csv;
      csv << "theta_deg,rcs_m2\n";
      csv.precision(17);
      for (int i = 0; i < rcs_angles; ++i) {
        const double theta = mrmom::kPi * i / (rcs_angles - 1.0);
        csv << 180.0 * i / (rcs_angles - 1.0) << ','
            << mrmom::mie_pec_rcs(rcs_radius, med, theta, 0.0) << '\n';
      }
      if (rcs_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(rcs_out);
        out << csv.str();
        if (!out) throw std::runtime_error("cannot write " + rcs_out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

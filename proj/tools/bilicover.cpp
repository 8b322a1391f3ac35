#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bilicover/bench.hpp"
#include "bilicover/model.hpp"
#include "bilicover/oracle.hpp"
#include "bilicover/rootloop.hpp"
#include "bilicover/sdpcert.hpp"

namespace {

using namespace bilicover;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isnan(*v)) return "nan";
  return fmt(*v);
}

SignMode parse_mode(const std::string& s) {
  if (s == "nonneg" || s == "NonNegative") return SignMode::NonNegative;
  if (s == "mixed" || s == "MixedSigns") return SignMode::MixedSigns;
  throw CLI::ValidationError("--mode", "expected nonneg or mixed");
}

std::vector<BenchSetting> parse_settings(const std::string& spec) {
  // "m,n,p;m,n,p;..."
  std::vector<BenchSetting> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    BenchSetting s;
    if (std::sscanf(part.c_str(), "%d,%d,%lf", &s.m, &s.n, &s.p) != 3)
      throw CLI::ValidationError("--settings", "expected m,n,p;m,n,p;...");
    out.push_back(s);
  }
  return out;
}

int cmd_gen(int m, int n, double p, const std::string& mode,
            std::uint64_t seed, const std::string& out_path) {
  BilinearInstance inst = generate_instance(m, n, p, parse_mode(mode), seed);
  if (out_path.empty()) {
    std::cout << instance_to_string(inst);
  } else {
    write_instance(inst, out_path);
  }
  return 0;
}

void print_report_row(const std::string& id, const BilinearInstance& inst,
                      const RunReport& rep, const std::string& status) {
  std::cout << "instance_id,m,n,p,sign_mode,seed,z_mc,z_root,cuts,heur_time_s,"
               "z_opt,rho_heu,rho,delta_rho,status\n";
  std::cout << id << ',' << inst.m << ',' << inst.n << ",," << to_string(inst.sign_mode)
            << ',' << inst.seed << ','
            << (rep.status == RunStatus::Ok ? fmt(rep.z_mc) : "") << ','
            << (rep.status == RunStatus::Ok ? fmt(rep.z_root) : "") << ','
            << rep.cuts_added << ',' << fmt(rep.heuristic_time_s) << ','
            << opt_str(rep.z_opt) << ',' << opt_str(rep.rho_heu) << ','
            << opt_str(rep.rho) << ',' << opt_str(rep.delta_rho) << ',' << status
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cutting-plane engine for sparse separable bilinear programs"};
  app.require_subcommand(1);

  // ---- gen -------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  int gm = 10, gn = 10;
  double gp = 0.5;
  std::string gmode = "nonneg", gout;
  std::uint64_t gseed = 1;
  gen->add_option("-m,--rows", gm, "bilinear rows");
  gen->add_option("-n,--pairs", gn, "variable pairs");
  gen->add_option("-p,--density", gp, "nonzero probability");
  gen->add_option("--mode", gmode, "nonneg|mixed");
  gen->add_option("--seed", gseed, "instance seed");
  gen->add_option("-o,--out", gout, "output file (default stdout)");

  // ---- root ------------------------------------------------------------
  auto* root = app.add_subcommand("root", "run the root cutting loop on a file");
  std::string root_file;
  LoopConfig loop;
  loop.t_heu_seconds = 60.0;
  bool root_par_sep = false;
  root->add_option("file", root_file, "instance file")->required();
  root->add_option("--t-heu", loop.t_heu_seconds, "separation budget seconds");
  root->add_option("--cap", loop.iteration_cap, "iteration cap (0: 10*support)");
  root->add_option("--eps-z", loop.eps_z, "minimum relative improvement");
  root->add_option("--epsilon", loop.separation.epsilon, "label threshold");
  root->add_option("--violation-tol", loop.separation.violation_tol,
                   "separation violation tolerance");
  root->add_option("--refine-tol", loop.refine_tol, "linearization tolerance");
  root->add_option("--max-pass", loop.refine_max_pass, "refine pass cap");
  root->add_option("--seed", loop.separation.rng_seed, "separation rng seed");
  root->add_flag("--parallel-sep", root_par_sep, "parallel row separation");

  // ---- certify-sdp -----------------------------------------------------
  auto* certify = app.add_subcommand(
      "certify-sdp", "certify that the SDP adds nothing over McCormick");
  std::string cert_file;
  certify->add_option("file", cert_file, "instance file")->required();

  // ---- oracle ----------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "desk-scale global solve");
  std::string oracle_file;
  BnbOptions bnb;
  bool deterministic = true;
  oracle->add_option("file", oracle_file, "instance file")->required();
  oracle->add_option("--gap-tol", bnb.gap_tol, "relative gap tolerance");
  oracle->add_option("--node-cap", bnb.node_cap, "node budget");
  oracle->add_flag("--deterministic,!--no-deterministic", deterministic,
                   "single-worker deterministic mode (always on)");

  // ---- bench -----------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the benchmark protocol");
  BenchPlan plan;
  plan.settings = desk_settings();
  plan.loop.t_heu_seconds = 60.0;
  std::string bench_out = "bench_out", settings_spec, modes = "both";
  bool use_paper = false, no_timing = false, serial = false;
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--settings", settings_spec, "m,n,p;m,n,p;... overrides");
  bench->add_flag("--paper", use_paper, "use the 15-setting grid");
  bench->add_option("--instances", plan.instances_per_setting,
                    "instances per setting");
  bench->add_option("--seed", plan.master_seed, "master seed");
  bench->add_option("--modes", modes, "nonneg|mixed|both");
  bench->add_option("--t-heu", plan.loop.t_heu_seconds, "separation budget (s)");
  bench->add_option("--oracle-cap", plan.oracle_cap_n,
                    "full-oracle size cap on n");
  bench->add_option("--oracle-nodes", plan.oracle_nodes, "full-oracle node cap");
  bench->add_option("--incumbent-nodes", plan.incumbent_nodes,
                    "incumbent-only node cap");
  bench->add_flag("--mt", plan.with_mt, "also run the single-cut-per-row root");
  bench->add_flag("--no-timing", no_timing, "omit timing columns (golden runs)");
  bench->add_flag("--serial", serial, "disable the instance worker pool");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (gen->parsed()) return cmd_gen(gm, gn, gp, gmode, gseed, gout);

    if (root->parsed()) {
      BilinearInstance inst = read_instance(root_file);
      loop.parallel_separation = root_par_sep;
      RunReport rep = run_root(inst, loop);
      std::string status =
          rep.status == RunStatus::Infeasible ? "infeasible" : "no_oracle";
      print_report_row(std::filesystem::path(root_file).stem().string(), inst,
                       rep, status);
      return 0;
    }

    if (certify->parsed()) {
      BilinearInstance inst = read_instance(cert_file);
      SdpCertificate cert = verify_sdp_equals_mccormick(inst);
      if (cert.status == SdpCertStatus::Infeasible) {
        std::cout << "INFEASIBLE\n";
      } else {
        std::cout << "VERIFIED z_mc=" << fmt(cert.z_mc)
                  << " min_eig=" << fmt(cert.cert.min_eigenvalue) << "\n";
      }
      return 0;
    }

    if (oracle->parsed()) {
      BilinearInstance inst = read_instance(oracle_file);
      GlobalResult res = solve_global(inst, bnb);
      switch (res.status) {
        case GlobalStatus::Optimal:
          std::cout << "OPTIMAL z_opt=" << fmt(res.ub) << " nodes=" << res.nodes
                    << "\n";
          break;
        case GlobalStatus::Bounds:
          std::cout << "BOUNDS lb=" << fmt(res.lb) << " ub=" << fmt(res.ub)
                    << " nodes=" << res.nodes << "\n";
          break;
        case GlobalStatus::Infeasible:
          std::cout << "INFEASIBLE\n";
          break;
      }
      return 0;
    }

    if (bench->parsed()) {
      if (use_paper) plan.settings = paper_settings();
      if (!settings_spec.empty()) plan.settings = parse_settings(settings_spec);
      if (modes == "nonneg") plan.run_mixed = false;
      else if (modes == "mixed") plan.run_nonneg = false;
      else if (modes != "both")
        throw std::runtime_error("--modes expects nonneg|mixed|both");
      if (const char* env = std::getenv("BILICOVER_SEED"))
        plan.master_seed = std::strtoull(env, nullptr, 10);
      plan.timing = !no_timing;

      BenchOutput out = run_bench(plan, serial ? Exec::Serial : Exec::OpenMP);
      std::filesystem::create_directories(bench_out);
      auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(std::filesystem::path(bench_out) / name);
        if (!f) throw std::runtime_error("cannot write " + name);
        f << content;
      };
      write("runs.csv", out.runs_csv);
      write("summary.csv", out.summary_csv);
      std::cout << "wrote " << bench_out << "/runs.csv and " << bench_out
                << "/summary.csv\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

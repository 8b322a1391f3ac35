#include "bilicover/bench.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bilicover/oracle.hpp"
#include "bilicover/rng.hpp"

namespace bilicover {

namespace {

constexpr std::uint64_t kBenchTag = 0x62656e6368ULL;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isnan(*v)) return "nan";
  return fmt(*v);
}

struct Job {
  int setting_idx = 0;
  int instance_idx = 0;
  SignMode mode = SignMode::NonNegative;
  BenchSetting setting;
};

struct JobResult {
  std::string id;
  std::uint64_t seed = 0;
  RunReport report;
  std::optional<double> rho_mtroot;
  std::string status;
};

// z_mt_root: McCormick root bolstered by one concave cut per row, then
// the same linearization loop as the main pipeline.
double mt_root_bound(const BilinearInstance& inst, const LoopConfig& loop) {
  RelaxationState state(inst);
  RelaxationSolution sol = state.solve();
  if (sol.status != LpStatus::Optimal) return std::nan("");
  for (const BilinearRow& row : inst.rows) {
    if (row.rhs > 0.0) state.add_cut(build_mt_cut(row));
  }
  state.refine_until_cut_feasible(loop.refine_tol, loop.refine_max_pass);
  return state.last_solution().z;
}

JobResult run_job(const Job& job, const BenchPlan& plan) {
  JobResult out;
  const char* mode_tag = job.mode == SignMode::NonNegative ? "nn" : "mx";
  out.id = "s" + std::to_string(job.setting_idx) + "_" + mode_tag + "_" +
           std::to_string(job.instance_idx);
  out.seed = substream_seed(plan.master_seed,
                            kBenchTag ^ (static_cast<std::uint64_t>(job.setting_idx)
                                         << 8 | (job.mode == SignMode::MixedSigns)),
                            static_cast<std::uint64_t>(job.instance_idx));

  BilinearInstance inst = generate_instance(job.setting.m, job.setting.n,
                                            job.setting.p, job.mode, out.seed);
  LoopConfig loop = plan.loop;
  loop.separation.rng_seed = out.seed;

  out.report = run_root(inst, loop);
  if (out.report.status == RunStatus::Infeasible) {
    out.status = "infeasible";
    return out;
  }

  BnbOptions bopts;
  bool full_oracle = inst.n <= plan.oracle_cap_n;
  bopts.node_cap = full_oracle ? plan.oracle_nodes : plan.incumbent_nodes;
  GlobalResult glob = solve_global(inst, bopts);
  if (glob.status == GlobalStatus::Infeasible || !std::isfinite(glob.ub)) {
    out.status = "no_oracle";
  } else {
    bool incumbent_only = glob.status != GlobalStatus::Optimal;
    compute_metrics(out.report, glob.ub, glob.lb, incumbent_only);
    out.status = out.report.degenerate_gap
                     ? "degenerate_gap"
                     : (incumbent_only ? "incumbent_only" : "ok");
  }

  if (plan.with_mt && job.mode == SignMode::NonNegative && out.report.z_opt &&
      !out.report.degenerate_gap) {
    double z_mt = mt_root_bound(inst, loop);
    double denom = *out.report.z_opt - out.report.z_mc;
    if (std::isfinite(z_mt) && denom > 1e-12)
      out.rho_mtroot = 100.0 * (z_mt - out.report.z_mc) / denom;
  }
  return out;
}

}  // namespace

std::vector<BenchSetting> desk_settings() {
  return {{40, 50, 0.10}, {60, 50, 0.20}, {60, 80, 0.10},
          {40, 100, 0.08}, {100, 100, 0.05}};
}

std::vector<BenchSetting> paper_settings() {
  std::vector<BenchSetting> out;
  const int sizes[] = {100, 250, 500};
  const double densities[] = {0.01, 0.02, 0.05};
  for (int m : sizes)
    for (int n : sizes)
      for (double p : densities) {
        double np = n * p;
        if (np >= 5.0 && np <= 20.0) out.push_back({m, n, p});
      }
  return out;
}

void validate_plan(const BenchPlan& plan) {
  if (plan.settings.empty()) throw std::invalid_argument("empty bench plan");
  if (plan.instances_per_setting < 1)
    throw std::invalid_argument("instances_per_setting must be >= 1");
  for (const BenchSetting& s : plan.settings) {
    double np = s.n * s.p;
    if (!(np >= 5.0 && np <= 20.0))
      throw std::invalid_argument("setting violates the n*p in [5,20] window");
    if (s.m < 1 || s.n < 1 || !(s.p > 0.0) || s.p > 1.0)
      throw std::invalid_argument("malformed bench setting");
  }
}

BenchOutput run_bench(const BenchPlan& plan, Exec exec) {
  validate_plan(plan);

  std::vector<Job> jobs;
  for (int s = 0; s < static_cast<int>(plan.settings.size()); ++s) {
    for (int mode_pick = 0; mode_pick < 2; ++mode_pick) {
      SignMode mode = mode_pick == 0 ? SignMode::NonNegative : SignMode::MixedSigns;
      if (mode == SignMode::NonNegative && !plan.run_nonneg) continue;
      if (mode == SignMode::MixedSigns && !plan.run_mixed) continue;
      for (int k = 0; k < plan.instances_per_setting; ++k)
        jobs.push_back({s, k, mode, plan.settings[s]});
    }
  }

  std::vector<JobResult> results(jobs.size());
  parallel_for(static_cast<std::int64_t>(jobs.size()), exec,
               [&](std::int64_t j) { results[j] = run_job(jobs[j], plan); });

  std::ostringstream runs;
  runs << "instance_id,m,n,p,sign_mode,seed,z_mc,z_root,cuts";
  if (plan.timing) runs << ",heur_time_s";
  runs << ",z_opt,rho_heu,rho,delta_rho";
  if (plan.with_mt) runs << ",rho_mtroot";
  runs << ",status\n";
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const JobResult& r = results[j];
    const RunReport& rep = r.report;
    runs << r.id << ',' << job.setting.m << ',' << job.setting.n << ','
         << fmt(job.setting.p) << ',' << to_string(job.mode) << ',' << r.seed
         << ',' << (rep.status == RunStatus::Ok ? fmt(rep.z_mc) : "") << ','
         << (rep.status == RunStatus::Ok ? fmt(rep.z_root) : "") << ','
         << rep.cuts_added;
    if (plan.timing) runs << ',' << fmt(rep.heuristic_time_s);
    runs << ',' << fmt_opt(rep.z_opt) << ',' << fmt_opt(rep.rho_heu) << ','
         << fmt_opt(rep.rho) << ',' << fmt_opt(rep.delta_rho);
    if (plan.with_mt) runs << ',' << fmt_opt(r.rho_mtroot);
    runs << ',' << r.status << '\n';
  }

  // per-setting means of the root-cut quantities
  std::ostringstream summary;
  summary << "m,n,p,sign_mode,instances,mean_rho_heu,mean_cuts";
  if (plan.timing) summary << ",mean_heur_time_s";
  summary << ",mean_rho";
  if (plan.with_mt) summary << ",mean_rho_mtroot";
  summary << '\n';
  for (int s = 0; s < static_cast<int>(plan.settings.size()); ++s) {
    for (int mode_pick = 0; mode_pick < 2; ++mode_pick) {
      SignMode mode = mode_pick == 0 ? SignMode::NonNegative : SignMode::MixedSigns;
      if (mode == SignMode::NonNegative && !plan.run_nonneg) continue;
      if (mode == SignMode::MixedSigns && !plan.run_mixed) continue;
      int count = 0;
      double sum_rho_heu = 0, sum_cuts = 0, sum_time = 0, sum_rho = 0, sum_mt = 0;
      int n_rho = 0, n_mt = 0;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].setting_idx != s || jobs[j].mode != mode) continue;
        const JobResult& r = results[j];
        ++count;
        sum_cuts += r.report.cuts_added;
        sum_time += r.report.heuristic_time_s;
        if (r.report.rho_heu && !std::isnan(*r.report.rho_heu)) {
          sum_rho_heu += *r.report.rho_heu;
          sum_rho += *r.report.rho;
          ++n_rho;
        }
        if (r.rho_mtroot && !std::isnan(*r.rho_mtroot)) {
          sum_mt += *r.rho_mtroot;
          ++n_mt;
        }
      }
      if (count == 0) continue;
      const BenchSetting& st = plan.settings[s];
      summary << st.m << ',' << st.n << ',' << fmt(st.p) << ',' << to_string(mode)
              << ',' << count << ','
              << (n_rho ? fmt(sum_rho_heu / n_rho) : "") << ','
              << fmt(sum_cuts / count);
      if (plan.timing) summary << ',' << fmt(sum_time / count);
      summary << ',' << (n_rho ? fmt(sum_rho / n_rho) : "");
      if (plan.with_mt) summary << ',' << (n_mt ? fmt(sum_mt / n_mt) : "");
      summary << '\n';
    }
  }

  return {runs.str(), summary.str()};
}

}  // namespace bilicover

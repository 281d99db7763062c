#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "covmet/bounds.hpp"
#include "covmet/channel.hpp"
#include "covmet/ghz.hpp"
#include "covmet/kraus_opt.hpp"
#include "covmet/lindblad.hpp"
#include "covmet/models.hpp"
#include "covmet/oracle.hpp"
#include "covmet/sweep.hpp"

namespace {

using namespace covmet;

struct ModelFlags {
  std::string model = "sl";
  double gamma = 0.2, gamma0 = 0.1, n_bath = 10.0;
  double g_plus = 0.0, g_minus = 0.0, g_z = 0.5;
  double a = 1.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--model", mf.model, "Noise model: sl | semigroup | zeno");
  cmd->add_option("--gamma", mf.gamma, "sl memory rate");
  cmd->add_option("--gamma0", mf.gamma0, "sl dissipation constant");
  cmd->add_option("--n-bath", mf.n_bath, "sl mean bath excitation");
  cmd->add_option("--g-plus", mf.g_plus, "semigroup absorption rate");
  cmd->add_option("--g-minus", mf.g_minus, "semigroup emission rate");
  cmd->add_option("--g-z", mf.g_z, "semigroup dephasing rate");
  cmd->add_option("--a", mf.a, "zeno gaussian decay rate");
}

void fill_config(const ModelFlags& mf, SweepConfig& cfg) {
  cfg.model = mf.model;
  cfg.sl = {mf.gamma, mf.gamma0, mf.n_bath};
  cfg.g_plus = mf.g_plus;
  cfg.g_minus = mf.g_minus;
  cfg.g_z = mf.g_z;
  cfg.zeno_a = mf.a;
}

PhaseCovariantMap random_cptp_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    PhaseCovariantMap m;
    m.eta_perp = 0.05 + 0.95 * uni(rng);
    m.eta_par = -1.0 + 2.0 * uni(rng);
    m.kappa = -1.0 + 2.0 * uni(rng);
    m.phi = 2.0 * M_PI * uni(rng);
    const ValidationReport r = validate_cptp(m);
    if (r.margins[0] >= 1e-6 && r.margins[1] >= 1e-6 && r.margins[2] >= 1e-6) {
      return m;
    }
  }
}

int run_validate(const ModelFlags& mf, bool model_mode, double ep, double el,
                 double kap, double phi, double t) {
  PhaseCovariantMap m;
  if (model_mode) {
    SweepConfig cfg;
    fill_config(mf, cfg);
    m = make_model(cfg).traj.eval(t);
  } else {
    m = {ep, el, kap, phi};
  }
  const ValidationReport r = validate_cptp(m);
  Eigen::SelfAdjointEigenSolver<CMat4> es(choi(m));
  const double min_eig = es.eigenvalues().minCoeff();
  std::printf("eta_perp %.12g\neta_par %.12g\nkappa %.12g\nphi %.12g\n", m.eta_perp,
              m.eta_par, m.kappa, m.phi);
  std::printf("margin_1 %.6e\nmargin_2 %.6e\nmargin_3 %.6e\n", r.margins[0],
              r.margins[1], r.margins[2]);
  std::printf("choi_min_eigenvalue %.6e\n", min_eig);
  std::printf("cptp %s\n", r.is_cptp ? "yes" : "no");
  return r.is_cptp ? 0 : 1;
}

int run_scan(const SweepConfig& cfg, const std::string& output) {
  const std::vector<SweepRow> rows = run_sweep(cfg);
  const std::string csv = to_csv(rows);
  if (output.empty() || output == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "cannot open output file %s\n", output.c_str());
      return 1;
    }
    out << csv;
  }
  return 0;
}

int run_crosscheck(const ModelFlags& mf, int n_probes, bool random_channel,
                   uint64_t seed) {
  if (n_probes < 1 || n_probes > 4) {
    std::fprintf(stderr, "crosscheck: N must be in [1, 4]\n");
    return 2;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<PhaseCovariantMap, double>> cases;
  if (random_channel) {
    cases.emplace_back(random_cptp_map(rng), 1.0);
  } else {
    SweepConfig cfg;
    fill_config(mf, cfg);
    const ModelBundle mb = make_model(cfg);
    for (double f : {0.05, 0.2, 0.5, 1.0, 2.0}) {
      const double t = f * mb.traj.tau_char;
      cases.emplace_back(mb.traj.eval(t), t);
    }
  }

  double worst_ghz = 0.0, worst_slack_mix = 1e300, worst_slack_num = 1e300;
  std::normal_distribution<double> gauss;
  std::printf("%-10s %-12s %-14s %-14s\n", "t", "ghz_rel_err", "mix_slack",
              "num_slack");
  for (const auto& [m, t] : cases) {
    const CMatX ghz = ghz_state(n_probes);
    std::vector<int> probes(n_probes);
    for (int i = 0; i < n_probes; ++i) probes[i] = i;
    const CMatX out = evolve(ghz, m, t, probes);
    const double f_oracle = qfi(out, omega_derivative(out, t, probes));
    const double f_formula = ghz_qfi(m, n_probes, t);
    const double rel =
        std::abs(f_formula - f_oracle) / std::max(std::abs(f_oracle), 1e-30);
    worst_ghz = std::max(worst_ghz, rel);

    // random pure probe+ancilla states against both bounds
    const double f_mix = f_upper_general(m, n_probes, t);
    MinimizeOptions opts;
    opts.seed = seed;
    const double f_num = minimize_for_map(m, n_probes, t, opts).f_num;
    const int dim = 1 << (2 * n_probes);
    double best_state = 0.0;
    for (int s = 0; s < 20; ++s) {
      CVecX psi(dim);
      for (int i = 0; i < dim; ++i) {
        psi(i) = std::complex<double>(gauss(rng), gauss(rng));
      }
      psi.normalize();
      const CMatX rho = evolve(pure_density(psi), m, t, probes);
      best_state = std::max(best_state, qfi(rho, omega_derivative(rho, t, probes)));
    }
    worst_slack_mix = std::min(worst_slack_mix, f_mix - best_state);
    worst_slack_num = std::min(worst_slack_num, f_num - best_state);
    std::printf("%-10.4g %-12.3e %-14.6e %-14.6e\n", t, rel, f_mix - best_state,
                f_num - best_state);
  }
  const bool pass =
      worst_ghz < 1e-9 && worst_slack_mix >= -1e-9 && worst_slack_num >= -1e-9;
  std::printf("max ghz formula error: %.3e\n", worst_ghz);
  std::printf("min bound slack (mixture): %.6e\n", worst_slack_mix);
  std::printf("min bound slack (numeric): %.6e\n", worst_slack_num);
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_rates(const ModelFlags& mf, double t_min, double t_max, int n_points) {
  SweepConfig cfg;
  fill_config(mf, cfg);
  const ModelBundle mb = make_model(cfg);
  std::printf("t,h,gamma_plus,gamma_minus,gamma_z\n");
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double frac = n_points == 1 ? 0.0 : static_cast<double>(i) / (n_points - 1);
    grid[i] = t_min * std::pow(t_max / t_min, frac);
    const RateValues r = rates_from_trajectory(mb.traj, grid[i]);
    std::printf("%.12g,%.12g,%.12g,%.12g,%.12g\n", grid[i], r.h, r.gamma_plus,
                r.gamma_minus, r.gamma_z);
  }
  TlmeRates rates;
  rates.h = [&](double t) { return rates_from_trajectory(mb.traj, t).h; };
  rates.gamma_plus = [&](double t) {
    return rates_from_trajectory(mb.traj, t).gamma_plus;
  };
  rates.gamma_minus = [&](double t) {
    return rates_from_trajectory(mb.traj, t).gamma_minus;
  };
  rates.gamma_z = [&](double t) { return rates_from_trajectory(mb.traj, t).gamma_z; };
  const CpDivisibility cp = is_cp_divisible(rates, grid);
  if (cp.divisible) {
    std::fprintf(stderr, "cp_divisible on the dumped grid: yes\n");
  } else {
    std::fprintf(stderr, "cp_divisible on the dumped grid: no (first violation t=%g)\n",
                 cp.first_violation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Precision limits for noisy frequency estimation under independent "
      "phase-covariant qubit noise"};
  app.require_subcommand(1);

  // validate
  auto* v = app.add_subcommand("validate", "CPTP report for a channel or model");
  ModelFlags v_mf;
  double v_ep = 1.0, v_el = 1.0, v_k = 0.0, v_phi = 0.0, v_t = 1.0;
  add_model_flags(v, v_mf);
  v->add_option("--eta-perp", v_ep, "transverse contraction");
  v->add_option("--eta-par", v_el, "longitudinal contraction");
  v->add_option("--kappa", v_k, "z displacement");
  v->add_option("--phi", v_phi, "rotation angle");
  v->add_option("--t", v_t, "evaluation time (model mode)");

  // scan
  auto* s = app.add_subcommand("scan", "Precision curve over an N grid, CSV output");
  ModelFlags s_mf;
  SweepConfig s_cfg;
  std::string s_output = "-";
  add_model_flags(s, s_mf);
  s->add_option("--method", s_cfg.method,
                "bound-analytic | bound-numeric | ghz | oracle");
  s->add_option("--n-points", s_cfg.n_points, "grid size (default 40)");
  s->add_option("--n-min", s_cfg.n_min, "smallest N (default 10)");
  s->add_option("--n-max", s_cfg.n_max, "largest N (default 1e6)");
  s->add_option("--t-lo", s_cfg.t_lo_abs, "absolute lower time bracket");
  s->add_option("--t-hi", s_cfg.t_hi_abs, "absolute upper time bracket");
  s->add_option("--t-lo-factor", s_cfg.t_lo_factor,
                "lower bracket as multiple of tau_char (default 1e-8)");
  s->add_option("--t-hi-factor", s_cfg.t_hi_factor,
                "upper bracket as multiple of tau_char (default 10)");
  s->add_option("--seed", s_cfg.seed, "optimizer restart seed (default 0)");
  s->add_option("--threads", s_cfg.threads,
                "worker threads (default COVMET_THREADS or hardware)");
  s->add_flag("--serial", s_cfg.serial, "use the serial reference path");
  s->add_option("--output,-o", s_output, "output file, - for stdout");

  // crosscheck
  auto* c = app.add_subcommand("crosscheck",
                               "Oracle agreement and bound dominance at small N");
  ModelFlags c_mf;
  int c_n = 2;
  bool c_random = false;
  uint64_t c_seed = 0;
  add_model_flags(c, c_mf);
  c->add_option("--N", c_n, "probe count, 1..4");
  c->add_flag("--random-channel", c_random, "use one random CPTP channel instead");
  c->add_option("--seed", c_seed, "seed for states (and the random channel)");

  // rates
  auto* r = app.add_subcommand("rates", "Dump time-local rates of a model as CSV");
  ModelFlags r_mf;
  double r_tmin = 0.01, r_tmax = 10.0;
  int r_n = 50;
  add_model_flags(r, r_mf);
  r->add_option("--t-min", r_tmin, "first time");
  r->add_option("--t-max", r_tmax, "last time");
  r->add_option("--n-points", r_n, "number of grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (v->parsed()) {
      return run_validate(v_mf, v->count("--model") > 0, v_ep, v_el, v_k, v_phi, v_t);
    }
    if (s->parsed()) {
      fill_config(s_mf, s_cfg);
      return run_scan(s_cfg, s_output);
    }
    if (c->parsed()) {
      return run_crosscheck(c_mf, c_n, c_random, c_seed);
    }
    if (r->parsed()) {
      return run_rates(r_mf, r_tmin, r_tmax, r_n);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

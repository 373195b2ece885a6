// Acceptance suite: one pass/fail line per criterion, exit nonzero on any
// failure. The heavy composite-master-equation runs are shared between
// criteria and executed concurrently up front.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"
#include "qbat/perturbation.hpp"
#include "qbat/protocol.hpp"
#include "qbat/validate.hpp"

using namespace qbat;

namespace {

struct Suite {
  int failures = 0;

  void check(const std::string& id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail
              << "\n";
    if (!pass) ++failures;
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

// ---- shared parameter points -------------------------------------------

ChargerParams ladder_charger(double omega, double gamma_he) {
  ChargerParams c;
  c.Delta = 0.1;
  c.delta = 0.01;
  c.gamma_hg = 0.1;
  c.gamma_eg = 0.01;
  c.gamma_he = gamma_he;
  c.Omega = omega;
  c.g = std::sqrt(std::abs(c.detuning_product()));
  return c;
}

constexpr double kGammaEg = 0.01;
constexpr int kLadderN = 50;

std::vector<double> grid_gamma_eg(double horizon, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    g[i] = horizon / kGammaEg * static_cast<double>(i) / (points - 1);
  }
  g[0] = 0.0;
  return g;
}

Trajectory annotated(Trajectory traj, const BatteryModel& b) {
  annotate_observables(traj, b);
  return traj;
}

// Linear interpolation of a per-sample quantity at the first upward crossing
// of the ergotropy through `target`.
struct Crossing {
  bool found = false;
  double time = 0.0;
  double frac = 0.0;
  std::size_t index = 0;  // right endpoint of the crossing interval
};

Crossing first_ergotropy_crossing(const Trajectory& traj, double target) {
  Crossing c;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (traj.ergotropy[i] >= target && traj.ergotropy[i - 1] < target) {
      c.found = true;
      c.index = i;
      c.frac = (target - traj.ergotropy[i - 1]) /
               (traj.ergotropy[i] - traj.ergotropy[i - 1]);
      c.time = traj.times[i - 1] + c.frac * (traj.times[i] - traj.times[i - 1]);
      return c;
    }
  }
  return c;
}

double interpolated_population(const Trajectory& traj, const Crossing& c,
                               int level) {
  const double lo = traj.populations[c.index - 1][level];
  const double hi = traj.populations[c.index][level];
  return lo + c.frac * (hi - lo);
}

double median_abs(std::vector<double> v) {
  for (double& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

}  // namespace

int main() {
  Suite suite;
  const auto t_start = std::chrono::steady_clock::now();

  const BatteryModel ladder = BatteryModel::uniform_ladder(kLadderN, 1.0);
  const BatteryModel spin = BatteryModel::large_spin(25, 1.0);
  const BatteryModel ho = BatteryModel::truncated_ho(50, 1.0);
  const DensityMatrix ladder_ground =
      DensityMatrix::level_projector(ladder.dim, 0);

  const std::vector<double> ladder_grid = grid_gamma_eg(4000.0, 800);
  const std::vector<double> spin_grid = grid_gamma_eg(3000.0, 600);

  // ---- heavy composite runs, computed once and shared -------------------
  std::map<std::string, Trajectory> full;
  {
    struct Job {
      std::string key;
      double omega;
      double gamma_he;
      const BatteryModel* battery;
      const std::vector<double>* grid;
    };
    const std::vector<Job> jobs = {
        {"ladder_omega0.002", 0.002, 0.0, &ladder, &ladder_grid},
        {"ladder_omega0.005", 0.005, 0.0, &ladder, &ladder_grid},
        {"ladder_omega0.01", 0.01, 0.0, &ladder, &ladder_grid},
        {"ladder_omega0.005_he", 0.005, 0.01, &ladder, &ladder_grid},
        {"spin_ground", 0.01, 0.01, &spin, &spin_grid},
    };
    std::vector<std::future<Trajectory>> futures;
    for (const auto& job : jobs) {
      futures.push_back(std::async(std::launch::async, [&job] {
        ChargerParams c = ladder_charger(job.omega, job.gamma_he);
        if (job.battery->kind == BatteryKind::LargeSpin) {
          c.g = optimal_coupling(*job.battery, c, job.battery->dim / 2);
        }
        return propagate_composite(
            *job.battery, c,
            DensityMatrix::level_projector(job.battery->dim, 0), *job.grid);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      full[jobs[i].key] = annotated(futures[i].get(), *jobs[i].battery);
    }
  }

  auto effective_ladder = [&](double omega, double gamma_he,
                              const DensityMatrix& rho0) {
    const ChargerParams c = ladder_charger(omega, gamma_he);
    return annotated(
        propagate(effective_battery_generator(ladder, c), rho0, ladder_grid),
        ladder);
  };

  // ======================================================================
  // 1. Top-level population at the ergotropy crossings 25, 30, 35 E_B.
  // ======================================================================
  {
    const Trajectory& run = full.at("ladder_omega0.005");
    const struct {
      double level;
      double lo, hi;
    } targets[] = {{25.0, 0.0025, 0.01}, {30.0, 0.03, 0.07},
                   {35.0, 0.09, 0.21}};
    for (const auto& t : targets) {
      const Crossing c = first_ergotropy_crossing(run, t.level);
      if (!c.found) {
        suite.check("1", false,
                    "ergotropy " + fmt(t.level) + " E_B never crossed");
        continue;
      }
      const double p_top = interpolated_population(run, c, ladder.dim - 1);
      suite.check(
          "1", p_top >= t.lo && p_top <= t.hi,
          "top-level population " + fmt(p_top) + " at ergotropy " +
              fmt(t.level) + " E_B, expected in [" + fmt(t.lo) + ", " +
              fmt(t.hi) + "]");
    }
  }

  // ======================================================================
  // 2. Population inversion: most-populated level first reaches the top
  //    while the ergotropy is in [29.8, 31.8] E_B.
  // ======================================================================
  {
    const Trajectory& run = full.at("ladder_omega0.005");
    bool found = false;
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (run.most_populated[i] == ladder.dim - 1) {
        found = true;
        const double e = run.ergotropy[i];
        suite.check("2", e >= 29.8 && e <= 31.8,
                    "top level first most-populated at ergotropy " + fmt(e) +
                        " E_B (window [29.8, 31.8])");
        break;
      }
    }
    if (!found) {
      suite.check("2", false, "top level never became the most populated");
    }
  }

  // ======================================================================
  // 3. Effective-full agreement at Omega = 0.05 gamma_hg and the
  //    monotone growth of the deviation with Omega.
  // ======================================================================
  {
    std::map<double, double> deviation;
    for (double omega : {0.002, 0.005, 0.01}) {
      std::ostringstream key;
      key << "ladder_omega" << omega;
      const Trajectory& f = full.at(key.str());
      const Trajectory e = effective_ladder(omega, 0.0, ladder_ground);
      double dev = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        dev = std::max(dev, std::abs(f.stored_energy[i] - e.stored_energy[i]) /
                                (kLadderN * 1.0));
      }
      deviation[omega] = dev;
    }
    suite.check("3", deviation[0.005] <= 0.05,
                "max |dE_full - dE_eff| / (N E_B) = " + fmt(deviation[0.005]) +
                    " at Omega = 0.05 gamma_hg (bound 0.05)");
    suite.check("3",
                deviation[0.002] < deviation[0.005] &&
                    deviation[0.005] < deviation[0.01],
                "deviation strictly increasing in Omega: " +
                    fmt(deviation[0.002]) + " < " + fmt(deviation[0.005]) +
                    " < " + fmt(deviation[0.01]));
  }

  // ======================================================================
  // 4. Large-spin steady ergotropy >= 0.995 * 2J E_B for every beta, and a
  //    full-engine spot check at beta = inf within 1%.
  // ======================================================================
  {
    ChargerParams c = ladder_charger(0.01, 0.01);
    c.g = optimal_coupling(spin, c, spin.dim / 2);  // m = 0 optimum
    const LindbladGenerator gen = effective_battery_generator(spin, c);
    double eff_inf_steady = 0.0;
    for (double beta :
         {std::numeric_limits<double>::infinity(), 2.0, 1.0}) {
      const Trajectory run =
          annotated(propagate(gen, thermal_state(spin, beta), spin_grid), spin);
      if (std::isinf(beta)) eff_inf_steady = run.ergotropy.back();
      suite.check("4", run.ergotropy.back() >= 0.995 * spin.max_ergotropy(),
                  "steady ergotropy " + fmt(run.ergotropy.back()) +
                      " E_B at beta = " + fmt(beta) + " (bound " +
                      fmt(0.995 * spin.max_ergotropy()) + ")");
    }
    const double full_steady = full.at("spin_ground").ergotropy.back();
    suite.check("4",
                std::abs(full_steady - eff_inf_steady) / eff_inf_steady <= 0.01,
                "full-engine spot check: " + fmt(full_steady) + " vs " +
                    fmt(eff_inf_steady) + " E_B (within 1%)");
  }

  // ======================================================================
  // 5. Large-spin optima: the m=-J curve leads early, the m=0 curve
  //    overtakes later (the ergotropy curves cross).
  // ======================================================================
  {
    ChargerParams c_edge = ladder_charger(0.01, 0.01);
    c_edge.g = optimal_coupling(spin, c_edge, 0);
    ChargerParams c_mid = ladder_charger(0.01, 0.01);
    c_mid.g = optimal_coupling(spin, c_mid, spin.dim / 2);
    const DensityMatrix spin_ground =
        DensityMatrix::level_projector(spin.dim, 0);
    const Trajectory edge = annotated(
        propagate(effective_battery_generator(spin, c_edge), spin_ground,
                  spin_grid),
        spin);
    const Trajectory mid = annotated(
        propagate(effective_battery_generator(spin, c_mid), spin_ground,
                  spin_grid),
        spin);
    bool edge_led = false;
    bool overtaken = false;
    double cross_time = 0.0;
    for (std::size_t i = 1; i < edge.size(); ++i) {
      const double gap = edge.ergotropy[i] - mid.ergotropy[i];
      if (!edge_led && gap > 0.1) edge_led = true;
      if (edge_led && !overtaken && gap < 0.0) {
        overtaken = true;
        cross_time = edge.times[i] * kGammaEg;
      }
    }
    suite.check("5", edge_led && overtaken,
                edge_led
                    ? (overtaken ? "ergotropy curves cross at gamma_eg t = " +
                                       fmt(cross_time)
                                 : "m=-J lead never overtaken")
                    : "m=-J optimum never led");
  }

  // ======================================================================
  // 6. Oscillator quench protocol: acceleration, plateau, saturation of the
  //    multi-quench gain, steady ergotropy for thermal starts.
  // ======================================================================
  {
    const ChargerParams c = ladder_charger(0.01, 0.01);
    const DensityMatrix ho_ground = DensityMatrix::level_projector(ho.dim, 0);
    const std::vector<double> long_grid = grid_gamma_eg(30000.0, 1200);
    const std::vector<double> quench_grid = grid_gamma_eg(8000.0, 800);

    ChargerParams fixed = c;
    fixed.g = optimal_coupling(ho, c, 0);
    const Trajectory none = annotated(
        propagate(effective_battery_generator(ho, fixed), ho_ground,
                  long_grid),
        ho);
    const double t_none =
        saturation_time(none, ho, defaults::saturation_threshold).time *
        kGammaEg;

    auto quench_T = [&](std::vector<double> taus_gamma_eg) {
      std::vector<double> taus;
      for (double tau : taus_gamma_eg) taus.push_back(tau / kGammaEg);
      QuenchRun run = run_quenched(ho, c, ho_ground, taus, quench_grid, {},
                                   /*full_engine=*/false);
      Trajectory traj = annotated(std::move(run.trajectory), ho);
      return saturation_time(traj, ho, defaults::saturation_threshold, taus)
                 .time *
             kGammaEg;
    };

    const double t_500 = quench_T({500.0});
    suite.check("6", t_500 < t_none,
                "saturation gamma_eg T: quench at 500 gives " + fmt(t_500) +
                    " vs " + fmt(t_none) + " without");

    double t_min = t_500, t_max = t_500;
    for (double tau : {625.0, 750.0, 875.0, 1000.0}) {
      const double t = quench_T({tau});
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
    }
    suite.check("6", t_max / t_min - 1.0 <= 0.15,
                "T varies by " + fmt(100.0 * (t_max / t_min - 1.0)) +
                    "% over tau in [500, 1000] (bound 15%)");

    const double t_two = quench_T({500.0, 1000.0});
    suite.check("6", t_two <= t_500,
                "two quenches: T = " + fmt(t_two) + " <= one quench " +
                    fmt(t_500));
    suite.check("6", t_500 - t_two <= 0.5 * (t_none - t_500),
                "quench gain saturates: second gap " + fmt(t_500 - t_two) +
                    " much smaller than first " + fmt(t_none - t_500));

    for (double beta : {std::numeric_limits<double>::infinity(), 2.0, 1.0}) {
      const std::vector<double> taus = {500.0 / kGammaEg};
      QuenchRun run = run_quenched(ho, c, thermal_state(ho, beta), taus,
                                   quench_grid, {}, false);
      Trajectory traj = annotated(std::move(run.trajectory), ho);
      suite.check("6", traj.ergotropy.back() >= 0.994 * ho.max_ergotropy(),
                  "steady ergotropy " + fmt(traj.ergotropy.back()) +
                      " E_B at beta = " + fmt(beta) + " (bound " +
                      fmt(0.994 * ho.max_ergotropy()) + ")");
    }
  }

  // ======================================================================
  // 7. Oracle equivalences (resolvent forms, golden-rule series,
  //    vectorized superoperator).
  // ======================================================================
  {
    const ValidationReport report = run_validation();
    for (const std::string name :
         {"resolvent_vs_closed_forms_rel", "fgr_series_residual",
          "vectorized_matches_direct_rhs",
          "vectorized_propagation_agreement"}) {
      bool seen = false;
      for (const auto& c : report.checks) {
        if (c.name == name) {
          seen = true;
          suite.check("7", c.pass,
                      c.name + " = " + fmt(c.value) + " (bound " +
                          fmt(c.bound) + ")");
        }
      }
      if (!seen) suite.check("7", false, name + " missing from validation");
    }
  }

  // ======================================================================
  // 8. Discharging diagnostics and the marginal effect of gamma_he.
  // ======================================================================
  {
    const ChargerParams c = ladder_charger(0.005, 0.01);
    bool ratios_ok = true;
    double worst = 0.0;
    for (int n : {10, 25, 40}) {
      const auto r = discharging_ratios(ladder, c, n);
      worst = std::max({worst, r.dephasing_ratio, r.decay_ratio});
      ratios_ok = ratios_ok && r.dephasing_ratio < 0.05 && r.decay_ratio < 0.05;
    }
    suite.check("8", ratios_ok,
                "dephasing/decay ratios at mid-ladder n: worst " + fmt(worst) +
                    " (bound 0.05)");

    const double e_without = full.at("ladder_omega0.005").ergotropy.back();
    const double e_with = full.at("ladder_omega0.005_he").ergotropy.back();
    const double rel =
        std::abs(e_without - e_with) / std::max(e_without, e_with);
    suite.check("8", rel < 0.01,
                "steady ergotropy with/without the h->e channel: " +
                    fmt(e_with) + " vs " + fmt(e_without) + " E_B (" +
                    fmt(100.0 * rel) + "%, bound 1%)");
  }

  // ======================================================================
  // 9. Always-on property suite.
  // ======================================================================
  {
    // (a) State invariants along the composite run (enforced at every grid
    // point during propagation; re-measured here on the battery states).
    {
      const Trajectory& run = full.at("ladder_omega0.005");
      double worst_trace = 0.0, worst_negative = 0.0, worst_asym = 0.0;
      for (const auto& s : run.states) {
        worst_trace =
            std::max(worst_trace, std::abs(std::real(s.trace()) - 1.0));
        worst_asym =
            std::max(worst_asym, (s - s.adjoint()).cwiseAbs().maxCoeff());
        const auto eig = hermitian_eigh(0.5 * (s + s.adjoint()));
        worst_negative = std::max(worst_negative, -eig.eigenvalues.minCoeff());
      }
      suite.check("9",
                  worst_trace <= 1e-8 && worst_asym <= 1e-9 &&
                      worst_negative <= 1e-7,
                  "trace/Hermiticity/positivity drift: " + fmt(worst_trace) +
                      " / " + fmt(worst_asym) + " / " + fmt(worst_negative));
      double min_ground = 1.0;
      for (double p : run.qutrit_ground_population) {
        min_ground = std::min(min_ground, p);
      }
      suite.check("9", min_ground >= 0.9,
                  "qutrit ground-state population stays >= 0.9 (min " +
                      fmt(min_ground) + ")");
    }

    // (b) Unidirectional flow: cumulative tail populations nondecreasing.
    {
      const Trajectory run = effective_ladder(0.005, 0.0, ladder_ground);
      double worst = 0.0;
      for (std::size_t i = 1; i < run.size(); ++i) {
        for (int k = 0; k < ladder.dim; ++k) {
          worst = std::max(worst,
                           run.populations[i - 1].tail(ladder.dim - k).sum() -
                               run.populations[i].tail(ladder.dim - k).sum());
        }
      }
      suite.check("9", worst <= 1e-8,
                  "max decrease of cumulative tail populations " + fmt(worst));
    }

    // (c) Unique effective steady state: the top projector, from both a
    // ground and a maximally mixed start, for every battery model.
    {
      bool ok = true;
      std::string detail;
      for (const BatteryModel* b : {&ladder, &spin, &ho}) {
        ChargerParams c = ladder_charger(0.01, 0.0);
        c.g = optimal_coupling(*b, c, 0);
        const LindbladGenerator gen = effective_battery_generator(*b, c);
        const std::vector<double> long_grid = grid_gamma_eg(60000.0, 4);
        for (int start = 0; start < 2; ++start) {
          const DensityMatrix rho0 =
              start == 0 ? DensityMatrix::level_projector(b->dim, 0)
                         : DensityMatrix::from_populations(
                               RealVector::Constant(b->dim, 1.0 / b->dim));
          const Trajectory run =
              annotated(propagate(gen, rho0, long_grid), *b);
          const double top = run.populations.back()[b->dim - 1];
          if (top < 0.999) {
            ok = false;
            detail = to_string(b->kind) + " start " + std::to_string(start) +
                     " top population " + fmt(top);
          }
        }
      }
      suite.check("9", ok,
                  ok ? "unique steady state = top projector for all models"
                     : detail);
    }

    // (d) Ergotropy nonnegativity and spectrum-only dependence.
    {
      std::mt19937 rng(5550123);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      auto random_complex = [&](int d) {
        ComplexMatrix g(d, d);
        for (int j = 0; j < d; ++j) {
          for (int i = 0; i < d; ++i) g(i, j) = Complex(u(rng), u(rng));
        }
        return g;
      };
      bool ok = true;
      for (int rep = 0; rep < 50 && ok; ++rep) {
        ComplexMatrix g = random_complex(spin.dim);
        ComplexMatrix raw = g * g.adjoint();
        raw /= raw.trace();
        const DensityMatrix rho{raw};
        ok = ok && ergotropy(rho, spin) >= -1e-9;
        const ComplexMatrix q =
            Eigen::HouseholderQR<ComplexMatrix>(random_complex(spin.dim))
                .householderQ();
        const DensityMatrix rotated{ComplexMatrix(q * rho.rho * q.adjoint())};
        const auto sa = passive_state(rho, spin);
        const auto sb = passive_state(rotated, spin);
        ok = ok &&
             (sa.populations - sb.populations).cwiseAbs().maxCoeff() < 1e-9;
      }
      suite.check("9", ok, "ergotropy nonnegative and spectrum-only");
    }

    // (e) gamma_eff unimodality with the maximum at the analytic optimum.
    {
      bool ok = true;
      for (const BatteryModel* b : {&ladder, &spin, &ho}) {
        const ChargerParams base = ladder_charger(0.005, 0.01);
        for (int n : {0, b->dim / 2, b->dim - 2}) {
          const double g_opt = optimal_coupling(*b, base, n);
          double best = -1.0, best_g = 0.0, prev = -1.0;
          bool rising = true;
          int humps = 0;
          for (int k = 0; k < 200; ++k) {
            ChargerParams p = base;
            p.g = g_opt * std::pow(10.0, -2.0 + 4.0 * k / 199.0);
            const double val = gamma_eff(*b, p, n);
            if (val > best) {
              best = val;
              best_g = p.g;
            }
            if (prev >= 0.0) {
              if (rising && val < prev) {
                rising = false;
                ++humps;
              } else if (!rising && val > prev) {
                ++humps;
              }
            }
            prev = val;
          }
          ok = ok && humps == 1 &&
               std::abs(std::log10(best_g / g_opt)) <= 4.0 / 199.0 + 1e-12;
        }
      }
      suite.check("9", ok, "gamma_eff unimodal in g, maximum at the optimum");
    }

    // (f) Early ergotropy growth speeds up with temperature: ergotropy at
    // the gamma_eg t = 200 checkpoint increases as beta decreases.
    {
      std::vector<double> at_checkpoint;
      for (double beta :
           {std::numeric_limits<double>::infinity(), 2.0, 1.0}) {
        const Trajectory run =
            effective_ladder(0.005, 0.01, thermal_state(ladder, beta));
        const double t_mark = 200.0 / kGammaEg;
        double value = 0.0;
        for (std::size_t i = 1; i < run.size(); ++i) {
          if (run.times[i] >= t_mark) {
            const double f = (t_mark - run.times[i - 1]) /
                             (run.times[i] - run.times[i - 1]);
            value = run.ergotropy[i - 1] +
                    f * (run.ergotropy[i] - run.ergotropy[i - 1]);
            break;
          }
        }
        at_checkpoint.push_back(value);
      }
      suite.check("9",
                  at_checkpoint[0] < at_checkpoint[1] &&
                      at_checkpoint[1] < at_checkpoint[2],
                  "ergotropy at gamma_eg t = 200: beta=inf " +
                      fmt(at_checkpoint[0]) + " < beta=2 " +
                      fmt(at_checkpoint[1]) + " < beta=1 " +
                      fmt(at_checkpoint[2]));
    }

    // (g) Two-stage ergotropy slope on the fig-2 run: a pronounced upward
    // derivative jump inside the ergotropy window [28, 33] E_B, while the
    // stored energy stays smooth (its second difference never turns
    // significantly positive).
    {
      const Trajectory& run = full.at("ladder_omega0.005");
      std::vector<double> d2e, d2de;
      for (std::size_t i = 1; i + 1 < run.size(); ++i) {
        d2e.push_back(run.ergotropy[i + 1] - 2.0 * run.ergotropy[i] +
                      run.ergotropy[i - 1]);
        d2de.push_back(run.stored_energy[i + 1] - 2.0 * run.stored_energy[i] +
                       run.stored_energy[i - 1]);
      }
      double window_jump = 0.0;
      std::vector<double> window_d2de;
      for (std::size_t i = 1; i + 1 < run.size(); ++i) {
        if (run.ergotropy[i] >= 28.0 && run.ergotropy[i] <= 33.0) {
          window_jump = std::max(window_jump, d2e[i - 1]);
          window_d2de.push_back(d2de[i - 1]);
        }
      }
      const double noise = median_abs(d2e);
      suite.check("9", window_jump >= 5.0 * noise,
                  "ergotropy slope jump in [28, 33] E_B: " + fmt(window_jump) +
                      " vs noise " + fmt(noise));
      // Around the inversion the stored energy keeps curving one way only:
      // no positive second difference beyond the in-window noise floor.
      const double de_noise = median_abs(window_d2de);
      int positive_kinks = 0;
      double de_worst_positive = 0.0;
      for (double v : window_d2de) {
        de_worst_positive = std::max(de_worst_positive, v);
        if (v > 3.0 * de_noise) ++positive_kinks;
      }
      suite.check("9", positive_kinks == 0,
                  "stored energy smooth through the inversion window: max "
                  "positive second difference " +
                      fmt(de_worst_positive) + ", noise " + fmt(de_noise));
    }
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
  std::cout << (suite.failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL")
            << " (" << elapsed << " s)\n";
  return suite.failures == 0 ? 0 : 1;
}

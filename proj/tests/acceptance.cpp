// Copyright 2026 The qreservoir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks. Each test prints one "[PASS] name" or "[FAIL] name" line.
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>

#include "qres/config.hpp"
#include "qres/harness.hpp"
#include "qres/io.hpp"
#include "qres/lindblad.hpp"
#include "qres/observables.hpp"
#include "qres/reservoir_model.hpp"
#include "qres/shadows.hpp"
#include "qres/tomography.hpp"
#include "qres/units.hpp"

namespace qres {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using units::khz;
using units::mhz;

std::string scenario_path(const std::string& name) { return std::string(QRES_SOURCE_DIR) + "/scenarios/" + name; }

RunOptions in_memory() {
  RunOptions o;
  o.write_files = false;
  return o;
}

Matrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Index of the recorded time closest to t.
std::size_t index_at(const std::vector<double>& times, double t) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  return best;
}

TEST(Acceptance, RateFormulas) {
  const double on = lorentzian_rate(mhz(0.75), mhz(1.5), 0.0);
  EXPECT_LT(std::abs(on / mhz(1.5) - 1.0), 1e-9);
  const double off = lorentzian_rate(mhz(0.75), mhz(1.5), mhz(12.0));
  std::printf("  rate at 2J: 2pi x %.3f kHz\n", off / khz(1.0));
  EXPECT_NEAR(off / khz(1.0), 5.84, 0.005);
  EXPECT_LE(std::abs(off / khz(6.0) - 1.0), 0.05);
}

TEST(Acceptance, WeakCouplingEquivalence) {
  const double kappa = mhz(1.5);
  const double g = kappa / 20.0;
  LatticeSpec lattice;
  lattice.n_sites = 1;
  for (double x = -3.0; x <= 3.0 + 1e-9; x += 1.0) {
    const double delta = x * kappa;
    const LiouvillianModel m = build_model(lattice, {{ReservoirKind::kLoss, "Q1", g, delta, kappa, 0.0}}, {}, 3);
    Matrix rho0 = Matrix::Zero(m.layout().total_dim(), m.layout().total_dim());
    rho0(m.layout().total_dim() / 2, m.layout().total_dim() / 2) = 1.0;  // |e> with the resonator in vacuum
    const double gamma = lorentzian_rate(g, kappa, delta);
    const double t_end = 0.5 / gamma;
    const double t_start = 10.0 / kappa;  // past the resonator transient
    std::vector<double> ts, ys;
    EvolveOptions opt;
    opt.dt_max = 2e-9;
    opt.record_stride = 50;
    const int n_samples = 200;
    int next = 0;
    evolve_observed(m, DensityMatrix(OperatorMatrix(m.layout(), rho0)), t_end, opt,
                    [&](double t, const DensityMatrix& rho) {
                      if (t < t_start || t < next * t_end / n_samples) return;
                      ++next;
                      ts.push_back(t);
                      ys.push_back(std::log(qubit_register(rho).matrix()(1, 1).real()));
                    });
    // Least-squares slope of log P_e.
    const double n = ts.size();
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      st += ts[i];
      sy += ys[i];
      stt += ts[i] * ts[i];
      sty += ts[i] * ys[i];
    }
    const double fitted = -(n * sty - st * sy) / (n * stt - st * st);
    std::printf("  delta = %+.0f kappa: fitted %.4g /s, Lorentzian %.4g /s (ratio %.4f)\n", x, fitted, gamma,
                fitted / gamma);
    EXPECT_LT(std::abs(fitted / gamma - 1.0), 0.10) << "delta/kappa = " << x;
  }
}

TEST(Acceptance, PumpOnlyDynamics) {
  const ScenarioResult r = run_scenario(load_scenario(scenario_path("fig2_pump.toml")), in_memory());
  ASSERT_EQ(r.runs.size(), 1u);
  const TraceRun& run = r.runs[0];
  std::size_t peak = 0;
  for (std::size_t i = 0; i < run.series.size(); ++i)
    if (run.series[i].fidelity > run.series[peak].fidelity) peak = i;
  const double t_peak = run.times[peak] / units::us(1.0);
  std::printf("  peak fidelity %.4f at %.3f us\n", run.series[peak].fidelity, t_peak);
  EXPECT_NEAR(run.series[peak].fidelity, 0.87, 0.03);
  EXPECT_GT(t_peak, 0.5);
  EXPECT_LT(t_peak, 1.5);
  // Late-time p_ee grows monotonically.
  for (std::size_t i = index_at(run.times, 2.0 * run.times[peak]) + 1; i < run.series.size(); ++i)
    EXPECT_GE(run.series[i].populations.ee, run.series[i - 1].populations.ee - 1e-12) << "t = " << run.times[i];
}

TEST(Acceptance, PumpLossStabilization) {
  ScenarioConfig c = load_scenario(scenario_path("fig3_stabilize.toml"));
  c.schedule.duration = units::us(10.0);
  c.schedule.check_dt = false;
  const ScenarioResult r = run_scenario(c, in_memory());
  ASSERT_EQ(r.runs.size(), 4u);
  for (const auto& run : r.runs) {
    const std::size_t i = index_at(run.times, units::us(2.0));
    std::printf("  %s: F(2 us) = %.4f, F(10 us) = %.4f\n", run.initial.c_str(), run.series[i].fidelity,
                run.series.back().fidelity);
    EXPECT_NEAR(run.series[i].fidelity, 0.908, 0.02) << run.initial;
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < r.runs.size(); ++a)
    for (std::size_t b = a + 1; b < r.runs.size(); ++b)
      worst = std::max(worst, trace_distance(r.runs[a].final_state.matrix(), r.runs[b].final_state.matrix()));
  std::printf("  largest pairwise trace distance at 10 us: %.3g\n", worst);
  EXPECT_LT(worst, 1e-3);
}

TEST(Acceptance, PlusStateConfiguration) {
  const ScenarioResult r = run_scenario(load_scenario(scenario_path("appF_plus.toml")), in_memory());
  ASSERT_FALSE(r.runs.empty());
  const double f = r.runs[0].series.back().fidelity;
  std::printf("  fidelity to |+> at %.1f us: %.4f\n", r.runs[0].times.back() / units::us(1.0), f);
  EXPECT_NEAR(f, 0.885, 0.02);
}

TEST(Acceptance, InfidelityBudget) {
  const json r = run_ablation(load_scenario(scenario_path("ablation.toml")), kAblationToggles, in_memory());
  std::map<std::string, double> delta;
  for (const auto& t : r["toggles"]) delta[t["toggle"]] = t["delta"].get<double>();
  std::printf("  baseline %.4f, thermal +%.4f, intrinsic +%.4f\n", r["baseline_fidelity"].get<double>(),
              delta["zero_resonator_thermal"], delta["zero_intrinsic_decay"]);
  EXPECT_NEAR(delta["zero_resonator_thermal"], 0.055, 0.02);
  EXPECT_GE(delta["zero_intrinsic_decay"], 0.02 - 0.01);
  EXPECT_LE(delta["zero_intrinsic_decay"], 0.03 + 0.01);
}

TEST(Acceptance, DetuningMapOptimum) {
  const SweepConfig s = load_sweep(scenario_path("fig3d_sweep.toml"));
  ASSERT_EQ(s.axes.size(), 2u);
  ASSERT_EQ(s.axes[0].values.size(), 21u);
  ASSERT_EQ(s.axes[1].values.size(), 21u);
  const double cell = std::get<double>(s.axes[0].values[1]) - std::get<double>(s.axes[0].values[0]);
  const auto rows = run_sweep(s, in_memory());
  ASSERT_EQ(rows.size(), 441u);
  const SweepRow* best = &rows[0];
  for (const auto& r : rows)
    if (r.status == "ok" && r.obs.fidelity > best->obs.fidelity) best = &r;
  const double ds = std::stod(best->axis_values[0]), dd = std::stod(best->axis_values[1]);
  std::printf("  argmax at (%.2f, %.2f) MHz, fidelity %.4f\n", ds, dd, best->obs.fidelity);
  EXPECT_LE(std::abs(ds + 6.0), cell + 1e-9);
  EXPECT_LE(std::abs(dd - 6.0), cell + 1e-9);
  EXPECT_GT(best->obs.fidelity, 0.90);
}

TEST(Acceptance, SharedModeRidge) {
  const SweepConfig s = load_sweep(scenario_path("shared_sweep.toml"));
  const double kappa = s.base.model.shared->linewidth / mhz(1.0);
  const auto rows = run_sweep(s, in_memory());
  ASSERT_FALSE(rows.empty());
  std::map<std::pair<long, long>, const SweepRow*> at;  // keyed in units of 1e-6 MHz
  auto key = [](double a, double b) { return std::make_pair(std::lround(a * 1e6), std::lround(b * 1e6)); };
  // Lines of constant residual oscillation delta_S + delta_D; the ridge is the one with the lowest mean fidelity.
  std::map<long, std::pair<double, int>> lines;
  for (const auto& r : rows) {
    ASSERT_EQ(r.status, "ok") << r.message;
    const double ds = std::stod(r.axis_values[0]), dd = std::stod(r.axis_values[1]);
    at[key(ds, dd)] = &r;
    auto& l = lines[std::lround((ds + dd) * 1e6)];
    l.first += r.obs.fidelity;
    ++l.second;
  }
  long ridge = 0;
  double lowest = 2.0;
  for (const auto& [omega, sum] : lines)
    if (sum.second >= 3 && sum.first / sum.second < lowest) {
      lowest = sum.first / sum.second;
      ridge = omega;
    }
  std::printf("  ridge at delta_S + delta_D = %.3f MHz, mean fidelity %.4f\n", ridge * 1e-6, lowest);
  EXPECT_NEAR(ridge * 1e-6, 0.0, 1e-6);

  // Ridge core: points within kappa/2 of the (-J, +J) working point.
  int core = 0;
  for (const auto& [k, r] : at) {
    const double ds = k.first * 1e-6, dd = k.second * 1e-6;
    if (std::lround((ds + dd) * 1e6) != ridge || std::abs(ds + 6.0) > kappa / 2 + 1e-9) continue;
    ++core;
    std::printf("  ridge (%.2f, %.2f): F %.4f XX %.3f YY %.3f ZZ %.3f\n", ds, dd, r->obs.fidelity, r->obs.xx,
                r->obs.yy, r->obs.zz);
    EXPECT_NEAR(r->obs.fidelity, 0.50, 0.05);
    EXPECT_LE(r->obs.yy, -0.8);
    EXPECT_LE(std::abs(r->obs.xx), 0.1);
    EXPECT_LE(std::abs(r->obs.zz), 0.1);
  }
  EXPECT_GE(core, 1);

  // Away from the ridge: the cross through (-J, +J) where one tone is detuned so that
  // the residual oscillation |delta_S + delta_D| is at least kappa.
  int away = 0;
  for (const auto& [k, r] : at) {
    const double ds = k.first * 1e-6, dd = k.second * 1e-6;
    const bool on_cross = std::abs(ds + 6.0) < 1e-9 || std::abs(dd - 6.0) < 1e-9;
    if (!on_cross || std::abs(ds + dd) < kappa - 1e-9) continue;
    ++away;
    std::printf("  off-ridge (%.2f, %.2f), mismatch %.2f MHz: F %.4f\n", ds, dd, std::abs(ds + dd), r->obs.fidelity);
    EXPECT_GE(r->obs.fidelity, 0.85) << "at (" << ds << ", " << dd << ")";
  }
  EXPECT_GE(away, 4);

  // X-state identities.
  const Matrix rho_x = (Matrix::Identity(4, 4) - pauli_operator("YY")) / 4.0;
  EXPECT_LT(std::abs((rho_x * rho_x).trace().real() - 0.5), 1e-12);
  Vector yp(2), ym(2);
  yp << 1.0, Complex(0, 1);
  ym << 1.0, Complex(0, -1);
  yp /= std::sqrt(2.0);
  ym /= std::sqrt(2.0);
  auto kron = [](const Vector& x, const Vector& y) {
    Vector out(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(2 * i + j) = x(i) * y(j);
    return out;
  };
  const Vector a = kron(yp, ym), b = kron(ym, yp);
  const Matrix separable = 0.5 * (a * a.adjoint() + b * b.adjoint());
  EXPECT_LT((separable - rho_x).cwiseAbs().maxCoeff(), 1e-12);
  const Vector phi_plus = (Vector::Unit(4, 0) + Vector::Unit(4, 3)) / std::sqrt(2.0);
  const Matrix bell_mix = 0.5 * (phi_plus * phi_plus.adjoint() + bell_minus() * bell_minus().adjoint());
  EXPECT_LT((bell_mix - rho_x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(std::abs((psi_minus({}).adjoint() * rho_x * psi_minus({}))(0).real() - 0.5), 1e-12);
}

Matrix exhaustive_mean(const Matrix& rho, int n) {
  Matrix sum = Matrix::Zero(1 << n, 1 << n);
  for (int id = 0; id < setting_count(n); ++id) {
    const CliffordSetting s = setting_from_id(id, n);
    const RealVector p = setting_probabilities(rho, s, {});
    for (int o = 0; o < (1 << n); ++o) {
      std::vector<std::uint8_t> bits(n);
      for (int q = 0; q < n; ++q) bits[q] = (o >> (n - 1 - q)) & 1;
      sum += p(o) * snapshot(s, bits).matrix();
    }
  }
  return sum / static_cast<double>(setting_count(n));
}

TEST(Acceptance, ShadowUnbiasedness) {
  std::mt19937_64 rng(2024);
  for (int n : {1, 2})
    for (int k = 0; k < 10; ++k) {
      const Matrix rho = random_density(1 << n, rng);
      EXPECT_LT((exhaustive_mean(rho, n) - rho).cwiseAbs().maxCoeff(), 1e-12);
    }

  ScenarioConfig c = load_scenario(scenario_path("est_shadow_standard.toml"));
  c.estimation.noise_preset = "ideal";
  c.estimation.flip = 0.0;
  c.estimation.rotation = {};
  const json r = run_shadows(c, in_memory());
  ASSERT_EQ(r["N_S"], 90000);
  for (const char* name : {"p_gg", "p_plus", "p_minus", "p_ee"}) {
    const double se = r["estimates"][name]["stderr"].get<double>();
    std::printf("  %s stderr %.5f\n", name, se);
    EXPECT_GE(se, 0.002 / 2.0) << name;
    EXPECT_LE(se, 0.004 * 2.0) << name;
  }
  const double se = r["estimates"]["purity"]["stderr"].get<double>();
  std::printf("  purity stderr %.5f\n", se);
  EXPECT_GE(se, 0.008 / 2.0);
  EXPECT_LE(se, 0.02 * 2.0);
}

TEST(Acceptance, RobustShadowsUnderReadoutNoise) {
  const json robust = run_shadows(load_scenario(scenario_path("est_shadow_robust.toml")), in_memory());
  const json standard = run_shadows(load_scenario(scenario_path("est_shadow_standard.toml")), in_memory());
  const json& fr = robust["estimates"]["fidelity"];
  const json& fs_ = standard["estimates"]["fidelity"];
  std::printf("  truth %.4f; robust %.4f +- %.4f (%.2f sigma); standard %.4f +- %.4f (%.2f sigma)\n",
              fr["truth"].get<double>(), fr["value"].get<double>(), fr["stderr"].get<double>(),
              fr["deviation_sigma"].get<double>(), fs_["value"].get<double>(), fs_["stderr"].get<double>(),
              fs_["deviation_sigma"].get<double>());
  EXPECT_LT(std::abs(fr["deviation_sigma"].get<double>()), 3.0);
  EXPECT_GT(std::abs(fs_["deviation_sigma"].get<double>()), 3.0);

  Matrix g = Matrix::Zero(4, 4);
  g(0, 0) = 1.0;
  const CalibrationResult cal = calibrate(generate_shadow_dataset(g, 90000, 1, {}, AssignmentMatrix::ideal(2), 77));
  for (int q = 0; q < 2; ++q) {
    std::printf("  noiseless G_%d = %.5f\n", q + 1, cal.g[q]);
    EXPECT_NEAR(cal.g[q], 1.0, 0.005);
  }
}

TEST(Acceptance, Tomography) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    Matrix h = random_density(4, rng) - 0.3 * random_density(4, rng);
    h /= h.trace();
    const DensityMatrix once = mle_project({SpaceLayout::qubits(2), h});
    const DensityMatrix twice = mle_project(once.op());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(once.matrix()).eigenvalues().minCoeff(), -1e-10);
    EXPECT_NEAR(once.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_LT((twice.matrix() - once.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
  Matrix d2 = Matrix::Zero(2, 2);
  d2(0, 0) = 1.2;
  d2(1, 1) = -0.2;
  Matrix want2 = Matrix::Zero(2, 2);
  want2(0, 0) = 1.0;
  EXPECT_LT((mle_project({SpaceLayout::qubits(1), d2}).matrix() - want2).cwiseAbs().maxCoeff(), 1e-12);
  Matrix d4 = Eigen::Vector4cd(0.7, 0.5, -0.1, -0.1).asDiagonal();
  Matrix want4 = Eigen::Vector4cd(0.6, 0.4, 0.0, 0.0).asDiagonal();
  EXPECT_LT((mle_project({SpaceLayout::qubits(2), d4}).matrix() - want4).cwiseAbs().maxCoeff(), 1e-12);

  const json r = run_tomography(load_scenario(scenario_path("est_qst.toml")), in_memory());
  ASSERT_EQ(r["datasets"].size(), 9u);
  const double f = r["state_fidelity_mean_vs_exact"].get<double>();
  std::printf("  fidelity of the averaged reconstruction to the exact state: %.5f; target fidelity %.4f +- %.4f\n",
              f, r["fidelity_mean"].get<double>(), r["fidelity_stderr"].get<double>());
  EXPECT_GE(f, 0.99);
}

// Runs the command a scenario file is written for.
void run_any(const std::string& path, const RunOptions& o) {
  const std::string text = read_text(path);
  if (text.find("[sweep]") != std::string::npos) {
    run_sweep(load_sweep(path), o);
    return;
  }
  const ScenarioConfig c = load_scenario(path);
  if (text.find("[ablation]") != std::string::npos) run_ablation(c, kAblationToggles, o);
  else if (c.estimation.method == "qst") run_tomography(c, o);
  else if (c.estimation.method.rfind("shadow", 0) == 0) run_shadows(c, o);
  else run_scenario(c, o);
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_text(e.path());
  return out;
}

TEST(Acceptance, Determinism) {
  const fs::path base = fs::temp_directory_path() / "qres_acceptance_determinism";
  fs::remove_all(base);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(std::string(QRES_SOURCE_DIR) + "/scenarios"))
    if (e.path().extension() == ".toml") names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  ASSERT_FALSE(names.empty());
  for (const auto& name : names) {
    RunOptions a, b;
    a.output_dir = (base / "a" / name).string();
    b.output_dir = (base / "b" / name).string();
    b.threads = 2;
    run_any(scenario_path(name), a);
    run_any(scenario_path(name), b);
    const auto ta = tree_contents(*a.output_dir), tb = tree_contents(*b.output_dir);
    EXPECT_FALSE(ta.empty()) << name;
    EXPECT_EQ(ta.size(), tb.size()) << name;
    int differing = 0;
    for (const auto& [file, content] : ta) {
      const auto it = tb.find(file);
      if (it == tb.end() || it->second != content) {
        ++differing;
        ADD_FAILURE() << name << ": " << file << " differs between runs";
      }
    }
    std::printf("  %s: %zu files, %d differ\n", name.c_str(), ta.size(), differing);
  }
  fs::remove_all(base);
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::printf("[%s] %s\n", info.result()->Passed() ? "PASS" : "FAIL", info.name());
    std::fflush(stdout);
  }
};

}  // namespace
}  // namespace qres

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new qres::CriterionPrinter);
  return RUN_ALL_TESTS();
}

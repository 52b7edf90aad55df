#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/rates.hpp"
#include "wpcn/tdma.hpp"
#include "wpcn/types.hpp"

using namespace wpcn;

namespace {

Instance make_instance(std::vector<double> ul_gains, std::vector<double> circuit_watts,
                       double pb_power = 1.0, double horizon = 1.0,
                       std::vector<double> dl_gains = {}) {
  SystemParams p;
  p.pb_power_watts = pb_power;
  p.horizon_seconds = horizon;
  p.noise_watts = 1.0;
  std::vector<Device> devices;
  for (std::size_t i = 0; i < ul_gains.size(); ++i) {
    Device d;
    d.eta = 1.0;
    d.circuit_power_watts = circuit_watts[i];
    d.dl_gain = dl_gains.empty() ? 1.0 : dl_gains[i];
    d.ul_gain = ul_gains[i];
    devices.push_back(d);
  }
  return Instance(p, devices);
}

Instance random_cell(int k, std::uint64_t seed, double pb_power_watts = 10.0) {
  SystemParams p;
  p.num_devices = k;
  p.pb_power_watts = pb_power_watts;
  return realize_instance(p, sample_topology(p, seed));
}

}  // namespace

TEST_CASE("per-user stationarity function: frozen values and monotonicity") {
  CHECK(user_stationarity(0.0, 0.0) == 0.0);
  // ln2 - 1/2 in bits at y=1, c=0.
  CHECK(user_stationarity(1.0, 0.0) == doctest::Approx(0.2786524795555183).epsilon(1e-12));
  double prev = user_stationarity(0.0, 0.3);
  for (double y : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
    const double v = user_stationarity(y, 0.3);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(user_stationarity(0.0, 0.7) < 0.0);  // circuit drain makes idle power negative
  CHECK_THROWS_AS(user_stationarity(-0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(user_stationarity(1.0, -0.1), std::domain_error);
}

TEST_CASE("inverting the stationarity condition round-trips") {
  for (double c : {0.0, 0.1, 2.0}) {
    for (double y : {0.3, 1.0, 7.5}) {
      const double lambda = user_stationarity(y, c);
      if (lambda <= 0.0) continue;
      const double back = invert_user_stationarity(lambda, c, 1e-14);
      CHECK(back == doctest::Approx(y).epsilon(1e-10));
    }
  }
  // lambda = 0 with a circuit cost: the crossing sits where the log term
  // exactly balances the drain, strictly above zero.
  const double y0 = invert_user_stationarity(0.0, 0.5, 1e-14);
  CHECK(y0 > 0.0);
  CHECK(user_stationarity(y0, 0.5) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(invert_user_stationarity(0.0, 0.0, 1e-14) == 0.0);
}

TEST_CASE("dual balance is decreasing and crosses zero") {
  Instance inst = make_instance({1.0, 2.0}, {0.0, 0.0});
  const double lo = dual_balance(0.1, inst);
  const double hi = dual_balance(10.0, inst);
  CHECK(lo > 0.0);
  CHECK(hi < 0.0);
  double prev = lo;
  for (double lam : {0.5, 1.0, 2.0, 5.0}) {
    const double v = dual_balance(lam, inst);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("single-device normalized solve matches the depletion equation") {
  // P=1, h=1, gamma=1, eta=1, c=0, T=1: D=1. Optimal y solves (1+y)ln(1+y) = y+1
  // after eliminating the dual variable; equivalently the TDMA and one-user
  // depletion problems coincide.
  Instance inst = make_instance({1.0}, {0.0});
  const TdmaAllocation a = solve_tdma(inst, 1e-13);
  const double y = a.power_watts[0] * inst.gamma()[0];
  CHECK((1.0 + y) * std::log1p(y) == doctest::Approx(y + 1.0).epsilon(1e-10));
  CHECK(a.tau0_seconds + a.tau_seconds.sum() == doctest::Approx(1.0).epsilon(1e-12));
  // Full depletion: harvested = spent exactly.
  CHECK(a.power_watts[0] * a.tau_seconds[0] ==
        doctest::Approx(a.tau0_seconds).epsilon(1e-10));
}

TEST_CASE("two symmetric devices: frozen reference solution") {
  // P = 2, h = gamma = eta = 1, c = 0, T = 1 so D_k = 2 each.
  Instance inst = make_instance({1.0, 1.0}, {0.0, 0.0}, 2.0);
  TdmaSolverState state;
  SolveReport report;
  const TdmaAllocation a = solve_tdma(inst, 1e-13, &state, &report);

  CHECK(state.lambda ==
        doctest::Approx(0.804727652714448 * std::numbers::log2e).epsilon(1e-9));
  CHECK(state.snr[0] == doctest::Approx(3.970625759544231).epsilon(1e-9));
  CHECK(state.snr[1] == doctest::Approx(3.970625759544231).epsilon(1e-9));
  CHECK(a.tau0_seconds == doctest::Approx(0.49815734414449225).epsilon(1e-9));
  CHECK(a.tau_seconds[0] == doctest::Approx(0.2509213279277538).epsilon(1e-9));
  CHECK(a.tau_seconds[1] == doctest::Approx(0.2509213279277538).epsilon(1e-9));
  CHECK(tdma_objective(a, inst) == doctest::Approx(1.16097659383735).epsilon(1e-9));
  // Objective equals lambda * T at the optimum.
  CHECK(tdma_objective(a, inst) ==
        doctest::Approx(state.lambda * inst.params().horizon_seconds).epsilon(1e-9));
  // x column stores the effective SNR-plus-circuit load.
  for (int k = 0; k < 2; ++k) {
    CHECK(state.x[k] ==
          doctest::Approx(state.snr[k] + inst.circuit_snr()[k]).epsilon(1e-12));
  }
  CHECK(report.objective_bits_per_hz == doctest::Approx(1.16097659383735).epsilon(1e-9));
  CHECK(report.energy_joules == doctest::Approx(2.0 * a.tau0_seconds).epsilon(1e-12));
  CHECK(report.budget_active);
  CHECK_FALSE(report.cap_active);
}

TEST_CASE("budget and causality are tight by construction") {
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    Instance inst = random_cell(4, seed);
    const TdmaAllocation a = solve_tdma(inst, 1e-12);
    const double total = a.tau0_seconds + a.tau_seconds.sum();
    CHECK(total == doctest::Approx(inst.params().horizon_seconds).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) {
      const double spent =
          (a.power_watts[k] + inst.circuit_power()[k]) * a.tau_seconds[k];
      const double harvested =
          harvested_energy(inst.device(k), inst.params().pb_power_watts, a.tau0_seconds);
      CHECK(spent == doctest::Approx(harvested).epsilon(1e-9));
      CHECK(a.power_watts[k] > 0.0);
      CHECK(a.tau_seconds[k] > 0.0);
    }
  }
}

TEST_CASE("kkt residuals are tiny at the solution and detect perturbations") {
  Instance inst = random_cell(5, 77);
  TdmaAllocation a = solve_tdma(inst, 1e-12);
  const KktResiduals r = kkt_residuals(a, inst);
  CHECK(r.stationarity <= 1e-8);
  CHECK(std::abs(r.budget_slack_seconds) <= 1e-9 * inst.params().horizon_seconds);
  CHECK(r.causality <= 1e-9);

  // Shrink the charging slot by 1%: the budget gains slack and causality breaks.
  TdmaAllocation bad = a;
  bad.tau0_seconds *= 0.99;
  const KktResiduals rb = kkt_residuals(bad, inst);
  CHECK(rb.budget_slack_seconds ==
        doctest::Approx(0.01 * a.tau0_seconds).epsilon(1e-6));
  CHECK(rb.causality > 1e-3);

  // Unbalanced powers break stationarity.
  TdmaAllocation worse = a;
  worse.power_watts[0] *= 2.0;
  CHECK(kkt_residuals(worse, inst).stationarity > 1e-3);
}

TEST_CASE("all-zero allocation yields the documented residuals") {
  Instance inst = make_instance({1.0, 2.0}, {0.1, 0.1});
  TdmaAllocation zero;
  zero.tau0_seconds = 0.0;
  zero.tau_seconds = Eigen::ArrayXd::Zero(2);
  zero.power_watts = Eigen::ArrayXd::Zero(2);
  const KktResiduals r = kkt_residuals(zero, inst);
  CHECK(r.stationarity == 0.0);
  CHECK(r.budget_slack_seconds == doctest::Approx(1.0));  // T with nothing used
  CHECK(r.causality == 0.0);
  CHECK(tdma_objective(zero, inst) == 0.0);
}

TEST_CASE("throughput increases with transmit power") {
  double prev = 0.0;
  for (double pb : {1.0, 5.0, 10.0, 20.0}) {
    Instance inst = random_cell(3, 5, pb);
    const TdmaAllocation a = solve_tdma(inst, 1e-12);
    const double obj = tdma_objective(a, inst);
    CHECK(obj > prev);
    prev = obj;
  }
}

TEST_CASE("solver state reports iteration counts and a small residual") {
  Instance inst = random_cell(3, 99);
  TdmaSolverState state;
  solve_tdma(inst, 1e-12, &state, nullptr);
  CHECK(state.iterations_outer > 0);
  CHECK(state.iterations_inner > state.iterations_outer);
  CHECK(state.residual <= 1e-8 * std::max(1.0, state.lambda));
}

TEST_CASE("circuit power strictly reduces throughput") {
  SystemParams p;
  p.num_devices = 3;
  const ChannelRealization real = sample_topology(p, 6);
  const Instance base = realize_instance(p, real, 0.9, 0.0);
  const Instance loaded = realize_instance(p, real, 0.9, 1e-4);
  const double r0 = tdma_objective(solve_tdma(base, 1e-12), base);
  const double r1 = tdma_objective(solve_tdma(loaded, 1e-12), loaded);
  CHECK(r1 < r0);
}

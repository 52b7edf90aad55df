#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "wpcn/errors.hpp"
#include "wpcn/sweep.hpp"

using namespace wpcn;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.axis = SweepAxis::pb_power_dbm;
  spec.axis_values = {30.0, 34.0};
  spec.k_values = {2};
  spec.num_realizations = 6;
  spec.base_seed = 9;
  spec.schemes = {Scheme::tdma_opt, Scheme::noma_opt, Scheme::tdma_fixed,
                  Scheme::noma_fixed};
  return spec;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  emit_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("scheme and axis names round-trip") {
  for (Scheme s : {Scheme::tdma_opt, Scheme::noma_opt, Scheme::tdma_fixed,
                   Scheme::noma_fixed}) {
    CHECK(parse_scheme(scheme_name(s)) == s);
  }
  CHECK_THROWS_AS(parse_scheme("bogus"), ConfigError);
  for (SweepAxis a : {SweepAxis::pb_power_dbm, SweepAxis::circuit_power_mw}) {
    CHECK(parse_axis(axis_name(a)) == a);
  }
  CHECK_THROWS_AS(parse_axis("bogus"), ConfigError);
}

TEST_CASE("spec validation names the offending field") {
  SweepSpec spec = small_spec();
  CHECK_NOTHROW(spec.validate());

  spec.axis_values = {};
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "axis_values");
  }

  spec = small_spec();
  spec.axis_values = {34.0, 30.0};  // must increase
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  spec = small_spec();
  spec.axis = SweepAxis::circuit_power_mw;
  spec.axis_values = {-0.1, 0.2};  // power must be nonnegative
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  spec = small_spec();
  spec.k_values = {0};
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "k_values");
  }

  spec = small_spec();
  spec.num_realizations = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  spec = small_spec();
  spec.schemes = {Scheme::tdma_opt, Scheme::tdma_opt};  // duplicate
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "schemes");
  }

  spec = small_spec();
  spec.device_defaults.eta = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("results are identical for any worker count") {
  const SweepSpec spec = small_spec();
  const std::string serial_a = to_csv(run_sweep(spec, 1));
  const std::string serial_b = to_csv(run_sweep(spec, 1));
  const std::string parallel = to_csv(run_sweep(spec, 4));
  CHECK(serial_a == serial_b);
  CHECK(serial_a == parallel);

  // Worker count from the environment changes nothing either.
  setenv("WPCN_JOBS", "3", 1);
  const std::string from_env = to_csv(run_sweep(spec, 0));
  unsetenv("WPCN_JOBS");
  CHECK(serial_a == from_env);
}

TEST_CASE("rows come out scheme-major, then by cell size, then by axis value") {
  SweepSpec spec = small_spec();
  spec.k_values = {2, 5};
  spec.num_realizations = 3;
  // Scrambled input order must not matter.
  spec.schemes = {Scheme::noma_fixed, Scheme::tdma_opt, Scheme::noma_opt,
                  Scheme::tdma_fixed};
  const std::vector<SweepRow> rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 4 * 2 * 2);
  std::size_t i = 0;
  for (Scheme s : {Scheme::tdma_opt, Scheme::noma_opt, Scheme::tdma_fixed,
                   Scheme::noma_fixed}) {
    for (int k : {2, 5}) {
      for (double v : {30.0, 34.0}) {
        CHECK(rows[i].scheme == s);
        CHECK(rows[i].k == k);
        CHECK(rows[i].axis_value == v);
        ++i;
      }
    }
  }
}

TEST_CASE("row invariants: budgets, iteration counts, small residuals") {
  SweepSpec spec = small_spec();
  spec.num_realizations = 10;
  const std::vector<SweepRow> rows = run_sweep(spec, 2);
  const double t = spec.base.horizon_seconds;
  for (const SweepRow& r : rows) {
    CHECK(r.mean_throughput_bits_per_hz > 0.0);
    CHECK(r.mean_energy_joules > 0.0);
    CHECK(r.mean_tau0_seconds > 0.0);
    CHECK(r.mean_solver_iterations > 0.0);
    CHECK(r.max_kkt_residual <= 1e-7);
    CHECK(r.mean_tau0_seconds + r.mean_ul_time_seconds <= t * (1.0 + 1e-9));
    if (r.scheme == Scheme::tdma_opt || r.scheme == Scheme::noma_opt) {
      CHECK(r.mean_tau0_seconds + r.mean_ul_time_seconds ==
            doctest::Approx(t).epsilon(1e-9));
    }
    if (r.scheme == Scheme::tdma_fixed || r.scheme == Scheme::noma_fixed) {
      CHECK(r.mean_tau0_seconds == doctest::Approx(t / 2.0).epsilon(1e-12));
    }
    if (r.scheme == Scheme::tdma_opt || r.scheme == Scheme::tdma_fixed) {
      CHECK(r.num_infeasible == 0);
    }
  }
}

TEST_CASE("optimized schemes dominate their half-horizon baselines") {
  SweepSpec spec = small_spec();
  spec.axis_values = {30.0, 34.0, 38.0};
  spec.num_realizations = 30;
  const std::vector<SweepRow> rows = run_sweep(spec, 4);
  auto find = [&](Scheme s, double v) -> const SweepRow& {
    for (const SweepRow& r : rows) {
      if (r.scheme == s && r.axis_value == v) return r;
    }
    FAIL("row not found");
    return rows.front();
  };
  for (double v : spec.axis_values) {
    const double tdma_best = find(Scheme::tdma_opt, v).mean_throughput_bits_per_hz;
    const double noma_best = find(Scheme::noma_opt, v).mean_throughput_bits_per_hz;
    CHECK(tdma_best >= noma_best * (1.0 - 1e-12));
    CHECK(tdma_best >=
          find(Scheme::tdma_fixed, v).mean_throughput_bits_per_hz * (1.0 - 1e-12));
    CHECK(noma_best >=
          find(Scheme::noma_fixed, v).mean_throughput_bits_per_hz * (1.0 - 1e-12));
  }
}

TEST_CASE("large cells under circuit drain mostly hit the per-device clamp") {
  SweepSpec spec;
  spec.axis = SweepAxis::pb_power_dbm;
  spec.axis_values = {40.0};
  spec.k_values = {10};
  spec.num_realizations = 40;
  spec.base_seed = 4;
  spec.schemes = {Scheme::noma_opt};
  const std::vector<SweepRow> rows = run_sweep(spec, 4);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].num_infeasible >= 20);
  CHECK(rows[0].num_infeasible <= 40);
  CHECK(rows[0].mean_throughput_bits_per_hz > 0.0);
}

TEST_CASE("zero circuit power makes the two optimized schemes tie") {
  SweepSpec spec;
  spec.axis = SweepAxis::circuit_power_mw;
  spec.axis_values = {0.0, 0.2};
  spec.k_values = {3};
  spec.num_realizations = 10;
  spec.base_seed = 12;
  spec.schemes = {Scheme::tdma_opt, Scheme::noma_opt};
  const std::vector<SweepRow> rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 4);
  // Rows: tdma@0, tdma@0.2, noma@0, noma@0.2.
  CHECK(rows[0].mean_throughput_bits_per_hz ==
        doctest::Approx(rows[2].mean_throughput_bits_per_hz).epsilon(1e-6));
  CHECK(rows[2].num_infeasible == 0);  // no drain, nothing to clamp
  CHECK(rows[1].mean_throughput_bits_per_hz >
        rows[3].mean_throughput_bits_per_hz);
  // Throughput falls as the drain grows.
  CHECK(rows[0].mean_throughput_bits_per_hz > rows[1].mean_throughput_bits_per_hz);
  CHECK(rows[2].mean_throughput_bits_per_hz > rows[3].mean_throughput_bits_per_hz);
}

TEST_CASE("csv header is stable and the round trip is exact") {
  SweepSpec spec = small_spec();
  spec.num_realizations = 3;
  const std::vector<SweepRow> rows = run_sweep(spec, 1);
  const std::string csv = to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "scheme,k,axis_value,mean_throughput_bits_per_hz,mean_energy_joules,"
        "mean_tau0_seconds,mean_ul_time_seconds,num_infeasible,"
        "mean_solver_iterations,max_kkt_residual");

  std::istringstream in(csv);
  const std::vector<SweepRow> parsed = parse_csv(in);
  REQUIRE(parsed.size() == rows.size());
  CHECK(to_csv(parsed) == csv);  // bit-exact through %.17g
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].scheme == rows[i].scheme);
    CHECK(parsed[i].k == rows[i].k);
    CHECK(parsed[i].mean_throughput_bits_per_hz ==
          rows[i].mean_throughput_bits_per_hz);
    CHECK(parsed[i].num_infeasible == rows[i].num_infeasible);
  }
}

TEST_CASE("csv parser rejects foreign headers") {
  std::istringstream in("scheme,k,axis\n");
  CHECK_THROWS_AS(parse_csv(in), ConfigError);
}

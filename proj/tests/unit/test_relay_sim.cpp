#include <doctest.h>

#include <random>

#include "dstc/relay_sim.hpp"

using namespace dstc;

namespace {

SimSetup make_setup(Family f, std::size_t R, int m = 2) {
  const auto d = generate_design(f, R);
  return SimSetup::from_design(d, partition_variables(d).groups, build_constellation(m, 2 * R / 4, RotationSpec{}));
}

CVector complex_normal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d(0.0, std::sqrt(0.5));
  CVector v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST_CASE("power split") {
  const auto p = power_split(20.0, 0.5);
  CHECK(p.p1 == doctest::Approx(50.0));
  CHECK(p.p2 == doctest::Approx(50.0));
  CHECK(p.theta() == doctest::Approx(std::sqrt(2500.0 / 51.0)));
  CHECK(p.relay_gain() == doctest::Approx(std::sqrt(50.0 / 51.0)));
  CHECK_THROWS_AS(power_split(10.0, 1.0), std::invalid_argument);
}

TEST_CASE("relay outputs add up to the design") {
  std::mt19937_64 rng(31);
  for (auto [f, R] : {std::pair{Family::A2, std::size_t{2}}, std::pair{Family::A2, std::size_t{8}},
                      std::pair{Family::A3, std::size_t{4}}, std::pair{Family::A3, std::size_t{8}}}) {
    const auto setup = make_setup(f, R);
    const auto Ri = static_cast<Eigen::Index>(R);
    const auto power = power_split(12.0, 0.5);
    for (int t = 0; t < 50; ++t) {
      const CVector s = complex_normal(rng, Ri), fch = complex_normal(rng, Ri), g = complex_normal(rng, Ri);
      const CVector y = two_phase_receive(setup.relays, s, fch, g, CMatrix::Zero(Ri, Ri), CVector::Zero(Ri), power);
      const CVector h = effective_channel(setup.relays, fch, g);
      const CVector want = power.theta() * evaluate_design(setup.design, s) * h;
      CHECK((y - want).norm() <= 1e-9 * want.norm());

      auto broken = setup.relays;
      broken.relays[1].conjugated = !broken.relays[1].conjugated;
      const CVector y2 = two_phase_receive(broken, s, fch, g, CMatrix::Zero(Ri, Ri), CVector::Zero(Ri), power);
      CHECK((y2 - want).norm() > 1e-6);
    }
  }
}

TEST_CASE("noiseless simulation makes no errors") {
  const auto setup = make_setup(Family::A3, 4);
  SimConfig cfg;
  cfg.snr_db = {0.0, 10.0};
  cfg.trials = 500;
  cfg.noise = false;
  for (const auto& p : simulate_two_phase(setup, cfg).points) {
    CHECK(p.symbol_errors == 0);
    CHECK(p.bit_errors == 0);
  }
  for (const auto& p : equivalent_channel_sim(setup, cfg).points) CHECK(p.symbol_errors == 0);
}

TEST_CASE("seeded runs are reproducible") {
  const auto setup = make_setup(Family::A2, 4);
  SimConfig cfg;
  cfg.snr_db = {0.0, 6.0, 12.0};
  cfg.trials = 400;
  cfg.seed = 99;
  const std::string a = simulate_two_phase(setup, cfg).to_csv();
  CHECK(a == simulate_two_phase(setup, cfg).to_csv());
  cfg.threads = 3;
  CHECK(a == simulate_two_phase(setup, cfg).to_csv());
  cfg.seed = 100;
  CHECK(a != simulate_two_phase(setup, cfg).to_csv());
  CHECK(a.rfind("snr_db,trials,symbol_errors,bit_errors,ser,ber\n", 0) == 0);
}

TEST_CASE("error rate falls with SNR and both channel models agree") {
  const auto setup = make_setup(Family::A3, 4);
  SimConfig cfg;
  cfg.snr_db = {0.0, 5.0, 10.0, 15.0};
  cfg.trials = 3000;
  cfg.seed = 7;
  const auto relay = simulate_two_phase(setup, cfg);
  const auto equiv = equivalent_channel_sim(setup, cfg);
  for (std::size_t k = 0; k < cfg.snr_db.size(); ++k) {
    const auto& a = relay.points[k];
    const auto& b = equiv.points[k];
    CHECK(std::abs(a.ser() - b.ser()) <= rate_difference_bound(a.ser(), a.trials, b.ser(), b.trials));
    if (k > 0) {
      const auto& prev = relay.points[k - 1];
      CHECK(a.ser() <= prev.ser() + rate_difference_bound(a.ser(), a.trials, prev.ser(), prev.trials));
    }
  }
  CHECK(relay.points.front().ser() > relay.points.back().ser());
}

TEST_CASE("misconfigured relays are detectable") {
  auto setup = make_setup(Family::A3, 4);
  // relay 3 transmits with the wrong sign
  setup.relays.relays[2].matrix = -setup.relays.relays[2].matrix;
  SimConfig cfg;
  cfg.snr_db = {30.0};
  cfg.trials = 500;
  cfg.noise = false;
  const auto bad = simulate_two_phase(setup, cfg);
  const auto good = equivalent_channel_sim(setup, cfg);
  CHECK(good.points[0].symbol_errors == 0);
  CHECK(bad.points[0].symbol_errors > 0);
}

TEST_CASE("result formats") {
  SimResult r;
  SnrPoint p;
  p.snr_db = 5;
  p.trials = 10;
  p.symbol_errors = 2;
  p.symbols = 40;
  p.bit_errors = 3;
  p.bits = 80;
  r.points.push_back(p);
  CHECK(r.to_csv() == "snr_db,trials,symbol_errors,bit_errors,ser,ber\n5,10,2,3,0.05,0.0375\n");
  CHECK(r.to_gnuplot() == "# snr_db ser\n5 0.05\n");
  CHECK(r.to_gnuplot(true) == "# snr_db ber\n5 0.0375\n");
  CHECK(r.to_json()["points"][0]["symbol_errors"] == 2);
}

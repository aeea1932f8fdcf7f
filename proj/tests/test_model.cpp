#include <doctest.h>

#include <cmath>

#include "coexist/model.hpp"

using namespace coexist;

TEST_CASE("default configuration is the reference desk setup") {
  const SystemConfig cfg = validate_config(SystemConfig{});
  CHECK(cfg.n_embb == 10);
  CHECK(cfg.n_rb == 50);
  CHECK(cfg.minislots_per_slot == 8);
  CHECK(cfg.psum == PsumParams{2.0, 0.001, 0.7, 1.1, 20, 0.5});
  CHECK(cfg.mean_arrivals() == cfg.arrival_std);
  CHECK(cfg.blocklength_symbols() == doctest::Approx(22.5));
}

TEST_CASE("validation names the broken invariant") {
  SystemConfig c;
  c.slot_s = 2e-3;
  CHECK_THROWS_WITH_AS(validate_config(c), doctest::Contains("slot timing mismatch"), ConfigError);

  c = SystemConfig{};
  c.n_embb = 5;
  c.n_rb = 4;
  CHECK_THROWS_WITH_AS(validate_config(c), doctest::Contains("n_rb < n_embb"), ConfigError);

  c = SystemConfig{};
  c.decode_err = 0.5;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = SystemConfig{};
  c.reliability_eps = 0.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = SystemConfig{};
  c.psum.eta = 1.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("config text round-trips") {
  SystemConfig c;
  c.n_embb = 3;
  c.arrival_std = 10;
  c.arrival_mean = 4.5;
  c.payload_bytes = 200;
  c.psum.i_max = 7;
  c.literal_eq10 = true;
  const SystemConfig back = parse_config(format_config(c));
  CHECK(back == c);
}

TEST_CASE("config parser accepts comments and rejects unknown keys") {
  const SystemConfig c = parse_config("# desk\nn_embb = 4  # four UEs\n\npsum.sigma1 = 3\n");
  CHECK(c.n_embb == 4);
  CHECK(c.psum.sigma1 == 3.0);
  CHECK_THROWS_WITH_AS(parse_config("n_ue = 4\n"), doctest::Contains("unknown config key"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config("n_embb = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_embb 4\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/desk.cfg"), ConfigError);

  SystemConfig d;
  set_config_value(d, "payload", "50");
  CHECK(d.payload_bytes == 50);
}

TEST_CASE("link budget converts to linear milliwatts") {
  CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
  CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
  const LinkBudget lb = link_budget(SystemConfig{});
  // -114 dBm over one 180 kHz RB.
  CHECK(10 * std::log10(lb.n0_mw_hz * 180e3) == doctest::Approx(-114.0).epsilon(1e-9));
  CHECK(lb.p_embb_mw == doctest::Approx(dbm_to_mw(21.0)));
}

TEST_CASE("allocation structure checks") {
  EmbbAllocation a;
  a.alpha = Matrix<std::uint8_t>(2, 3, 0);
  a.alpha(0, 0) = a.alpha(0, 1) = a.alpha(1, 2) = 1;
  CHECK_FALSE(allocation_violation(a));
  CHECK(a.holdings(0) == 2);
  CHECK(a.owner(2) == 1u);

  a.alpha(1, 0) = 1;
  CHECK(allocation_violation(a));
  a.alpha(1, 0) = 0;
  a.alpha(1, 2) = 0;
  CHECK(allocation_violation(a));
  CHECK_FALSE(a.owner(2));
}

TEST_CASE("puncture record structure checks") {
  PunctureRecord r;
  r.beta = Matrix<std::uint8_t>(2, 4, 0);
  r.phi = {1, 1};
  r.demand = {1, 2};
  r.beta(0, 0) = 1;
  r.beta(1, 1) = r.beta(1, 2) = 1;
  CHECK_FALSE(puncture_violation(r, 4));
  CHECK(r.punctured_rbs() == 3);

  r.beta(1, 0) = 1;
  CHECK(puncture_violation(r, 4));  // RB 0 twice and wrong count
  r.beta(1, 0) = 0;
  r.beta(1, 2) = 0;
  CHECK(puncture_violation(r, 4));  // request 1 short of its demand

  PunctureRecord empty_payload;
  empty_payload.beta = Matrix<std::uint8_t>(1, 4, 0);
  empty_payload.phi = {1};
  empty_payload.demand = {0};
  CHECK_FALSE(puncture_violation(empty_payload, 4));
}

TEST_CASE("ledger replays to the sum of per-slot actual rates") {
  RateLedger led(2, 8);
  led.open_slot({100.0, 200.0}, {2, 1});
  CHECK(led.nominal() == std::vector<double>{200.0, 200.0});
  CHECK(led.cell_loss(0) == doctest::Approx(12.5));
  led.add_loss({25.0, 0.0});
  led.close_slot();
  led.open_slot({80.0, 40.0}, {1, 2});
  led.add_loss({10.0, 5.0});
  led.close_slot();

  std::vector<double> replay(2, 0.0);
  for (const auto& slot : led.history()) {
    for (std::size_t e = 0; e < 2; ++e) replay[e] += slot[e];
  }
  CHECK(led.cumulative_actual() == replay);
  CHECK(led.cumulative_actual()[0] == doctest::Approx(175.0 + 70.0));
  CHECK(led.previous_loss() == std::vector<double>{10.0, 5.0});
  CHECK(led.slots_closed() == 2);
}

TEST_CASE("ledger rejects inconsistent use") {
  RateLedger led(1, 4);
  CHECK_THROWS_AS(led.add_loss({1.0}), std::logic_error);
  led.open_slot({100.0}, {1});
  CHECK_THROWS_AS(led.open_slot({100.0}, {1}), std::logic_error);
  CHECK_THROWS_AS(led.add_loss({-1.0}), std::invalid_argument);
  led.add_loss({150.0});
  CHECK_THROWS_AS(led.close_slot(), std::logic_error);

  RateLedger literal(1, 4, true);
  literal.open_slot({100.0}, {1});
  literal.add_loss({400.0});
  literal.close_slot();
  CHECK(literal.cumulative_actual()[0] == 0.0);
}

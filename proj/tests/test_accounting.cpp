#include "doctest.h"
#include "support.hpp"

using namespace skygs;
using namespace skygs::test;

TEST_CASE("queuing latency") {
  const std::vector<DataChunk> one{{0, 100}};
  CHECK(queuing_latency(one, 5, 1.0) == 500);
  const std::vector<DataChunk> same{{7, 40}};
  CHECK(queuing_latency(same, 7, 1.0) == 0);
  const std::vector<DataChunk> two{{7, 10}, {9, 20}};
  CHECK(queuing_latency(two, 10, 1.0) == 50);
  CHECK(queuing_latency(one, 5, 2.0) == 1000);
  const std::vector<DataChunk> future{{6, 1}};
  CHECK_THROWS_AS(queuing_latency(future, 5, 1.0), ContractViolation);
}

TEST_CASE("transmission latencies") {
  CHECK(transmission_latency_gsl(600, 100) == 6);
  CHECK(transmission_latency_gsl(0, 100) == 0);
  CHECK(transmission_latency_gsl(12000, 12000) == 1);
  CHECK_THROWS_AS(transmission_latency_gsl(1, 0), ContractViolation);
  CHECK(transmission_latency_backhaul(7500, 7500) == 1);
  CHECK(transmission_latency_backhaul(0, 7500) == 0);
  CHECK(transmission_latency_backhaul(3750, 7500) == 0.5);
  CHECK_THROWS_AS(transmission_latency_backhaul(1, -1), ContractViolation);
}

TEST_CASE("computation latency") {
  CHECK(computation_latency(1000, 0.006) == doctest::Approx(6));
  CHECK(computation_latency(0, 0.006) == 0);
  CHECK(computation_latency(500, 0.012) == doctest::Approx(6));
}

TEST_CASE("leg costs") {
  const LegCosts c = leg_costs(true, 1000, 22, 1.0 / 60.0, 0.006);
  CHECK(c.rental == 22);
  CHECK(c.compute == doctest::Approx(0.1));
  CHECK(c.total == doctest::Approx(22.1));
  const LegCosts none = leg_costs(false, 1000, 22, 1.0 / 60.0, 0.006);
  CHECK(none.rental == 0);
  CHECK(none.compute == 0);
  CHECK(none.total == 0);
  const LegCosts empty = leg_costs(true, 0, 22, 1.0 / 60.0, 0.006);
  CHECK(empty.rental == 22);
  CHECK(empty.compute == 0);
  CHECK(empty.total == 22);
}

TEST_CASE("excess latency") {
  CHECK(excess_latency(130, 2, 60) == 10);
  CHECK(excess_latency(0, 0, 60) == 0);
  CHECK(excess_latency(100, 2, 60) == -20);
}

namespace {

DownlinkRecord record(double latency, double mb, double cost) {
  DownlinkRecord r;
  r.latency_total = latency;
  r.mb = mb;
  r.cost.total = cost;
  return r;
}

}  // namespace

TEST_CASE("aggregate metrics") {
  SUBCASE("cost sums") {
    const std::vector<DownlinkRecord> rs{record(1, 1, 10), record(1, 1, 5)};
    CHECK(aggregate_metrics(rs, {}, 60, {}).total_cost == 15);
  }
  SUBCASE("violation rate") {
    const std::vector<DownlinkRecord> rs{record(120, 1, 0), record(30, 1, 0)};
    const RunMetrics m = aggregate_metrics(rs, {}, 60, {});
    CHECK(m.violation_rate == 0.5);
    CHECK(*m.avg_latency_min_per_mb == 75);
  }
  SUBCASE("empty run") {
    const RunMetrics m = aggregate_metrics({}, {}, 60, {});
    CHECK(m.total_cost == 0);
    CHECK_FALSE(m.avg_latency_min_per_mb);
    CHECK(m.violation_rate == 0);
  }
  SUBCASE("queue summary") {
    const std::vector<SlotTrace> ts{{0, 0, 5, 5, 0}, {1, 0, -2, 3, 0}, {2, 0, 7, 10, 0}};
    const std::vector<double> backlog{4, 6};
    const RunMetrics m = aggregate_metrics({}, ts, 60, backlog);
    CHECK(m.mean_q == 6);
    CHECK(m.max_q == 10);
    CHECK(m.mean_phi == doctest::Approx(10.0 / 3.0));
    CHECK(m.final_backlog_total_mb == 10);
  }
}

TEST_CASE("evaluated legs satisfy the latency and cost identities") {
  World w(small_scenario(1, {1}, 2));
  w.slot = 4;
  w.backlog(0, 300, 4);
  w.backlog(0, 200, 1);
  SatelliteState copy = w.states[0];
  const DownlinkResult dl = copy.actual_downlink(400);
  const DownlinkRecord r = evaluate_leg(w.sc, 4, 0, 0, 0, 1, 400, dl);
  CHECK(r.mb == 400);
  CHECK(r.latency.queuing == doctest::Approx(300 * 4 + 100 * 1));
  CHECK(r.latency.gsl == doctest::Approx(1.0));
  CHECK(r.latency.backhaul == doctest::Approx(400.0 / 7500.0));
  CHECK(r.latency.compute == doctest::Approx(400 * w.sc.data_centers[1].minutes_per_mb));
  CHECK(r.latency_total == r.latency.queuing + r.latency.gsl + r.latency.backhaul + r.latency.compute);
  CHECK(r.cost.total == r.cost.rental + r.cost.compute);
  CHECK(r.cost.rental == w.sc.ground_stations[0].price_per_slot);
  CHECK(r.phi == doctest::Approx(r.latency_total - 60 * 400));
}

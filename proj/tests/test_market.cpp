#include "hvdc/market.hpp"

#include "hvdc/loss.hpp"
#include "hvdc/rng.hpp"
#include "oracle_market.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace hvdc;
using namespace hvdc::testing;

namespace {

NetworkModel two_zone_network(double atc, const QuadraticLossModel& loss) {
    NetworkModel n;
    n.zones = {{"A", "Exporter", SyncArea::Nordic}, {"B", "Importer", SyncArea::Nordic}};
    Interconnector ab;
    ab.id = "ab";
    ab.from_zone = "A";
    ab.to_zone = "B";
    ab.kind = LineKind::HVDC;
    ab.atc_forward_mw = atc;
    ab.atc_reverse_mw = atc;
    ab.loss = loss;
    n.interconnectors = {ab};
    return n;
}

market::MarketInstance spec_example_instance(const NetworkModel& network,
                                             market::LossMode mode) {
    market::MarketInstance inst;
    inst.network = &network;
    inst.options.mode = mode;
    inst.bids["A"].supply.steps = {{1000.0, 10.0}};
    inst.bids["B"].supply.steps = {{500.0, 50.0}};
    inst.bids["B"].demand.steps = {{500.0, 100.0}};
    return inst;
}

const market::LineResult& line_result(const market::MarketSolution& sol,
                                      const std::string& id) {
    for (const auto& lr : sol.lines) {
        if (lr.id == id) {
            return lr;
        }
    }
    throw std::runtime_error("line not in solution: " + id);
}

double zone_price(const market::MarketSolution& sol, const std::string& zone) {
    for (const auto& zr : sol.zones) {
        if (zr.zone == zone) {
            return zr.price_eur_mwh;
        }
    }
    throw std::runtime_error("zone not in solution: " + zone);
}

}  // namespace

TEST_CASE("congested linear factor example") {
    // gamma = 0.05 via b = 0.05, c = 0; ATC 400 binds
    const auto network = two_zone_network(400.0, {0.0, 0.05, 0.0, 1000.0});
    const auto inst = spec_example_instance(network, market::LossMode::LinearHvdc);
    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);

    const auto& ab = line_result(sol, "ab");
    CHECK(ab.flow_mw == doctest::Approx(400.0));
    CHECK(ab.modeled_loss_mw == doctest::Approx(20.0));  // B receives 380
    CHECK(zone_price(sol, "A") == doctest::Approx(10.0));
    CHECK(zone_price(sol, "B") == doctest::Approx(50.0));
    CHECK(sol.welfare_eur == doctest::Approx(40000.0));
    // B's local supply covers the remainder
    CHECK(sol.zones[1].accepted_supply_mw[0] == doctest::Approx(120.0));

    // brute force at 1 MW resolution agrees
    const auto oi = oracle_instance(inst);
    const auto grid = oracle_grid_welfare(oi.zones, oi.lines, 1.0);
    REQUIRE(grid.feasible);
    CHECK(grid.welfare_eur == doctest::Approx(40000.0));
    CHECK(grid.flows_mw[0] == doctest::Approx(400.0));
}

TEST_CASE("uncongested linear factor example carries the price wedge") {
    const auto network = two_zone_network(1000.0, {0.0, 0.05, 0.0, 1000.0});
    const auto inst = spec_example_instance(network, market::LossMode::LinearHvdc);
    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);

    const auto& ab = line_result(sol, "ab");
    CHECK(ab.flow_mw == doctest::Approx(500.0 / 0.95).epsilon(1e-6));  // 526.32
    CHECK(zone_price(sol, "A") == doctest::Approx(10.0));
    CHECK(zone_price(sol, "B") == doctest::Approx(10.0 / 0.95));
    // pi_A = (1 - gamma) pi_B at the interior optimum
    CHECK(zone_price(sol, "A") ==
          doctest::Approx((1.0 - 0.05) * zone_price(sol, "B")).epsilon(1e-9));
    CHECK(sol.welfare_eur == doctest::Approx(50000.0 - 10.0 * 500.0 / 0.95));
    CHECK(sol.welfare_eur == doctest::Approx(44736.8).epsilon(1e-5));

    // exact enumeration oracle agrees to 1e-6
    const auto oi = oracle_instance(inst);
    const auto exact = oracle_max_welfare(oi.zones, oi.lines);
    REQUIRE(exact.feasible);
    CHECK(sol.welfare_eur == doctest::Approx(exact.welfare_eur).epsilon(1e-9));
}

TEST_CASE("single zone clears at the marginal supply step") {
    NetworkModel n;
    n.zones = {{"A", "Island", SyncArea::Nordic}};
    market::MarketInstance inst;
    inst.network = &n;
    inst.options.mode = market::LossMode::NoFactors;
    inst.bids["A"].supply.steps = {{100.0, 8.0}, {100.0, 21.0}, {100.0, 45.0}};
    inst.bids["A"].demand.steps = {{150.0, 90.0}};
    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);
    CHECK(zone_price(sol, "A") == doctest::Approx(21.0));
    CHECK(sol.zones[0].accepted_supply_mw[0] == doctest::Approx(100.0));
    CHECK(sol.zones[0].accepted_supply_mw[1] == doctest::Approx(50.0));
    CHECK(sol.zones[0].accepted_demand_mw[0] == doctest::Approx(150.0));
    CHECK(sol.welfare_eur == doctest::Approx(150.0 * 90.0 - 800.0 - 1050.0));
}

TEST_CASE("settlement covers residual and no-load losses") {
    SUBCASE("reference mode settles the full realized loss") {
        const auto network = two_zone_network(400.0, {0.0, 0.0, 1e-4, 1000.0});
        const auto inst = spec_example_instance(network, market::LossMode::NoFactors);
        const auto sol = market::clear(inst);
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        const auto& ab = line_result(sol, "ab");
        CHECK(ab.flow_mw == doctest::Approx(400.0));
        CHECK(ab.realized_loss_mw == doctest::Approx(16.0));
        CHECK(ab.modeled_loss_mw == doctest::Approx(0.0));
        CHECK(zone_price(sol, "B") == doctest::Approx(50.0));
        CHECK(market::settle(sol) == doctest::Approx(800.0));
    }
    SUBCASE("exact internalization at a breakpoint leaves no residual") {
        // p_max 800 with two segments puts a breakpoint at the 400 MW ATC
        const auto network = two_zone_network(400.0, {0.0, 0.0, 1e-4, 800.0});
        auto inst = spec_example_instance(network, market::LossMode::PwlHvdc);
        inst.options.pwl_segments = 2;  // breakpoints 0, 400, 800
        const auto sol = market::clear(inst);
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        const auto& ab = line_result(sol, "ab");
        CHECK(ab.flow_mw == doctest::Approx(400.0));
        CHECK(ab.modeled_loss_mw == doctest::Approx(ab.realized_loss_mw).epsilon(1e-9));
        CHECK(market::settle(sol) == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("pinned exchange settles its loss at the receiving zone") {
        NetworkModel n;
        n.zones = {{"A", "A", SyncArea::Nordic}, {"B", "B", SyncArea::Nordic}};
        Interconnector ab;
        ab.id = "ab";
        ab.from_zone = "A";
        ab.to_zone = "B";
        ab.kind = LineKind::HVDC;
        ab.atc_forward_mw = 700.0;
        ab.atc_reverse_mw = 700.0;
        ab.loss = {2.0, 0.0, 1e-5, 700.0};
        ab.fixed_flow_mw = 600.0;
        n.interconnectors = {ab};
        market::MarketInstance inst;
        inst.network = &n;
        inst.options.mode = market::LossMode::NoFactors;
        inst.bids["A"].supply.steps = {{1000.0, 10.0}};
        inst.bids["B"].demand.steps = {{1000.0, 100.0}};
        inst.bids["B"].supply.steps = {{100.0, 40.0}};
        const auto sol = market::clear(inst);
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        const auto& lr = line_result(sol, "ab");
        CHECK(lr.pinned);
        CHECK(lr.flow_mw == doctest::Approx(600.0));
        CHECK(lr.realized_loss_mw == doctest::Approx(5.6));  // 2 + 1e-5 * 600^2
        const double price_b = zone_price(sol, "B");
        CHECK(market::settle(sol) == doctest::Approx(5.6 * price_b));
    }
}

TEST_CASE("mode equivalence with lossless lines") {
    const auto network = two_zone_network(600.0, {0.0, 0.0, 0.0, 1000.0});
    double welfare[4];
    int i = 0;
    for (auto mode : {market::LossMode::NoFactors, market::LossMode::LinearHvdc,
                      market::LossMode::PwlHvdc, market::LossMode::PwlAcHvdc}) {
        const auto sol = market::clear(spec_example_instance(network, mode));
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        welfare[i++] = sol.welfare_eur;
    }
    for (int k = 1; k < 4; ++k) {
        CHECK(welfare[k] == doctest::Approx(welfare[0]).epsilon(1e-12));
    }
}

TEST_CASE("infeasible hour names the starved zone") {
    NetworkModel n;
    n.zones = {{"A", "A", SyncArea::Nordic}, {"B", "B", SyncArea::Nordic}};
    Interconnector ab;
    ab.id = "ab";
    ab.from_zone = "A";
    ab.to_zone = "B";
    ab.kind = LineKind::HVDC;
    ab.atc_forward_mw = 100.0;
    ab.atc_reverse_mw = 100.0;
    ab.loss = {0.0, 0.0, 0.0, 200.0};
    ab.fixed_flow_mw = -100.0;  // B exports 100 to A, unconditionally
    n.interconnectors = {ab};
    market::MarketInstance inst;
    inst.network = &n;
    inst.options.mode = market::LossMode::NoFactors;
    inst.bids["A"].supply.steps = {{50.0, 10.0}};
    inst.bids["A"].demand.steps = {{200.0, 3000.0}};
    inst.bids["B"].supply.steps = {{50.0, 20.0}};  // cannot cover the pinned export
    inst.bids["B"].demand.steps = {{400.0, 3000.0}};
    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Infeasible);
    REQUIRE(sol.binding.size() == 1);
    CHECK(sol.binding[0].zone == "B");
    CHECK(sol.binding[0].mw < 0.0);
}

TEST_CASE("parallel linear factors fill in gamma order") {
    NetworkModel n;
    n.zones = {{"A", "A", SyncArea::Nordic}, {"B", "B", SyncArea::Nordic}};
    const double gammas[3] = {0.02, 0.05, 0.09};
    for (int l = 0; l < 3; ++l) {
        Interconnector ic;
        ic.id = "L" + std::to_string(l);
        ic.from_zone = "A";
        ic.to_zone = "B";
        ic.kind = LineKind::HVDC;
        ic.atc_forward_mw = 50.0;
        ic.atc_reverse_mw = 50.0;
        ic.loss = {0.0, gammas[l], 0.0, 60.0};
        n.interconnectors.push_back(ic);
    }
    market::MarketInstance inst;
    inst.network = &n;
    inst.options.mode = market::LossMode::LinearHvdc;
    inst.bids["A"].supply.steps = {{400.0, 5.0}};
    inst.bids["A"].demand.steps = {{20.0, 3000.0}};
    inst.bids["B"].supply.steps = {{400.0, 80.0}};
    inst.bids["B"].demand.steps = {{120.0, 3000.0}};

    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);
    // cheapest-gamma line saturates before the next one carries anything
    const auto& l0 = line_result(sol, "L0");
    const auto& l1 = line_result(sol, "L1");
    const auto& l2 = line_result(sol, "L2");
    CHECK(l0.flow_mw == doctest::Approx(50.0));
    CHECK(l1.flow_mw == doctest::Approx(50.0));
    CHECK(l2.flow_mw > 0.0);
    CHECK(l2.flow_mw < 50.0 - 1e-6);

    // exact oracle and 1 MW brute force agree
    const auto oi = oracle_instance(inst);
    const auto exact = oracle_max_welfare(oi.zones, oi.lines);
    REQUIRE(exact.feasible);
    CHECK(sol.welfare_eur == doctest::Approx(exact.welfare_eur).epsilon(1e-9));
    const auto grid = oracle_grid_welfare(oi.zones, oi.lines, 1.0);
    CHECK(grid.welfare_eur <= sol.welfare_eur + 1e-9);
    CHECK(sol.welfare_eur - grid.welfare_eur < 5.0);  // grid resolution slack
}

TEST_CASE("piecewise factors fill globally slope-sorted segments") {
    NetworkModel n;
    n.zones = {{"A", "A", SyncArea::Nordic}, {"B", "B", SyncArea::Nordic}};
    const double cs[3] = {4e-4, 5e-4, 7e-4};
    for (int l = 0; l < 3; ++l) {
        Interconnector ic;
        ic.id = "L" + std::to_string(l);
        ic.from_zone = "A";
        ic.to_zone = "B";
        ic.kind = LineKind::HVDC;
        ic.atc_forward_mw = 60.0;
        ic.atc_reverse_mw = 60.0;
        ic.loss = {0.0, 0.0, cs[l], 60.0};
        n.interconnectors.push_back(ic);
    }
    market::MarketInstance inst;
    inst.network = &n;
    inst.options.mode = market::LossMode::PwlHvdc;
    inst.options.pwl_segments = 3;  // width 20 per line
    inst.bids["A"].supply.steps = {{500.0, 5.0}};
    inst.bids["A"].demand.steps = {{10.0, 3000.0}};
    inst.bids["B"].supply.steps = {{500.0, 90.0}};
    inst.bids["B"].demand.steps = {{100.0, 3000.0}};

    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);

    double sent = 0.0;
    double total_modeled = 0.0;
    for (const auto& lr : sol.lines) {
        sent += lr.flow_mw;
        total_modeled += lr.modeled_loss_mw;
    }
    CHECK(sent - total_modeled == doctest::Approx(100.0).epsilon(1e-7));

    // greedy fill of the globally slope-sorted segment list at equal sent
    // power gives the same modeled loss
    struct Seg {
        double width;
        double slope;
    };
    std::vector<Seg> segs;
    for (int l = 0; l < 3; ++l) {
        for (int k = 1; k <= 3; ++k) {
            segs.push_back({20.0, cs[l] * (20.0 * (k - 1) + 20.0 * k)});
        }
    }
    std::sort(segs.begin(), segs.end(),
              [](const Seg& a, const Seg& b) { return a.slope < b.slope; });
    double left = sent;
    double greedy_loss = 0.0;
    for (const auto& seg : segs) {
        const double take = std::min(left, seg.width);
        greedy_loss += take * seg.slope;
        left -= take;
        if (left <= 1e-12) {
            break;
        }
    }
    CHECK(total_modeled == doctest::Approx(greedy_loss).epsilon(1e-7));

    // brute force at 1 MW: no integer split of the same sent power beats
    // the greedy fill
    auto pwl_loss = [&](double c, double f) {
        double loss = 0.0;
        double x = 0.0;
        for (int k = 1; k <= 3; ++k) {
            const double take = std::clamp(f - x, 0.0, 20.0);
            loss += take * c * (20.0 * (k - 1) + 20.0 * k);
            x += 20.0;
        }
        return loss;
    };
    const int sent_int = static_cast<int>(std::round(sent));
    double best_grid_loss = 1e300;
    for (int f0 = 0; f0 <= 60; ++f0) {
        for (int f1 = 0; f1 + f0 <= sent_int && f1 <= 60; ++f1) {
            const int f2 = sent_int - f0 - f1;
            if (f2 < 0 || f2 > 60) {
                continue;
            }
            best_grid_loss = std::min(best_grid_loss, pwl_loss(cs[0], f0) +
                                                          pwl_loss(cs[1], f1) +
                                                          pwl_loss(cs[2], f2));
        }
    }
    CHECK(greedy_loss <= best_grid_loss + 0.05);  // integer-grid slack
}

TEST_CASE("no fictitious counterflow with strictly positive slopes") {
    const auto network = two_zone_network(500.0, {0.0, 0.02, 1e-5, 800.0});
    for (auto mode : {market::LossMode::LinearHvdc, market::LossMode::PwlHvdc}) {
        const auto sol = market::clear(spec_example_instance(network, mode));
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        const auto& ab = line_result(sol, "ab");
        CHECK(std::min(ab.forward_mw, ab.reverse_mw) == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("dual wedge holds strictly inside a segment") {
    const auto network = two_zone_network(1000.0, {0.0, 0.01, 3e-5, 1000.0});
    auto inst = spec_example_instance(network, market::LossMode::PwlHvdc);
    inst.options.pwl_segments = 4;  // width 250
    const auto sol = market::clear(inst);
    REQUIRE(sol.status == market::SolveStatus::Optimal);
    const auto& ab = line_result(sol, "ab");
    const double f = ab.flow_mw;
    REQUIRE(f > 0.0);
    const auto pwl = build_pwl(network.interconnectors[0].loss, 4);
    std::size_t seg = pwl.slopes.size();
    for (std::size_t k = 0; k < pwl.slopes.size(); ++k) {
        if (f > pwl.breakpoints[k] + 1e-3 && f < pwl.breakpoints[k + 1] - 1e-3) {
            seg = k;
        }
    }
    REQUIRE(seg < pwl.slopes.size());
    CHECK(zone_price(sol, "A") ==
          doctest::Approx((1.0 - pwl.slopes[seg]) * zone_price(sol, "B")).epsilon(1e-9));
}

TEST_CASE("zone without any curve is rejected") {
    NetworkModel n;
    n.zones = {{"A", "A", SyncArea::Nordic}, {"B", "B", SyncArea::Nordic}};
    market::MarketInstance inst;
    inst.network = &n;
    inst.bids["A"].supply.steps = {{10.0, 5.0}};
    CHECK_THROWS_AS(market::clear(inst), std::invalid_argument);

    SUBCASE("as are bids for a zone the network does not declare") {
        inst.bids["B"].demand.steps = {{10.0, 50.0}};
        inst.bids["C"].supply.steps = {{10.0, 5.0}};
        CHECK_THROWS_AS(market::clear(inst), std::invalid_argument);
    }
}

TEST_CASE("randomized instances match the exact enumeration oracle") {
    SplitMix64 rng(424242);
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        NetworkModel n;
        const int nz = 2 + static_cast<int>(rng.next_below(2));  // 2..3 zones
        for (int z = 0; z < nz; ++z) {
            n.zones.push_back({"Z" + std::to_string(z), "", SyncArea::Nordic});
        }
        const int nl = 1 + static_cast<int>(rng.next_below(2));  // 1..2 lines
        for (int l = 0; l < nl; ++l) {
            Interconnector ic;
            ic.id = "L" + std::to_string(l);
            const int a = static_cast<int>(rng.next_below(nz));
            int b = static_cast<int>(rng.next_below(nz));
            if (b == a) {
                b = (a + 1) % nz;
            }
            ic.from_zone = "Z" + std::to_string(a);
            ic.to_zone = "Z" + std::to_string(b);
            ic.kind = rng.next_below(2) == 0 ? LineKind::HVDC : LineKind::AC;
            ic.atc_forward_mw = std::floor(rng.next_in(20.0, 80.0));
            ic.atc_reverse_mw = std::floor(rng.next_in(20.0, 80.0));
            ic.loss = {0.0, rng.next_in(0.0, 0.02), rng.next_in(0.0, 0.002), 100.0};
            n.interconnectors.push_back(ic);
        }
        market::MarketInstance inst;
        inst.network = &n;
        const market::LossMode modes[4] = {
            market::LossMode::NoFactors, market::LossMode::LinearHvdc,
            market::LossMode::PwlHvdc, market::LossMode::PwlAcHvdc};
        inst.options.mode = modes[rng.next_below(4)];
        inst.options.pwl_segments = 1 + static_cast<int>(rng.next_below(3));
        for (int z = 0; z < nz; ++z) {
            ZoneBids zb;
            const int ns = 1 + static_cast<int>(rng.next_below(2));
            double price = rng.next_in(5.0, 30.0);
            for (int s = 0; s < ns; ++s) {
                zb.supply.steps.push_back({std::floor(rng.next_in(20.0, 120.0)), price});
                price += rng.next_in(1.0, 25.0);
            }
            // ample high-priced demand keeps delivered power valuable
            zb.demand.steps.push_back({400.0, rng.next_in(100.0, 300.0)});
            inst.bids["Z" + std::to_string(z)] = zb;
        }
        const auto sol = market::clear(inst);
        REQUIRE(sol.status == market::SolveStatus::Optimal);
        const auto oi = oracle_instance(inst);
        const auto exact = oracle_max_welfare(oi.zones, oi.lines);
        REQUIRE(exact.feasible);
        CHECK(sol.welfare_eur ==
              doctest::Approx(exact.welfare_eur)
                  .epsilon(1e-6)
                  .scale(std::max(1.0, std::abs(exact.welfare_eur))));

        // solution invariants: flows within ATC, quantities within steps,
        // realized losses non-negative
        for (std::size_t l = 0; l < sol.lines.size(); ++l) {
            const auto& ic = n.interconnectors[l];
            CHECK(sol.lines[l].flow_mw <= ic.atc_forward_mw + 1e-6);
            CHECK(-sol.lines[l].flow_mw <= ic.atc_reverse_mw + 1e-6);
            CHECK(sol.lines[l].realized_loss_mw >= 0.0);
        }
        for (std::size_t z = 0; z < sol.zones.size(); ++z) {
            const auto& zb = inst.bids.at(sol.zones[z].zone);
            for (std::size_t k = 0; k < zb.supply.steps.size(); ++k) {
                CHECK(sol.zones[z].accepted_supply_mw[k] >= -1e-9);
                CHECK(sol.zones[z].accepted_supply_mw[k] <=
                      zb.supply.steps[k].quantity_mw + 1e-9);
            }
            for (std::size_t k = 0; k < zb.demand.steps.size(); ++k) {
                CHECK(sol.zones[z].accepted_demand_mw[k] >= -1e-9);
                CHECK(sol.zones[z].accepted_demand_mw[k] <=
                      zb.demand.steps[k].quantity_mw + 1e-9);
            }
        }
        ++checked;
    }
    CHECK(checked == 25);
}

// Times the OpenMP kernels against their serial reference implementations
// on a synthetic study: the year batch of hourly clearings, the
// action-size sweep over an inertia grid, and the bootstrap pricing.
// Results double as a consistency check: parallel runs must reproduce the
// serial reports exactly.

#include "hvdc/costs.hpp"
#include "hvdc/market.hpp"
#include "hvdc/sizing.hpp"
#include "hvdc/synth.hpp"
#include "hvdc/year.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Row {
    const char* kernel;
    double serial_s;
    double parallel_s;
    bool identical;
};

void print_row(const Row& row) {
    std::printf("%-22s %10.3f s %12.3f s %9.2fx   %s\n", row.kernel, row.serial_s,
                row.parallel_s, row.serial_s / row.parallel_s,
                row.identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t hours = argc > 1 ? std::stoul(argv[1]) : 4380;
    int workers = 2;
#ifdef _OPENMP
    workers = argc > 2 ? std::stoi(argv[2]) : omp_get_max_threads();
#endif
    std::printf("synthetic study: %zu hours, %d workers\n\n", hours, workers);
    std::printf("%-22s %12s %14s %10s\n", "kernel", "serial", "parallel", "speedup");

    hvdc::synth::SyntheticSpec spec;
    spec.horizon_hours = hours;
    const auto network = hvdc::synth::build_network(spec);
    const auto bids = hvdc::synth::build_bids(spec);
    const hvdc::market::ClearingOptions options{hvdc::market::LossMode::PwlAcHvdc, 5};

    {
        auto t0 = Clock::now();
        const auto serial = hvdc::market::run_year_serial(network, bids, options);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = hvdc::market::run_year(network, bids, options, workers);
        const double tp = seconds_since(t0);
        const bool same = hvdc::market::report_to_json(serial.report) ==
                          hvdc::market::report_to_json(parallel.report);
        print_row({"market year batch", ts, tp, same});
    }

    {
        hvdc::freq::FrequencyModel model;
        model.load_damping_mw_per_hz = 400.0;
        const hvdc::freq::Disturbance disturbance;
        const hvdc::freq::SimParams params{60.0, 0.01};
        std::vector<double> grid;
        for (double ek = 80.0; ek <= 240.0; ek += 5.0) {
            grid.push_back(ek);
        }
        auto t0 = Clock::now();
        const auto serial = hvdc::freq::sweep_actions(model, disturbance,
                                                      hvdc::freq::default_ffr_template(),
                                                      hvdc::freq::default_epc_template(),
                                                      grid, params, 1);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = hvdc::freq::sweep_actions(model, disturbance,
                                                        hvdc::freq::default_ffr_template(),
                                                        hvdc::freq::default_epc_template(),
                                                        grid, params, workers);
        const double tp = seconds_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            same = same && serial.di_reduction_mw[i] == parallel.di_reduction_mw[i] &&
                   serial.ffr_mw[i] == parallel.ffr_mw[i] &&
                   serial.epc_mw[i] == parallel.epc_mw[i];
        }
        print_row({"action-size sweep", ts, tp, same});
    }

    {
        hvdc::plan::RemedialPlan plan;
        plan.strategy = hvdc::freq::RemedyAction::Epc;
        plan.hourly_mw.assign(hours, 120.0);
        auto prices = hvdc::synth::build_prices(spec);
        prices.epc.bootstrap_n = 400000;
        auto t0 = Clock::now();
        const auto serial = hvdc::cost::epc_cost(plan, prices.epc, 1);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = hvdc::cost::epc_cost(plan, prices.epc, workers);
        const double tp = seconds_since(t0);
        const bool same = serial.bootstrap->mean_eur == parallel.bootstrap->mean_eur &&
                          serial.bootstrap->p05_eur == parallel.bootstrap->p05_eur &&
                          serial.bootstrap->p95_eur == parallel.bootstrap->p95_eur;
        print_row({"bootstrap pricing", ts, tp, same});
    }

    return 0;
}

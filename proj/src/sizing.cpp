#include "hvdc/sizing.hpp"

#include <exception>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hvdc::freq {

std::string to_string(RemedyAction action) {
    switch (action) {
        case RemedyAction::DiReduction: return "di-reduction";
        case RemedyAction::Ffr: return "ffr";
        case RemedyAction::Epc: return "epc";
    }
    return "di-reduction";
}

std::optional<RemedyAction> parse_action(const std::string& text) {
    if (text == "di-reduction" || text == "di") return RemedyAction::DiReduction;
    if (text == "ffr") return RemedyAction::Ffr;
    if (text == "epc") return RemedyAction::Epc;
    return std::nullopt;
}

namespace {

bool secure_at_ek(const FrequencyModel& model, double ek_gws, const Disturbance& disturbance,
                  const std::optional<SteppedReserve>& ffr,
                  const std::optional<SteppedReserve>& epc, const SimParams& params) {
    FrequencyModel m = model;
    m.kinetic_energy_gws = ek_gws;
    const Trajectory traj = simulate(m, disturbance, ffr, epc, params);
    return !traj.load_shed && nadir_ok(traj, m.nadir_floor_hz);
}

}  // namespace

SizingOutcome required_kinetic_energy(const FrequencyModel& model,
                                      const Disturbance& disturbance,
                                      const std::optional<SteppedReserve>& ffr,
                                      const std::optional<SteppedReserve>& epc,
                                      const SimParams& params) {
    constexpr double lo_bound = 1.0;
    constexpr double hi_bound = 1000.0;
    constexpr double resolution = 0.1;

    if (secure_at_ek(model, lo_bound, disturbance, ffr, epc, params)) {
        return {true, lo_bound};
    }
    if (!secure_at_ek(model, hi_bound, disturbance, ffr, epc, params)) {
        return {false, 0.0};
    }
    double lo = lo_bound;  // insecure
    double hi = hi_bound;  // secure
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (secure_at_ek(model, mid, disturbance, ffr, epc, params)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {true, hi};
}

SizingOutcome size_action(const FrequencyModel& model, const Disturbance& disturbance,
                          RemedyAction action, const SteppedReserve& reserve_template,
                          const SimParams& params) {
    if (action == RemedyAction::DiReduction) {
        // smallest n*50 with nadir(disturbance - n*50) at or above the floor
        const int max_blocks =
            static_cast<int>(std::ceil(disturbance.lost_generation_mw / 50.0));
        auto secure_with_blocks = [&](int n) {
            Disturbance reduced = disturbance;
            reduced.lost_generation_mw =
                std::max(disturbance.lost_generation_mw - 50.0 * n, 0.0);
            return secure_at_ek(model, model.kinetic_energy_gws, reduced, std::nullopt,
                                std::nullopt, params);
        };
        if (secure_with_blocks(0)) {
            return {true, 0.0};
        }
        if (!secure_with_blocks(max_blocks)) {
            return {false, 0.0};
        }
        int lo = 0;          // insecure
        int hi = max_blocks; // secure
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (secure_with_blocks(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return {true, 50.0 * hi};
    }

    if (reserve_template.triggers.empty()) {
        throw std::invalid_argument("size_action: reserve template needs a trigger");
    }
    const int max_block = static_cast<int>(std::ceil(disturbance.lost_generation_mw));
    auto secure_with_block = [&](int mw) {
        if (mw == 0) {
            return secure_at_ek(model, model.kinetic_energy_gws, disturbance, std::nullopt,
                                std::nullopt, params);
        }
        SteppedReserve reserve = reserve_template;
        reserve.triggers = {ReserveTrigger{reserve_template.triggers.front().threshold_hz,
                                           static_cast<double>(mw)}};
        const bool is_ffr = action == RemedyAction::Ffr;
        return secure_at_ek(model, model.kinetic_energy_gws, disturbance,
                            is_ffr ? std::optional<SteppedReserve>(reserve) : std::nullopt,
                            is_ffr ? std::nullopt : std::optional<SteppedReserve>(reserve),
                            params);
    };
    if (secure_with_block(0)) {
        return {true, 0.0};
    }
    if (!secure_with_block(max_block)) {
        return {false, 0.0};
    }
    int lo = 0;          // insecure
    int hi = max_block;  // secure
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (secure_with_block(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {true, static_cast<double>(hi)};
}

std::optional<double> SizingTable::requirement(RemedyAction action, double ek_gws) const {
    const auto& table = action == RemedyAction::DiReduction ? di_mw
                        : action == RemedyAction::Ffr       ? ffr_mw
                                                            : epc_mw;
    if (table.empty()) {
        return std::nullopt;
    }
    int idx = static_cast<int>(std::floor(ek_gws)) - ek_lo_gws;
    idx = std::max(0, std::min(idx, static_cast<int>(table.size()) - 1));
    if (std::isnan(table[idx])) {
        return std::nullopt;
    }
    return table[idx];
}

SizingTable build_sizing_table(const FrequencyModel& model, const Disturbance& disturbance,
                               const SteppedReserve& ffr_template,
                               const SteppedReserve& epc_template, double ek_min_gws,
                               const SimParams& params, int workers) {
    const auto threshold =
        required_kinetic_energy(model, disturbance, std::nullopt, std::nullopt, params);
    if (!threshold.reachable) {
        throw std::runtime_error(
            "build_sizing_table: no kinetic energy secures the disturbance");
    }
    SizingTable table;
    table.threshold_gws = threshold.value;
    table.ek_lo_gws = static_cast<int>(std::floor(std::max(1.0, ek_min_gws)));
    std::vector<double> grid;
    for (int e = table.ek_lo_gws; e <= static_cast<int>(std::ceil(threshold.value)); ++e) {
        grid.push_back(static_cast<double>(e));
    }
    const SizingSweep sweep = sweep_actions(model, disturbance, ffr_template, epc_template,
                                            std::move(grid), params, workers);
    table.di_mw = sweep.di_reduction_mw;
    table.ffr_mw = sweep.ffr_mw;
    table.epc_mw = sweep.epc_mw;
    return table;
}

SizingSweep sweep_actions(const FrequencyModel& model, const Disturbance& disturbance,
                          const SteppedReserve& ffr_template,
                          const SteppedReserve& epc_template, std::vector<double> ek_grid,
                          const SimParams& params, int workers) {
    SizingSweep sweep;
    sweep.kinetic_energy_gws = std::move(ek_grid);
    const std::size_t n = sweep.kinetic_energy_gws.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sweep.di_reduction_mw.assign(n, nan);
    sweep.ffr_mw.assign(n, nan);
    sweep.epc_mw.assign(n, nan);

    auto size_point = [&](std::size_t i) {
        FrequencyModel m = model;
        m.kinetic_energy_gws = sweep.kinetic_energy_gws[i];
        const auto di = size_action(m, disturbance, RemedyAction::DiReduction, ffr_template,
                                    params);
        const auto ffr = size_action(m, disturbance, RemedyAction::Ffr, ffr_template, params);
        const auto epc = size_action(m, disturbance, RemedyAction::Epc, epc_template, params);
        if (di.reachable) sweep.di_reduction_mw[i] = di.value;
        if (ffr.reachable) sweep.ffr_mw[i] = ffr.value;
        if (epc.reachable) sweep.epc_mw[i] = epc.value;
    };

#ifdef _OPENMP
    if (workers > 1) {
        std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                size_point(static_cast<std::size_t>(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (const auto& err : errors) {
            if (err) {
                std::rethrow_exception(err);
            }
        }
        return sweep;
    }
#else
    (void)workers;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        size_point(i);
    }
    return sweep;
}

}  // namespace hvdc::freq

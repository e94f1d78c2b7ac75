#pragma once

#include "hvdc/frequency.hpp"

#include <vector>

namespace hvdc::freq {

enum class RemedyAction { DiReduction, Ffr, Epc };

std::string to_string(RemedyAction action);
std::optional<RemedyAction> parse_action(const std::string& text);

/// Result of a sizing search; reachable == false when no value within the
/// search range meets the nadir floor.
struct SizingOutcome {
    bool reachable = false;
    double value = 0.0;
};

/// Minimal kinetic energy (bisection to 0.1 GWs within [1, 1000]) whose
/// nadir stays at or above the model's floor. Relies on nadir being
/// monotone non-decreasing in kinetic energy.
SizingOutcome required_kinetic_energy(const FrequencyModel& model,
                                      const Disturbance& disturbance,
                                      const std::optional<SteppedReserve>& ffr,
                                      const std::optional<SteppedReserve>& epc,
                                      const SimParams& params);

/// Smallest remedial action securing the hour. DI reduction moves in
/// 50 MW blocks subtracted from the disturbance; FFR and EPC size one
/// block at the template's trigger, 1 MW resolution, capped at the
/// disturbance size.
SizingOutcome size_action(const FrequencyModel& model, const Disturbance& disturbance,
                          RemedyAction action, const SteppedReserve& reserve_template,
                          const SimParams& params);

/// Required MW of every action over a kinetic-energy grid (the study's
/// action-size-versus-inertia sweep). Entries are NaN when unreachable.
struct SizingSweep {
    std::vector<double> kinetic_energy_gws;
    std::vector<double> di_reduction_mw;
    std::vector<double> ffr_mw;
    std::vector<double> epc_mw;
};

SizingSweep sweep_actions(const FrequencyModel& model, const Disturbance& disturbance,
                          const SteppedReserve& ffr_template,
                          const SteppedReserve& epc_template, std::vector<double> ek_grid,
                          const SimParams& params, int workers);

/// Per-action requirement lookup at 1 GWs resolution, precomputed once so
/// planning a long series does not re-run bisections per hour. Lookups
/// floor the kinetic energy (conservative) and clamp to the table range.
struct SizingTable {
    double threshold_gws = 0.0;
    int ek_lo_gws = 0;
    std::vector<double> di_mw;  // NaN where unreachable
    std::vector<double> ffr_mw;
    std::vector<double> epc_mw;

    std::optional<double> requirement(RemedyAction action, double ek_gws) const;
};

SizingTable build_sizing_table(const FrequencyModel& model, const Disturbance& disturbance,
                               const SteppedReserve& ffr_template,
                               const SteppedReserve& epc_template, double ek_min_gws,
                               const SimParams& params, int workers);

}  // namespace hvdc::freq

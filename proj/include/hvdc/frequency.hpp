#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hvdc::freq {

/// Single-machine equivalent of the synchronous system. FCR-D follows a
/// first-order lag toward its static droop characteristic, fully activated
/// over the band [fcr_band_upper, fcr_band_lower].
struct FrequencyModel {
    double f0_hz = 50.0;
    double kinetic_energy_gws = 120.0;
    double fcr_d_mw = 1450.0;
    double fcr_band_upper_hz = 49.9;
    double fcr_band_lower_hz = 49.5;
    double fcr_lag_s = 7.2;
    double load_damping_mw_per_hz = 0.0;
    double nadir_floor_hz = 49.0;
    double load_shed_hz = 48.8;
};

struct ReserveTrigger {
    double threshold_hz = 49.6;
    double block_mw = 0.0;
};

/// Stepwise-triggered reserve, used for both FFR and HVDC EPC: once the
/// frequency crosses a trigger threshold, its block is injected after
/// activation_delay_s, ramping linearly over full_activation_s. With
/// sustain, the block is held for the remainder of the horizon; otherwise
/// it drops out when the frequency recovers above the threshold.
struct SteppedReserve {
    std::vector<ReserveTrigger> triggers;
    double activation_delay_s = 1.0;
    double full_activation_s = 0.3;
    bool sustain = true;
};

struct Disturbance {
    double lost_generation_mw = 1450.0;
    double onset_s = 0.0;
};

struct SimParams {
    double horizon_s = 60.0;
    double dt_s = 0.01;
};

struct TrajectorySample {
    double t_s = 0.0;
    double f_hz = 50.0;
    double p_fcr_mw = 0.0;
    double p_ffr_mw = 0.0;
    double p_epc_mw = 0.0;
};

struct ReserveActivation {
    std::string reserve;  // "ffr" or "epc"
    double threshold_hz = 0.0;
    double time_s = 0.0;
    double block_mw = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double nadir_hz = 50.0;
    double nadir_time_s = 0.0;
    bool load_shed = false;
    std::vector<ReserveActivation> activations;
};

/// Fixed-step RK4 integration of the post-disturbance frequency.
/// Threshold crossings are resolved at step granularity; reported
/// frequency is clamped at load_shed_hz with the shed flag raised.
Trajectory simulate(const FrequencyModel& model, const Disturbance& disturbance,
                    const std::optional<SteppedReserve>& ffr,
                    const std::optional<SteppedReserve>& epc, const SimParams& params);

/// Closed comparison: a nadir exactly on the floor is secure.
bool nadir_ok(const Trajectory& trajectory, double floor_hz);

/// Default reserve shapes. FFR reacts with commercial-product delays;
/// HVDC converters act faster. Both are study assumptions, configurable
/// through model.json.
SteppedReserve default_ffr_template();
SteppedReserve default_epc_template();

struct FrequencyStudy {
    FrequencyModel model;
    Disturbance disturbance;
    std::optional<SteppedReserve> ffr;
    std::optional<SteppedReserve> epc;
};

FrequencyStudy study_from_json(const nlohmann::json& doc);
nlohmann::json study_to_json(const FrequencyStudy& study);

}  // namespace hvdc::freq

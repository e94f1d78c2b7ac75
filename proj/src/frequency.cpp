#include "hvdc/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hvdc::freq {

namespace {

constexpr double kGwsToMws = 1000.0;  // kinetic energy GWs -> MW*s

// Latched state of one stepped reserve during the run.
struct ReserveState {
    const SteppedReserve* reserve = nullptr;
    std::vector<double> trigger_time_s;  // NaN until latched
    std::vector<bool> active;

    explicit ReserveState(const SteppedReserve* r)
        : reserve(r),
          trigger_time_s(r ? r->triggers.size() : 0,
                         std::numeric_limits<double>::quiet_NaN()),
          active(r ? r->triggers.size() : 0, false) {}

    // Power injected at time t for the current latch state.
    double power(double t) const {
        if (reserve == nullptr) {
            return 0.0;
        }
        double p = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            if (!active[i]) {
                continue;
            }
            const double start = trigger_time_s[i] + reserve->activation_delay_s;
            if (t <= start) {
                continue;
            }
            const double ramp = reserve->full_activation_s;
            const double frac = ramp <= 0.0 ? 1.0 : std::clamp((t - start) / ramp, 0.0, 1.0);
            p += reserve->triggers[i].block_mw * frac;
        }
        return p;
    }

    // Latch/release at a step boundary; returns newly latched triggers.
    void update(double t, double f, std::vector<ReserveActivation>& log,
                const std::string& name) {
        if (reserve == nullptr) {
            return;
        }
        for (std::size_t i = 0; i < active.size(); ++i) {
            const double thr = reserve->triggers[i].threshold_hz;
            if (!active[i] && f < thr && std::isnan(trigger_time_s[i])) {
                trigger_time_s[i] = t;
                active[i] = true;
                log.push_back({name, thr, t, reserve->triggers[i].block_mw});
            } else if (active[i] && !reserve->sustain && f > thr) {
                active[i] = false;
                trigger_time_s[i] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
};

void check_reserve(const SteppedReserve& r, const char* name) {
    for (const auto& trig : r.triggers) {
        if (trig.block_mw <= 0.0) {
            throw std::invalid_argument(std::string(name) + ": reserve blocks must be positive");
        }
    }
    for (std::size_t i = 1; i < r.triggers.size(); ++i) {
        if (r.triggers[i].threshold_hz >= r.triggers[i - 1].threshold_hz) {
            throw std::invalid_argument(std::string(name) +
                                        ": trigger thresholds must be strictly decreasing");
        }
    }
}

}  // namespace

Trajectory simulate(const FrequencyModel& model, const Disturbance& disturbance,
                    const std::optional<SteppedReserve>& ffr,
                    const std::optional<SteppedReserve>& epc, const SimParams& params) {
    if (params.dt_s <= 0.0 || params.dt_s > 0.05) {
        throw std::invalid_argument("simulate: dt must be in (0, 0.05] s");
    }
    if (params.horizon_s < 30.0) {
        throw std::invalid_argument("simulate: horizon must be at least 30 s");
    }
    if (model.kinetic_energy_gws <= 0.0) {
        throw std::invalid_argument("simulate: kinetic energy must be positive");
    }
    if (model.fcr_band_upper_hz <= model.fcr_band_lower_hz) {
        throw std::invalid_argument("simulate: FCR band upper must exceed lower");
    }
    if (disturbance.lost_generation_mw < 0.0) {
        throw std::invalid_argument("simulate: disturbance must be non-negative");
    }
    if (ffr) check_reserve(*ffr, "ffr");
    if (epc) check_reserve(*epc, "epc");

    const double two_ek_mws = 2.0 * model.kinetic_energy_gws * kGwsToMws;
    const double band = model.fcr_band_upper_hz - model.fcr_band_lower_hz;

    ReserveState ffr_state(ffr ? &*ffr : nullptr);
    ReserveState epc_state(epc ? &*epc : nullptr);

    auto fcr_target = [&](double f) {
        const double x = (model.fcr_band_upper_hz - f) / band;
        return model.fcr_d_mw * std::clamp(x, 0.0, 1.0);
    };
    auto lost = [&](double t) {
        return t >= disturbance.onset_s ? disturbance.lost_generation_mw : 0.0;
    };

    // state: (df = f - f0, p_fcr); stepped reserves are explicit in time
    auto derivative = [&](double t, double df, double p_fcr, double& ddf,
                          double& dp_fcr) {
        const double f = model.f0_hz + df;
        const double p_step = ffr_state.power(t) + epc_state.power(t);
        const double net =
            p_fcr + p_step - lost(t) - model.load_damping_mw_per_hz * df;
        ddf = model.f0_hz * net / two_ek_mws;
        dp_fcr = model.fcr_lag_s <= 1e-9 ? 0.0 : (fcr_target(f) - p_fcr) / model.fcr_lag_s;
    };

    const std::size_t steps = static_cast<std::size_t>(std::ceil(params.horizon_s / params.dt_s));
    Trajectory traj;
    traj.samples.reserve(steps + 1);

    double df = 0.0;
    double p_fcr = 0.0;
    double t = 0.0;

    auto record = [&](double time, double dfreq, double pfcr) {
        const double f_raw = model.f0_hz + dfreq;
        TrajectorySample s;
        s.t_s = time;
        if (f_raw < model.load_shed_hz) {
            traj.load_shed = true;
            s.f_hz = model.load_shed_hz;
        } else {
            s.f_hz = f_raw;
        }
        s.p_fcr_mw = pfcr;
        s.p_ffr_mw = ffr_state.power(time);
        s.p_epc_mw = epc_state.power(time);
        traj.samples.push_back(s);
    };

    ffr_state.update(t, model.f0_hz + df, traj.activations, "ffr");
    epc_state.update(t, model.f0_hz + df, traj.activations, "epc");
    record(t, df, p_fcr);

    for (std::size_t n = 0; n < steps; ++n) {
        const double h = params.dt_s;
        double k1f, k1p, k2f, k2p, k3f, k3p, k4f, k4p;
        derivative(t, df, p_fcr, k1f, k1p);
        derivative(t + 0.5 * h, df + 0.5 * h * k1f, p_fcr + 0.5 * h * k1p, k2f, k2p);
        derivative(t + 0.5 * h, df + 0.5 * h * k2f, p_fcr + 0.5 * h * k2p, k3f, k3p);
        derivative(t + h, df + h * k3f, p_fcr + h * k3p, k4f, k4p);
        df += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        p_fcr += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        t += h;

        if (!std::isfinite(df) || !std::isfinite(p_fcr)) {
            throw std::runtime_error("simulate: state became non-finite at t=" +
                                     std::to_string(t));
        }

        ffr_state.update(t, model.f0_hz + df, traj.activations, "ffr");
        epc_state.update(t, model.f0_hz + df, traj.activations, "epc");
        record(t, df, p_fcr);
    }

    traj.nadir_hz = traj.samples.front().f_hz;
    traj.nadir_time_s = traj.samples.front().t_s;
    for (const auto& s : traj.samples) {
        if (s.f_hz < traj.nadir_hz) {
            traj.nadir_hz = s.f_hz;
            traj.nadir_time_s = s.t_s;
        }
    }
    return traj;
}

bool nadir_ok(const Trajectory& trajectory, double floor_hz) {
    return trajectory.nadir_hz >= floor_hz;
}

SteppedReserve default_ffr_template() {
    SteppedReserve r;
    r.triggers = {ReserveTrigger{49.6, 0.0}};
    r.activation_delay_s = 1.0;
    r.full_activation_s = 0.3;
    r.sustain = true;
    return r;
}

SteppedReserve default_epc_template() {
    SteppedReserve r;
    r.triggers = {ReserveTrigger{49.6, 0.0}};
    r.activation_delay_s = 0.25;
    r.full_activation_s = 0.25;
    r.sustain = true;
    return r;
}

namespace {

using nlohmann::json;

SteppedReserve reserve_from_json(const json& doc) {
    SteppedReserve r;
    r.triggers.clear();
    for (const auto& jt : doc.at("triggers")) {
        r.triggers.push_back(
            {jt.at("threshold_hz").get<double>(), jt.at("block_mw").get<double>()});
    }
    r.activation_delay_s = doc.value("activation_delay_s", 1.0);
    r.full_activation_s = doc.value("full_activation_s", 0.3);
    r.sustain = doc.value("sustain", true);
    return r;
}

json reserve_to_json(const SteppedReserve& r) {
    json triggers = json::array();
    for (const auto& trig : r.triggers) {
        triggers.push_back({{"threshold_hz", trig.threshold_hz}, {"block_mw", trig.block_mw}});
    }
    return {{"triggers", triggers},
            {"activation_delay_s", r.activation_delay_s},
            {"full_activation_s", r.full_activation_s},
            {"sustain", r.sustain}};
}

}  // namespace

FrequencyStudy study_from_json(const nlohmann::json& doc) {
    FrequencyStudy study;
    study.model.f0_hz = doc.value("f0_hz", 50.0);
    study.model.kinetic_energy_gws = doc.at("kinetic_energy_gws").get<double>();
    study.model.fcr_d_mw = doc.value("fcr_d_mw", 1450.0);
    if (doc.contains("fcr_band_hz")) {
        study.model.fcr_band_upper_hz = doc["fcr_band_hz"].at(0).get<double>();
        study.model.fcr_band_lower_hz = doc["fcr_band_hz"].at(1).get<double>();
    }
    study.model.fcr_lag_s = doc.value("fcr_lag_s", 7.2);
    study.model.load_damping_mw_per_hz = doc.value("load_damping_mw_per_hz", 0.0);
    study.model.nadir_floor_hz = doc.value("nadir_floor_hz", 49.0);
    study.model.load_shed_hz = doc.value("load_shed_hz", 48.8);
    if (study.model.nadir_floor_hz <= study.model.load_shed_hz ||
        study.model.nadir_floor_hz >= study.model.f0_hz) {
        throw std::invalid_argument(
            "frequency model: nadir floor must lie between load-shed level and f0");
    }
    if (doc.contains("disturbance")) {
        study.disturbance.lost_generation_mw =
            doc["disturbance"].value("lost_generation_mw", 1450.0);
        study.disturbance.onset_s = doc["disturbance"].value("onset_s", 0.0);
    }
    if (doc.contains("ffr") && !doc["ffr"].is_null()) {
        study.ffr = reserve_from_json(doc["ffr"]);
    }
    if (doc.contains("epc") && !doc["epc"].is_null()) {
        study.epc = reserve_from_json(doc["epc"]);
    }
    return study;
}

nlohmann::json study_to_json(const FrequencyStudy& study) {
    json doc = {
        {"f0_hz", study.model.f0_hz},
        {"kinetic_energy_gws", study.model.kinetic_energy_gws},
        {"fcr_d_mw", study.model.fcr_d_mw},
        {"fcr_band_hz", {study.model.fcr_band_upper_hz, study.model.fcr_band_lower_hz}},
        {"fcr_lag_s", study.model.fcr_lag_s},
        {"load_damping_mw_per_hz", study.model.load_damping_mw_per_hz},
        {"nadir_floor_hz", study.model.nadir_floor_hz},
        {"load_shed_hz", study.model.load_shed_hz},
        {"disturbance",
         {{"lost_generation_mw", study.disturbance.lost_generation_mw},
          {"onset_s", study.disturbance.onset_s}}},
    };
    if (study.ffr) {
        doc["ffr"] = reserve_to_json(*study.ffr);
    }
    if (study.epc) {
        doc["epc"] = reserve_to_json(*study.epc);
    }
    return doc;
}

}  // namespace hvdc::freq

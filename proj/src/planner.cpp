#include "hvdc/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace hvdc::plan {

std::size_t RemedialPlan::active_hours() const {
    std::size_t n = 0;
    for (double mw : hourly_mw) {
        if (mw > 0.0) {
            ++n;
        }
    }
    return n;
}

double RemedialPlan::energy_gwh() const {
    double mwh = 0.0;
    for (double mw : hourly_mw) {
        mwh += mw;
    }
    return mwh / 1000.0;
}

std::vector<std::size_t> deficit_hours(const HourlySeries& kinetic_energy,
                                       double threshold_gws) {
    std::vector<std::size_t> hours;
    for (std::size_t h = 0; h < kinetic_energy.values.size(); ++h) {
        if (kinetic_energy.values[h] < threshold_gws) {
            hours.push_back(h);
        }
    }
    return hours;
}

namespace {

struct Run {
    std::size_t start = 0;
    std::size_t end = 0;  // inclusive
};

std::vector<Run> maximal_runs(const std::vector<std::size_t>& hours) {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < hours.size(); ++i) {
        if (!runs.empty() && hours[i] == runs.back().end + 1) {
            runs.back().end = hours[i];
        } else {
            runs.push_back({hours[i], hours[i]});
        }
    }
    return runs;
}

}  // namespace

RemedialPlan plan_di_reduction(const HourlySeries& kinetic_energy, double threshold_gws,
                               const SizingFn& sizing, std::size_t pad_h,
                               std::size_t merge_gap_h) {
    const std::size_t horizon = kinetic_energy.values.size();
    RemedialPlan plan;
    plan.strategy = freq::RemedyAction::DiReduction;
    plan.occasions_applicable = true;
    plan.hourly_mw.assign(horizon, 0.0);

    const auto deficits = deficit_hours(kinetic_energy, threshold_gws);
    if (deficits.empty()) {
        return plan;
    }

    // pad each maximal deficit run, then merge runs whose gap closed
    std::vector<Run> runs = maximal_runs(deficits);
    for (auto& run : runs) {
        run.start = run.start >= pad_h ? run.start - pad_h : 0;
        run.end = std::min(run.end + pad_h, horizon - 1);
    }
    std::vector<Run> merged;
    for (const auto& run : runs) {
        if (!merged.empty() && run.start <= merged.back().end + merge_gap_h + 1) {
            merged.back().end = std::max(merged.back().end, run.end);
        } else {
            merged.push_back(run);
        }
    }

    // a nuclear limitation is not modulated hour by hour: each event is
    // held at the maximum sized requirement, rounded up to 50 MW blocks
    std::size_t next_deficit = 0;
    for (const auto& run : merged) {
        double required = 0.0;
        while (next_deficit < deficits.size() && deficits[next_deficit] <= run.end) {
            const std::size_t h = deficits[next_deficit];
            ++next_deficit;
            const auto mw = sizing(h);
            if (!mw) {
                plan.infeasible_hours.push_back(h);
                continue;
            }
            required = std::max(required, *mw);
        }
        const double event_mw =
            required <= 0.0 ? 0.0 : 50.0 * std::ceil(required / 50.0 - 1e-12);
        plan.events.push_back({run.start, run.end, event_mw});
        for (std::size_t h = run.start; h <= run.end; ++h) {
            plan.hourly_mw[h] = event_mw;
        }
    }
    return plan;
}

RemedialPlan plan_stepped(const HourlySeries& kinetic_energy, double threshold_gws,
                          const SizingFn& sizing, freq::RemedyAction strategy) {
    if (strategy == freq::RemedyAction::DiReduction) {
        throw std::invalid_argument("plan_stepped: strategy must be Ffr or Epc");
    }
    RemedialPlan plan;
    plan.strategy = strategy;
    plan.occasions_applicable = false;
    plan.hourly_mw.assign(kinetic_energy.values.size(), 0.0);
    for (std::size_t h : deficit_hours(kinetic_energy, threshold_gws)) {
        const auto mw = sizing(h);
        if (!mw) {
            plan.infeasible_hours.push_back(h);
            continue;
        }
        plan.hourly_mw[h] = *mw;
    }
    return plan;
}

nlohmann::json plan_to_json(const RemedialPlan& plan) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& ev : plan.events) {
        events.push_back(
            {{"start_hour", ev.start_hour}, {"end_hour", ev.end_hour}, {"mw", ev.mw}});
    }
    nlohmann::json doc = {
        {"strategy", freq::to_string(plan.strategy)},
        {"hourly_mw", plan.hourly_mw},
        {"events", events},
        {"occasions_applicable", plan.occasions_applicable},
        {"infeasible_hours", plan.infeasible_hours},
        {"totals",
         {{"occasions", plan.occasions()},
          {"hours", plan.active_hours()},
          {"energy_gwh", plan.energy_gwh()}}},
    };
    return doc;
}

RemedialPlan plan_from_json(const nlohmann::json& doc) {
    RemedialPlan plan;
    const auto strategy = freq::parse_action(doc.at("strategy").get<std::string>());
    if (!strategy) {
        throw std::invalid_argument("plan: unknown strategy " + doc.at("strategy").dump());
    }
    plan.strategy = *strategy;
    plan.hourly_mw = doc.at("hourly_mw").get<std::vector<double>>();
    for (const auto& jev : doc.value("events", nlohmann::json::array())) {
        plan.events.push_back({jev.at("start_hour").get<std::size_t>(),
                               jev.at("end_hour").get<std::size_t>(),
                               jev.at("mw").get<double>()});
    }
    plan.occasions_applicable = doc.value("occasions_applicable", false);
    plan.infeasible_hours =
        doc.value("infeasible_hours", std::vector<std::size_t>{});
    return plan;
}

}  // namespace hvdc::plan

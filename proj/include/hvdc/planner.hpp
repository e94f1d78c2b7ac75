#pragma once

#include "hvdc/network.hpp"
#include "hvdc/sizing.hpp"

#include "json.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hvdc::plan {

/// Required action size in MW for one hour; nullopt when the action
/// cannot secure that hour at all.
using SizingFn = std::function<std::optional<double>(std::size_t hour)>;

struct RemedialEvent {
    std::size_t start_hour = 0;  // inclusive
    std::size_t end_hour = 0;    // inclusive
    double mw = 0.0;
};

/// Per-strategy remedial plan over the study horizon. A DI-reduction plan
/// groups deficit hours into padded, merged events held at a constant
/// 50 MW-block size; stepped reserves (FFR, EPC) are reserved only in the
/// deficit hours themselves, so events and occasions do not apply.
struct RemedialPlan {
    freq::RemedyAction strategy = freq::RemedyAction::DiReduction;
    std::vector<double> hourly_mw;
    std::vector<RemedialEvent> events;
    bool occasions_applicable = false;
    std::vector<std::size_t> infeasible_hours;

    std::size_t occasions() const { return events.size(); }
    std::size_t active_hours() const;
    double energy_gwh() const;  // sum MW*h / 1000
};

/// Hours whose kinetic energy is strictly below the threshold.
std::vector<std::size_t> deficit_hours(const HourlySeries& kinetic_energy,
                                       double threshold_gws);

RemedialPlan plan_di_reduction(const HourlySeries& kinetic_energy, double threshold_gws,
                               const SizingFn& sizing, std::size_t pad_h,
                               std::size_t merge_gap_h);

RemedialPlan plan_stepped(const HourlySeries& kinetic_energy, double threshold_gws,
                          const SizingFn& sizing, freq::RemedyAction strategy);

nlohmann::json plan_to_json(const RemedialPlan& plan);
RemedialPlan plan_from_json(const nlohmann::json& doc);

}  // namespace hvdc::plan

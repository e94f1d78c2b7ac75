#pragma once

#include "hvdc/costs.hpp"
#include "hvdc/planner.hpp"
#include "hvdc/sizing.hpp"

#include <filesystem>

namespace hvdc::cba {

/// Inputs of the full remedial-action cost-benefit study: the hourly
/// kinetic-energy series, the frequency study (model, disturbance and
/// reserve templates), the price book, and the planner knobs.
struct StudyInputs {
    HourlySeries kinetic_energy;
    freq::FrequencyStudy study;
    cost::PriceBook prices;
    std::size_t pad_h = 2;
    std::size_t merge_gap_h = 6;
    freq::SimParams sim;
    int workers = 1;
};

struct StudyResult {
    double threshold_gws = 0.0;
    std::size_t deficit_hours = 0;
    plan::RemedialPlan di;
    plan::RemedialPlan ffr;
    plan::RemedialPlan epc;
    cost::CostReport costs;
};

/// Sizes the security threshold, builds the three remedial plans from the
/// kinetic-energy series and prices them. Deterministic for fixed inputs
/// and seed under any worker count.
StudyResult run_study(const StudyInputs& inputs);

/// table1.csv: per-strategy occasions (where applicable), hours, energy.
void write_table1_csv(const StudyResult& result, const std::filesystem::path& path);

/// fig3.csv: per-strategy total euro cost with the itemized breakdown.
void write_fig3_csv(const StudyResult& result, const std::filesystem::path& path);

}  // namespace hvdc::cba

#pragma once

#include "hvdc/market.hpp"

#include <filesystem>

namespace hvdc::market {

/// Annual aggregates of one clearing mode. Losses are realized losses at
/// the cleared flows, split by line kind.
struct YearReport {
    LossMode mode = LossMode::NoFactors;
    int pwl_segments = 5;
    std::size_t horizon_hours = 0;
    std::size_t feasible_hours = 0;
    std::vector<std::size_t> infeasible_hours;
    double hvdc_loss_mwh = 0.0;
    double ac_loss_mwh = 0.0;
    double welfare_eur = 0.0;
    double settlement_eur = 0.0;

    double total_loss_mwh() const { return hvdc_loss_mwh + ac_loss_mwh; }
};

struct YearRun {
    YearReport report;
    std::vector<MarketSolution> hours;
    std::vector<double> settlement_by_hour;
};

/// Serial reference implementation of the year batch. Kept as the baseline
/// the parallel kernel is verified against.
YearRun run_year_serial(const NetworkModel& network, const YearBids& bids,
                        ClearingOptions options);

/// Year batch with hours cleared on an OpenMP worker pool. Solutions are
/// stored per hour and aggregated in hour order, so the report is
/// identical for every worker count. workers <= 1 uses the serial path.
YearRun run_year(const NetworkModel& network, const YearBids& bids, ClearingOptions options,
                 int workers);

struct SavingsRecord {
    LossMode reference_mode = LossMode::NoFactors;
    LossMode alternative_mode = LossMode::NoFactors;
    /// (welfare - settlement) of the alternative minus the reference.
    double savings_eur = 0.0;
    double hvdc_loss_delta_mwh = 0.0;
    double ac_loss_delta_mwh = 0.0;
    double net_loss_delta_mwh = 0.0;
    /// Net loss change relative to the reference total, in percent.
    double net_loss_delta_pct = 0.0;
};

/// Savings of running `alternative` instead of `reference`. Throws on
/// mismatched horizons.
SavingsRecord compare(const YearReport& reference, const YearReport& alternative);

nlohmann::json report_to_json(const YearReport& report);
YearReport report_from_json(const nlohmann::json& doc);
nlohmann::json savings_to_json(const SavingsRecord& record);

/// losses.csv: hour, interconnector, flow_mw, modeled_loss_mw, realized_loss_mw.
void write_losses_csv(const YearRun& run, const std::filesystem::path& path);

}  // namespace hvdc::market

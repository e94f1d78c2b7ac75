#pragma once

#include "hvdc/network.hpp"
#include "hvdc/planner.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hvdc::cost {

/// Compensation terms of a dimensioning-incident reduction: opportunity
/// cost of the withheld energy, a fixed fee per event, and substitute
/// power procured in the regulating market for the first hours of each
/// event (hourly series when available, scalar mean otherwise).
struct DiCostParams {
    double opportunity_eur_mwh = 4.64;
    double fixed_eur_per_event = 4740.0;
    std::optional<HourlySeries> regulating_price;
    double regulating_price_scalar_eur_mwh = 54.06;
    std::size_t substitute_hours_per_event = 24;
};

struct FfrCostParams {
    double price_eur_mw_h = 48.95;
    std::vector<std::pair<std::string, double>> tso_shares = {
        {"Energinet", 0.14}, {"Statnett", 0.42}, {"SvK", 0.24}, {"Fingrid", 0.20}};
};

struct EpcCostParams {
    std::vector<double> reserve_price_samples;      // EUR/MW/h
    std::vector<double> reservation_price_samples;  // EUR/MW/h, congestion rents
    std::size_t bootstrap_n = 10000;
    std::uint64_t seed = 0;
};

struct CostItem {
    std::string label;
    double eur = 0.0;
};

struct BootstrapSummary {
    double mean_eur = 0.0;
    double p05_eur = 0.0;
    double p95_eur = 0.0;
};

struct StrategyCost {
    freq::RemedyAction strategy = freq::RemedyAction::DiReduction;
    std::vector<CostItem> items;
    double total_eur = 0.0;
    std::map<std::string, double> tso_attribution_eur;  // FFR only
    std::optional<BootstrapSummary> bootstrap;          // EPC only
};

StrategyCost di_cost(const plan::RemedialPlan& plan, const DiCostParams& params);
StrategyCost ffr_cost(const plan::RemedialPlan& plan, const FfrCostParams& params);

/// Bootstrap pricing of the EPC plan: each replicate resamples both price
/// lists with replacement, takes their means and prices the reserved
/// volume at their sum. Deterministic for a fixed seed under any worker
/// count (replicate index derives its own substream).
StrategyCost epc_cost(const plan::RemedialPlan& plan, const EpcCostParams& params,
                      int workers = 1);

struct SavingsEntry {
    std::string cheaper;
    std::string baseline;
    std::optional<double> savings_pct;  // 1 - total_a / total_b; nullopt when undefined
};

struct CostReport {
    StrategyCost di;
    StrategyCost ffr;
    StrategyCost epc;
    std::vector<SavingsEntry> savings;
};

CostReport compare_costs(const StrategyCost& di, const StrategyCost& ffr,
                         const StrategyCost& epc);

struct PriceBook {
    DiCostParams di;
    FfrCostParams ffr;
    EpcCostParams epc;
};

PriceBook prices_from_json(const nlohmann::json& doc);
nlohmann::json prices_to_json(const PriceBook& prices);
nlohmann::json cost_report_to_json(const CostReport& report);

}  // namespace hvdc::cost

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hvdc {

enum class SyncArea { Nordic, ContinentalEurope, Baltic };

struct Zone {
    std::string id;
    std::string name;
    SyncArea area = SyncArea::Nordic;
};

enum class BidSide { Supply, Demand };

struct BidStep {
    double quantity_mw = 0.0;
    double price_eur_mwh = 0.0;
};

/// Stepwise day-ahead bid curve for one zone and side. Supply step prices
/// must be non-decreasing, demand non-increasing, quantities strictly positive.
struct BidCurve {
    BidSide side = BidSide::Supply;
    std::vector<BidStep> steps;
};

/// True interconnector loss L(f) = a0 + b*|f| + c*f^2, valid for |f| <= p_max.
struct QuadraticLossModel {
    double a0_mw = 0.0;     // no-load / constant loss
    double b = 0.0;         // linear coefficient, dimensionless
    double c_per_mw = 0.0;  // quadratic coefficient, 1/MW
    double p_max_mw = 0.0;  // rated flow
};

enum class LineKind { AC, HVDC };

/// Directed interconnector between two bidding zones. Flow is positive
/// from from_zone to to_zone; ATC bounds are per direction. A present
/// fixed_flow pins the line to a historical exchange: it contributes a
/// constant to both zonal balances and is never loss-internalized.
struct Interconnector {
    std::string id;
    std::string from_zone;
    std::string to_zone;
    LineKind kind = LineKind::HVDC;
    double atc_forward_mw = 0.0;
    double atc_reverse_mw = 0.0;
    QuadraticLossModel loss;
    std::optional<double> fixed_flow_mw;
};

/// Per-hour replacement of ATC bounds or the pinned exchange of one line.
struct HourlyOverride {
    std::size_t hour = 0;
    std::string interconnector;
    std::optional<double> atc_forward_mw;
    std::optional<double> atc_reverse_mw;
    std::optional<double> fixed_flow_mw;
};

struct NetworkModel {
    std::vector<Zone> zones;
    std::vector<Interconnector> interconnectors;
    std::vector<HourlyOverride> overrides;

    /// Index of the zone with the given id, or nullopt.
    std::optional<std::size_t> zone_index(const std::string& id) const;

    /// Interconnector by position with any overrides for `hour` applied.
    Interconnector line_at_hour(std::size_t line, std::size_t hour) const;
};

enum class SeriesUnit { Mw, Gws, EurPerMwh, EurPerMwPerHour };

std::string to_string(SeriesUnit unit);
std::optional<SeriesUnit> parse_series_unit(const std::string& text);

/// A study-horizon time series with an explicit unit tag. Horizons shorter
/// than a full year are allowed; the horizon is a property of the study.
struct HourlySeries {
    std::string label;
    SeriesUnit unit = SeriesUnit::Mw;
    std::vector<double> values;
};

/// One broken invariant. Violations are data, not failures: validation of
/// hostile input never throws.
struct Violation {
    std::string entity;
    std::string rule;
};

std::vector<Violation> validate(const NetworkModel& network);
std::vector<Violation> validate(const BidCurve& curve, const std::string& entity);

}  // namespace hvdc

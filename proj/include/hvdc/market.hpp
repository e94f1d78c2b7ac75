#pragma once

#include "hvdc/io.hpp"
#include "hvdc/loss.hpp"
#include "hvdc/network.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hvdc::market {

/// Which loss approximations are internalized in the clearing, mirroring
/// the four study configurations: reference, linear HVDC factors,
/// piecewise-linear HVDC factors, piecewise-linear AC and HVDC factors.
enum class LossMode { NoFactors, LinearHvdc, PwlHvdc, PwlAcHvdc };

std::string to_string(LossMode mode);
std::optional<LossMode> parse_loss_mode(const std::string& text);

struct ClearingOptions {
    LossMode mode = LossMode::NoFactors;
    int pwl_segments = 5;
};

/// One hour of the market: network, per-zone curves, loss mode.
struct MarketInstance {
    std::size_t hour = 0;
    const NetworkModel* network = nullptr;
    std::map<std::string, ZoneBids> bids;
    ClearingOptions options;
};

enum class SolveStatus { Optimal, Infeasible };

struct ZoneResult {
    std::string zone;
    double price_eur_mwh = 0.0;  // dual of the zonal balance
    std::vector<double> accepted_supply_mw;
    std::vector<double> accepted_demand_mw;
};

struct LineResult {
    std::string id;
    double flow_mw = 0.0;           // net, positive from -> to
    double forward_mw = 0.0;        // sum of forward direction parts
    double reverse_mw = 0.0;        // sum of reverse direction parts
    double modeled_loss_mw = 0.0;   // internalized approximation at the net flow
    double realized_loss_mw = 0.0;  // true quadratic loss at the net flow
    double no_load_loss_mw = 0.0;
    bool internalized = false;
    bool pinned = false;
    std::string receiving_zone;
};

/// Zone whose balance could not be closed. mw > 0: the zone is forced to
/// absorb more than its demand and exports allow; mw < 0: its load and
/// pinned exports exceed supply plus import capability.
struct BindingZone {
    std::string zone;
    double mw = 0.0;
};

struct MarketSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::size_t hour = 0;
    std::vector<ZoneResult> zones;
    std::vector<LineResult> lines;
    double welfare_eur = 0.0;
    std::vector<BindingZone> binding;
};

/// Welfare-maximizing clearing of one hour. Throws std::invalid_argument
/// when the instance is structurally unusable (zone without curves,
/// network that fails validation); LP infeasibility is a result.
MarketSolution clear(const MarketInstance& instance);

/// Cost of procuring residual losses after the market: per line,
/// max(realized variable loss - internalized modeled loss, 0) plus the
/// no-load term, priced at the receiving zone. The reference mode, with
/// nothing internalized, settles the full realized loss.
double settle(const MarketSolution& solution);

nlohmann::json solution_to_json(const MarketSolution& solution);

}  // namespace hvdc::market

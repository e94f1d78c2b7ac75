#pragma once

#include "hvdc/network.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hvdc {

/// Raised on malformed input files; the message carries file and
/// line/field context.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Supply and demand curves of one zone for one hour.
struct ZoneBids {
    BidCurve supply{BidSide::Supply, {}};
    BidCurve demand{BidSide::Demand, {}};
};

/// Bid curves for a whole study horizon, indexed [hour][zone id].
using YearBids = std::vector<std::map<std::string, ZoneBids>>;

NetworkModel network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const NetworkModel& network);

/// Load + validate. Validation violations are rejected here: a model that
/// fails validate() never enters the pipeline.
NetworkModel load_network(const std::filesystem::path& path);
void save_network(const NetworkModel& network, const std::filesystem::path& path);

/// bids.csv: hour,zone,side,price_eur_mwh,quantity_mw (one row per step).
YearBids load_bids(const std::filesystem::path& path);
void save_bids(const YearBids& bids, const std::filesystem::path& path);

/// series.csv: hour,value rows after comment lines '#unit=...' (required)
/// and '#label=...' (optional). Unknown units are rejected.
HourlySeries load_series(const std::filesystem::path& path);
void save_series(const HourlySeries& series, const std::filesystem::path& path);

/// Shortest round-trip decimal rendering; all CSV output goes through this
/// so that reruns are byte-identical.
std::string fmt_double(double value);

}  // namespace hvdc

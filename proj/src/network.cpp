#include "hvdc/network.hpp"

#include "hvdc/loss.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace hvdc {

std::optional<std::size_t> NetworkModel::zone_index(const std::string& id) const {
    for (std::size_t i = 0; i < zones.size(); ++i) {
        if (zones[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

Interconnector NetworkModel::line_at_hour(std::size_t line, std::size_t hour) const {
    Interconnector ic = interconnectors.at(line);
    for (const auto& ov : overrides) {
        if (ov.hour != hour || ov.interconnector != ic.id) {
            continue;
        }
        if (ov.atc_forward_mw) {
            ic.atc_forward_mw = *ov.atc_forward_mw;
        }
        if (ov.atc_reverse_mw) {
            ic.atc_reverse_mw = *ov.atc_reverse_mw;
        }
        if (ov.fixed_flow_mw) {
            ic.fixed_flow_mw = *ov.fixed_flow_mw;
        }
    }
    return ic;
}

std::string to_string(SeriesUnit unit) {
    switch (unit) {
        case SeriesUnit::Mw: return "MW";
        case SeriesUnit::Gws: return "GWs";
        case SeriesUnit::EurPerMwh: return "EUR/MWh";
        case SeriesUnit::EurPerMwPerHour: return "EUR/MW/h";
    }
    return "MW";
}

std::optional<SeriesUnit> parse_series_unit(const std::string& text) {
    if (text == "MW") return SeriesUnit::Mw;
    if (text == "GWs") return SeriesUnit::Gws;
    if (text == "EUR/MWh") return SeriesUnit::EurPerMwh;
    if (text == "EUR/MW/h") return SeriesUnit::EurPerMwPerHour;
    return std::nullopt;
}

namespace {

void check_loss_model(const QuadraticLossModel& loss, const std::string& entity,
                      std::vector<Violation>& out) {
    if (loss.a0_mw < 0.0 || loss.b < 0.0 || loss.c_per_mw < 0.0) {
        out.push_back({entity, "loss coefficients must be non-negative"});
    }
    if (loss.p_max_mw <= 0.0) {
        out.push_back({entity, "loss model p_max must be positive"});
        return;
    }
    if (true_loss_unchecked(loss, loss.p_max_mw) >= loss.p_max_mw) {
        out.push_back({entity, "loss at rated flow must be strictly below the flow itself"});
    }
}

void check_pin(const Interconnector& ic, const std::string& entity,
               std::vector<Violation>& out) {
    if (!ic.fixed_flow_mw) {
        return;
    }
    const double f = *ic.fixed_flow_mw;
    if (f > ic.atc_forward_mw || -f > ic.atc_reverse_mw) {
        out.push_back({entity, "fixed_flow exceeds the ATC of its direction"});
    }
}

}  // namespace

std::vector<Violation> validate(const NetworkModel& network) {
    std::vector<Violation> out;

    std::unordered_set<std::string> zone_ids;
    for (const auto& z : network.zones) {
        if (!zone_ids.insert(z.id).second) {
            out.push_back({"zone " + z.id, "zone ids must be unique"});
        }
    }

    std::unordered_map<std::string, std::size_t> line_index;
    for (std::size_t i = 0; i < network.interconnectors.size(); ++i) {
        const auto& ic = network.interconnectors[i];
        const std::string entity = "interconnector " + ic.id;
        if (!line_index.emplace(ic.id, i).second) {
            out.push_back({entity, "interconnector ids must be unique"});
        }
        if (!zone_ids.contains(ic.from_zone)) {
            out.push_back({entity, "from_zone does not resolve to a declared zone"});
        }
        if (!zone_ids.contains(ic.to_zone)) {
            out.push_back({entity, "to_zone does not resolve to a declared zone"});
        }
        if (ic.from_zone == ic.to_zone) {
            out.push_back({entity, "from_zone must differ from to_zone"});
        }
        if (ic.atc_forward_mw < 0.0 || ic.atc_reverse_mw < 0.0) {
            out.push_back({entity, "ATC bounds must be non-negative"});
        }
        check_loss_model(ic.loss, entity, out);
        check_pin(ic, entity, out);
    }

    for (const auto& ov : network.overrides) {
        const std::string entity =
            "override hour " + std::to_string(ov.hour) + " " + ov.interconnector;
        auto it = line_index.find(ov.interconnector);
        if (it == line_index.end()) {
            out.push_back({entity, "override references an undeclared interconnector"});
            continue;
        }
        if ((ov.atc_forward_mw && *ov.atc_forward_mw < 0.0) ||
            (ov.atc_reverse_mw && *ov.atc_reverse_mw < 0.0)) {
            out.push_back({entity, "overridden ATC bounds must be non-negative"});
        }
        Interconnector effective = network.line_at_hour(it->second, ov.hour);
        check_pin(effective, entity, out);
    }

    return out;
}

std::vector<Violation> validate(const BidCurve& curve, const std::string& entity) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
        if (curve.steps[i].quantity_mw <= 0.0) {
            out.push_back({entity, "bid step quantities must be strictly positive"});
            break;
        }
    }
    for (std::size_t i = 1; i < curve.steps.size(); ++i) {
        const double prev = curve.steps[i - 1].price_eur_mwh;
        const double cur = curve.steps[i].price_eur_mwh;
        if (curve.side == BidSide::Supply && cur < prev) {
            out.push_back({entity, "supply step prices must be non-decreasing"});
            break;
        }
        if (curve.side == BidSide::Demand && cur > prev) {
            out.push_back({entity, "demand step prices must be non-increasing"});
            break;
        }
    }
    return out;
}

}  // namespace hvdc

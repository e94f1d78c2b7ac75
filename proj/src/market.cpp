#include "hvdc/market.hpp"

#include "hvdc/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hvdc::market {

std::string to_string(LossMode mode) {
    switch (mode) {
        case LossMode::NoFactors: return "none";
        case LossMode::LinearHvdc: return "linear-hvdc";
        case LossMode::PwlHvdc: return "pwl-hvdc";
        case LossMode::PwlAcHvdc: return "pwl-all";
    }
    return "none";
}

std::optional<LossMode> parse_loss_mode(const std::string& text) {
    if (text == "none") return LossMode::NoFactors;
    if (text == "linear-hvdc") return LossMode::LinearHvdc;
    if (text == "pwl-hvdc") return LossMode::PwlHvdc;
    if (text == "pwl-all") return LossMode::PwlAcHvdc;
    return std::nullopt;
}

namespace {

bool internalized_in_mode(const Interconnector& ic, LossMode mode) {
    if (ic.fixed_flow_mw) {
        return false;  // pinned exchanges never carry loss variables
    }
    switch (mode) {
        case LossMode::NoFactors: return false;
        case LossMode::LinearHvdc:
        case LossMode::PwlHvdc: return ic.kind == LineKind::HVDC;
        case LossMode::PwlAcHvdc: return true;
    }
    return false;
}

std::vector<LossSegment> direction_segments(const Interconnector& ic, double atc,
                                            const ClearingOptions& options,
                                            bool internalized) {
    const double bound = std::min(atc, ic.loss.p_max_mw);
    if (bound <= 0.0) {
        return {};
    }
    if (!internalized) {
        return {LossSegment{bound, 0.0}};
    }
    if (options.mode == LossMode::LinearHvdc) {
        return {LossSegment{bound, linearize_secant(ic.loss).gamma}};
    }
    return segments_up_to(build_pwl(ic.loss, options.pwl_segments), bound);
}

struct LineVars {
    std::size_t line_index = 0;
    bool internalized = false;
    std::size_t first_forward = 0;  // variable index of the first forward segment
    std::size_t n_forward = 0;
    std::size_t first_reverse = 0;
    std::size_t n_reverse = 0;
};

struct StepVar {
    std::size_t zone_index = 0;
    BidSide side = BidSide::Supply;
    std::size_t step = 0;
};

}  // namespace

MarketSolution clear(const MarketInstance& instance) {
    if (instance.network == nullptr) {
        throw std::invalid_argument("clear: instance has no network");
    }
    const NetworkModel& network = *instance.network;
    {
        const auto violations = validate(network);
        if (!violations.empty()) {
            throw std::invalid_argument("clear: network fails validation: " +
                                        violations.front().entity + ": " +
                                        violations.front().rule);
        }
    }
    if (instance.options.pwl_segments < 1) {
        throw std::invalid_argument("clear: pwl_segments must be >= 1");
    }
    for (const auto& [zone_id, zb] : instance.bids) {
        if (!network.zone_index(zone_id)) {
            throw std::invalid_argument("clear: bids reference unknown zone " + zone_id);
        }
    }

    const std::size_t n_zones = network.zones.size();
    lp::LpProblem problem;
    problem.rows.assign(n_zones, {});
    problem.rhs.assign(n_zones, 0.0);

    std::vector<StepVar> step_vars;
    std::vector<const BidCurve*> zone_supply(n_zones, nullptr);
    std::vector<const BidCurve*> zone_demand(n_zones, nullptr);

    // columns: bid steps per zone in model order, then flow segments per line
    std::vector<double> objective;
    std::vector<double> upper;
    struct Coef {
        std::size_t row;
        double value;
    };
    std::vector<std::vector<Coef>> columns;

    auto add_var = [&](double cost, double bound) {
        objective.push_back(cost);
        upper.push_back(bound);
        columns.emplace_back();
        return objective.size() - 1;
    };

    for (std::size_t z = 0; z < n_zones; ++z) {
        const auto it = instance.bids.find(network.zones[z].id);
        if (it == instance.bids.end() ||
            (it->second.supply.steps.empty() && it->second.demand.steps.empty())) {
            throw std::invalid_argument("clear: zone " + network.zones[z].id +
                                        " has no bid curve for hour " +
                                        std::to_string(instance.hour));
        }
        const ZoneBids& zb = it->second;
        for (const auto* curve : {&zb.supply, &zb.demand}) {
            const auto violations = validate(*curve, network.zones[z].id);
            if (!violations.empty()) {
                throw std::invalid_argument("clear: " + violations.front().entity + ": " +
                                            violations.front().rule);
            }
        }
        zone_supply[z] = &zb.supply;
        zone_demand[z] = &zb.demand;
        for (std::size_t k = 0; k < zb.demand.steps.size(); ++k) {
            const auto& step = zb.demand.steps[k];
            const std::size_t v = add_var(step.price_eur_mwh, step.quantity_mw);
            columns[v].push_back({z, +1.0});  // demand withdraws
            step_vars.push_back({z, BidSide::Demand, k});
        }
        for (std::size_t k = 0; k < zb.supply.steps.size(); ++k) {
            const auto& step = zb.supply.steps[k];
            const std::size_t v = add_var(-step.price_eur_mwh, step.quantity_mw);
            columns[v].push_back({z, -1.0});  // supply injects
            step_vars.push_back({z, BidSide::Supply, k});
        }
    }
    const std::size_t n_step_vars = step_vars.size();

    std::vector<LineVars> line_vars;
    std::vector<Interconnector> lines_at_hour;
    lines_at_hour.reserve(network.interconnectors.size());
    for (std::size_t l = 0; l < network.interconnectors.size(); ++l) {
        lines_at_hour.push_back(network.line_at_hour(l, instance.hour));
    }

    for (std::size_t l = 0; l < lines_at_hour.size(); ++l) {
        const Interconnector& ic = lines_at_hour[l];
        const auto from = network.zone_index(ic.from_zone);
        const auto to = network.zone_index(ic.to_zone);
        if (ic.fixed_flow_mw) {
            // pinned exchange: constant injection on both balances
            const double f = *ic.fixed_flow_mw;
            problem.rhs[*from] += -f;  // net injection -f into the sending zone
            problem.rhs[*to] += f;
            continue;
        }
        LineVars lv;
        lv.line_index = l;
        lv.internalized = internalized_in_mode(ic, instance.options.mode);
        const auto fwd =
            direction_segments(ic, ic.atc_forward_mw, instance.options, lv.internalized);
        const auto rev =
            direction_segments(ic, ic.atc_reverse_mw, instance.options, lv.internalized);
        lv.first_forward = objective.size();
        lv.n_forward = fwd.size();
        for (const auto& seg : fwd) {
            const std::size_t v = add_var(0.0, seg.width_mw);
            columns[v].push_back({*from, +1.0});                 // sent from the sender
            columns[v].push_back({*to, -(1.0 - seg.slope)});     // delivered minus loss
        }
        lv.first_reverse = objective.size();
        lv.n_reverse = rev.size();
        for (const auto& seg : rev) {
            const std::size_t v = add_var(0.0, seg.width_mw);
            columns[v].push_back({*to, +1.0});
            columns[v].push_back({*from, -(1.0 - seg.slope)});
        }
        line_vars.push_back(lv);
    }

    // assemble dense rows (zonal balances in withdrawal form: demand -
    // supply - delivered inflow + sent outflow = pinned net injection)
    problem.objective = std::move(objective);
    problem.upper = std::move(upper);
    for (std::size_t z = 0; z < n_zones; ++z) {
        problem.rows[z].assign(problem.objective.size(), 0.0);
    }
    for (std::size_t v = 0; v < columns.size(); ++v) {
        for (const auto& coef : columns[v]) {
            problem.rows[coef.row][v] += coef.value;
        }
    }

    const lp::LpSolution lpsol = lp::solve(problem);

    MarketSolution sol;
    sol.hour = instance.hour;
    if (lpsol.status == lp::LpStatus::IterationLimit) {
        throw std::runtime_error("clear: simplex hit its iteration limit");
    }
    if (lpsol.status == lp::LpStatus::Infeasible) {
        sol.status = SolveStatus::Infeasible;
        for (const auto& rr : lpsol.infeasible_rows) {
            sol.binding.push_back({network.zones[rr.row].id, rr.residual});
        }
        return sol;
    }

    sol.status = SolveStatus::Optimal;
    sol.welfare_eur = lpsol.objective;
    sol.zones.resize(n_zones);
    for (std::size_t z = 0; z < n_zones; ++z) {
        sol.zones[z].zone = network.zones[z].id;
        sol.zones[z].price_eur_mwh = lpsol.duals[z];
        sol.zones[z].accepted_supply_mw.assign(zone_supply[z]->steps.size(), 0.0);
        sol.zones[z].accepted_demand_mw.assign(zone_demand[z]->steps.size(), 0.0);
    }
    for (std::size_t v = 0; v < n_step_vars; ++v) {
        const StepVar& sv = step_vars[v];
        if (sv.side == BidSide::Supply) {
            sol.zones[sv.zone_index].accepted_supply_mw[sv.step] = lpsol.x[v];
        } else {
            sol.zones[sv.zone_index].accepted_demand_mw[sv.step] = lpsol.x[v];
        }
    }

    std::size_t next_line_var = 0;
    for (std::size_t l = 0; l < lines_at_hour.size(); ++l) {
        const Interconnector& ic = lines_at_hour[l];
        LineResult lr;
        lr.id = ic.id;
        lr.no_load_loss_mw = ic.loss.a0_mw;
        lr.pinned = ic.fixed_flow_mw.has_value();
        if (lr.pinned) {
            lr.flow_mw = *ic.fixed_flow_mw;
            lr.internalized = false;
            lr.modeled_loss_mw = 0.0;
            // pinned flows may sit beyond the rated point of a synthetic
            // loss model; extrapolate the quadratic rather than fail
            lr.realized_loss_mw = true_loss_unchecked(ic.loss, lr.flow_mw);
        } else {
            const LineVars& lv = line_vars[next_line_var++];
            double forward = 0.0;
            double reverse = 0.0;
            for (std::size_t k = 0; k < lv.n_forward; ++k) {
                forward += lpsol.x[lv.first_forward + k];
            }
            for (std::size_t k = 0; k < lv.n_reverse; ++k) {
                reverse += lpsol.x[lv.first_reverse + k];
            }
            lr.forward_mw = forward;
            lr.reverse_mw = reverse;
            lr.flow_mw = forward - reverse;
            lr.internalized = lv.internalized;
            if (lv.internalized) {
                if (instance.options.mode == LossMode::LinearHvdc) {
                    lr.modeled_loss_mw = linearize_secant(ic.loss).gamma * std::abs(lr.flow_mw);
                } else {
                    lr.modeled_loss_mw =
                        eval_pwl(build_pwl(ic.loss, instance.options.pwl_segments), lr.flow_mw);
                }
            }
            lr.realized_loss_mw = true_loss_unchecked(ic.loss, lr.flow_mw);
        }
        lr.receiving_zone = lr.flow_mw >= 0.0 ? ic.to_zone : ic.from_zone;
        sol.lines.push_back(std::move(lr));
    }
    return sol;
}

double settle(const MarketSolution& solution) {
    if (solution.status != SolveStatus::Optimal) {
        throw std::invalid_argument("settle: solution is not feasible");
    }
    std::unordered_map<std::string, double> price;
    for (const auto& zr : solution.zones) {
        price.emplace(zr.zone, zr.price_eur_mwh);
    }
    double total = 0.0;
    for (const auto& lr : solution.lines) {
        const auto it = price.find(lr.receiving_zone);
        if (it == price.end()) {
            throw std::invalid_argument("settle: unknown receiving zone " + lr.receiving_zone);
        }
        const double realized_variable = lr.realized_loss_mw - lr.no_load_loss_mw;
        const double residual =
            std::max(realized_variable - lr.modeled_loss_mw, 0.0) + lr.no_load_loss_mw;
        total += residual * it->second;
    }
    return total;
}

nlohmann::json solution_to_json(const MarketSolution& solution) {
    nlohmann::json doc;
    doc["hour"] = solution.hour;
    doc["status"] = solution.status == SolveStatus::Optimal ? "optimal" : "infeasible";
    if (solution.status != SolveStatus::Optimal) {
        doc["binding"] = nlohmann::json::array();
        for (const auto& b : solution.binding) {
            doc["binding"].push_back(
                {{"zone", b.zone},
                 {"imbalance_mw", b.mw},
                 {"direction", b.mw < 0.0 ? "load exceeds supply plus import capability"
                                          : "inflow exceeds demand plus export capability"}});
        }
        return doc;
    }
    doc["welfare_eur"] = solution.welfare_eur;
    doc["settlement_eur"] = settle(solution);
    doc["zones"] = nlohmann::json::array();
    for (const auto& zr : solution.zones) {
        doc["zones"].push_back({{"zone", zr.zone},
                                {"price_eur_mwh", zr.price_eur_mwh},
                                {"accepted_supply_mw", zr.accepted_supply_mw},
                                {"accepted_demand_mw", zr.accepted_demand_mw}});
    }
    doc["interconnectors"] = nlohmann::json::array();
    for (const auto& lr : solution.lines) {
        doc["interconnectors"].push_back({{"id", lr.id},
                                          {"flow_mw", lr.flow_mw},
                                          {"forward_mw", lr.forward_mw},
                                          {"reverse_mw", lr.reverse_mw},
                                          {"modeled_loss_mw", lr.modeled_loss_mw},
                                          {"realized_loss_mw", lr.realized_loss_mw},
                                          {"no_load_loss_mw", lr.no_load_loss_mw},
                                          {"internalized", lr.internalized},
                                          {"pinned", lr.pinned},
                                          {"receiving_zone", lr.receiving_zone}});
    }
    return doc;
}

}  // namespace hvdc::market

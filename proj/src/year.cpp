#include "hvdc/year.hpp"

#include <exception>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hvdc::market {

namespace {

MarketInstance instance_for_hour(const NetworkModel& network, const YearBids& bids,
                                 ClearingOptions options, std::size_t hour) {
    MarketInstance inst;
    inst.hour = hour;
    inst.network = &network;
    inst.bids = bids[hour];
    inst.options = options;
    return inst;
}

// Fold stored hourly solutions into the annual report, always in hour
// order so the result does not depend on how the hours were computed.
YearRun aggregate(const NetworkModel& network, ClearingOptions options,
                  std::vector<MarketSolution>&& hours) {
    std::unordered_map<std::string, LineKind> kind;
    for (const auto& ic : network.interconnectors) {
        kind.emplace(ic.id, ic.kind);
    }

    YearRun run;
    run.report.mode = options.mode;
    run.report.pwl_segments = options.pwl_segments;
    run.report.horizon_hours = hours.size();
    run.settlement_by_hour.assign(hours.size(), 0.0);
    for (std::size_t h = 0; h < hours.size(); ++h) {
        const MarketSolution& sol = hours[h];
        if (sol.status != SolveStatus::Optimal) {
            run.report.infeasible_hours.push_back(h);
            continue;
        }
        ++run.report.feasible_hours;
        run.report.welfare_eur += sol.welfare_eur;
        const double s = settle(sol);
        run.settlement_by_hour[h] = s;
        run.report.settlement_eur += s;
        for (const auto& lr : sol.lines) {
            if (kind.at(lr.id) == LineKind::HVDC) {
                run.report.hvdc_loss_mwh += lr.realized_loss_mw;
            } else {
                run.report.ac_loss_mwh += lr.realized_loss_mw;
            }
        }
    }
    run.hours = std::move(hours);
    return run;
}

}  // namespace

YearRun run_year_serial(const NetworkModel& network, const YearBids& bids,
                        ClearingOptions options) {
    std::vector<MarketSolution> hours(bids.size());
    for (std::size_t h = 0; h < bids.size(); ++h) {
        hours[h] = clear(instance_for_hour(network, bids, options, h));
    }
    return aggregate(network, options, std::move(hours));
}

YearRun run_year(const NetworkModel& network, const YearBids& bids, ClearingOptions options,
                 int workers) {
#ifdef _OPENMP
    if (workers > 1) {
        const std::size_t n = bids.size();
        std::vector<MarketSolution> hours(n);
        std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
        for (long long h = 0; h < static_cast<long long>(n); ++h) {
            try {
                hours[h] = clear(
                    instance_for_hour(network, bids, options, static_cast<std::size_t>(h)));
            } catch (...) {
                errors[h] = std::current_exception();
            }
        }
        for (std::size_t h = 0; h < n; ++h) {
            if (errors[h]) {
                std::rethrow_exception(errors[h]);
            }
        }
        return aggregate(network, options, std::move(hours));
    }
#else
    (void)workers;
#endif
    return run_year_serial(network, bids, options);
}

SavingsRecord compare(const YearReport& reference, const YearReport& alternative) {
    if (reference.horizon_hours != alternative.horizon_hours) {
        throw std::invalid_argument("compare: reports cover different horizons");
    }
    SavingsRecord rec;
    rec.reference_mode = reference.mode;
    rec.alternative_mode = alternative.mode;
    rec.savings_eur = (alternative.welfare_eur - alternative.settlement_eur) -
                      (reference.welfare_eur - reference.settlement_eur);
    rec.hvdc_loss_delta_mwh = alternative.hvdc_loss_mwh - reference.hvdc_loss_mwh;
    rec.ac_loss_delta_mwh = alternative.ac_loss_mwh - reference.ac_loss_mwh;
    rec.net_loss_delta_mwh = rec.hvdc_loss_delta_mwh + rec.ac_loss_delta_mwh;
    rec.net_loss_delta_pct = reference.total_loss_mwh() > 0.0
                                 ? 100.0 * rec.net_loss_delta_mwh / reference.total_loss_mwh()
                                 : 0.0;
    return rec;
}

nlohmann::json report_to_json(const YearReport& report) {
    return {
        {"mode", to_string(report.mode)},
        {"pwl_segments", report.pwl_segments},
        {"horizon_hours", report.horizon_hours},
        {"feasible_hours", report.feasible_hours},
        {"infeasible_hours", report.infeasible_hours},
        {"hvdc_loss_mwh", report.hvdc_loss_mwh},
        {"ac_loss_mwh", report.ac_loss_mwh},
        {"welfare_eur", report.welfare_eur},
        {"settlement_eur", report.settlement_eur},
    };
}

YearReport report_from_json(const nlohmann::json& doc) {
    YearReport report;
    const auto mode = parse_loss_mode(doc.at("mode").get<std::string>());
    if (!mode) {
        throw std::invalid_argument("report: unknown mode " + doc.at("mode").dump());
    }
    report.mode = *mode;
    report.pwl_segments = doc.at("pwl_segments").get<int>();
    report.horizon_hours = doc.at("horizon_hours").get<std::size_t>();
    report.feasible_hours = doc.at("feasible_hours").get<std::size_t>();
    report.infeasible_hours = doc.at("infeasible_hours").get<std::vector<std::size_t>>();
    report.hvdc_loss_mwh = doc.at("hvdc_loss_mwh").get<double>();
    report.ac_loss_mwh = doc.at("ac_loss_mwh").get<double>();
    report.welfare_eur = doc.at("welfare_eur").get<double>();
    report.settlement_eur = doc.at("settlement_eur").get<double>();
    return report;
}

nlohmann::json savings_to_json(const SavingsRecord& record) {
    return {
        {"reference_mode", to_string(record.reference_mode)},
        {"alternative_mode", to_string(record.alternative_mode)},
        {"savings_eur", record.savings_eur},
        {"hvdc_loss_delta_mwh", record.hvdc_loss_delta_mwh},
        {"ac_loss_delta_mwh", record.ac_loss_delta_mwh},
        {"net_loss_delta_mwh", record.net_loss_delta_mwh},
        {"net_loss_delta_pct", record.net_loss_delta_pct},
    };
}

void write_losses_csv(const YearRun& run, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write losses file " + path.string());
    }
    out << "hour,interconnector,flow_mw,modeled_loss_mw,realized_loss_mw\n";
    for (const auto& sol : run.hours) {
        if (sol.status != SolveStatus::Optimal) {
            continue;
        }
        for (const auto& lr : sol.lines) {
            out << sol.hour << ',' << lr.id << ',' << fmt_double(lr.flow_mw) << ','
                << fmt_double(lr.modeled_loss_mw) << ',' << fmt_double(lr.realized_loss_mw)
                << '\n';
        }
    }
}

}  // namespace hvdc::market

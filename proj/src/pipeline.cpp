#include "hvdc/pipeline.hpp"

#include "hvdc/io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace hvdc::cba {

StudyResult run_study(const StudyInputs& inputs) {
    if (inputs.kinetic_energy.values.empty()) {
        throw std::invalid_argument("run_study: empty kinetic-energy series");
    }
    if (inputs.kinetic_energy.unit != SeriesUnit::Gws) {
        throw std::invalid_argument("run_study: kinetic-energy series must carry GWs");
    }
    for (double v : inputs.kinetic_energy.values) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("run_study: kinetic energy must be positive");
        }
    }
    const auto ffr_template = inputs.study.ffr.value_or(freq::default_ffr_template());
    const auto epc_template = inputs.study.epc.value_or(freq::default_epc_template());

    const double ek_min =
        *std::min_element(inputs.kinetic_energy.values.begin(),
                          inputs.kinetic_energy.values.end());

    const freq::SizingTable table =
        freq::build_sizing_table(inputs.study.model, inputs.study.disturbance, ffr_template,
                                 epc_template, ek_min, inputs.sim, inputs.workers);

    const auto& ek = inputs.kinetic_energy;
    auto sizing_for = [&](freq::RemedyAction action) {
        return [&table, &ek, action](std::size_t hour) {
            return table.requirement(action, ek.values[hour]);
        };
    };

    StudyResult result;
    result.threshold_gws = table.threshold_gws;
    result.deficit_hours = plan::deficit_hours(ek, table.threshold_gws).size();
    result.di = plan::plan_di_reduction(ek, table.threshold_gws,
                                        sizing_for(freq::RemedyAction::DiReduction),
                                        inputs.pad_h, inputs.merge_gap_h);
    result.ffr = plan::plan_stepped(ek, table.threshold_gws,
                                    sizing_for(freq::RemedyAction::Ffr),
                                    freq::RemedyAction::Ffr);
    result.epc = plan::plan_stepped(ek, table.threshold_gws,
                                    sizing_for(freq::RemedyAction::Epc),
                                    freq::RemedyAction::Epc);
    result.costs = cost::compare_costs(cost::di_cost(result.di, inputs.prices.di),
                                       cost::ffr_cost(result.ffr, inputs.prices.ffr),
                                       cost::epc_cost(result.epc, inputs.prices.epc,
                                                      inputs.workers));
    return result;
}

void write_table1_csv(const StudyResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "strategy,occasions,hours,energy_gwh\n";
    auto row = [&](const plan::RemedialPlan& plan) {
        out << freq::to_string(plan.strategy) << ',';
        if (plan.occasions_applicable) {
            out << plan.occasions();
        } else {
            out << '-';
        }
        out << ',' << plan.active_hours() << ',' << fmt_double(plan.energy_gwh()) << '\n';
    };
    row(result.di);
    row(result.ffr);
    row(result.epc);
}

void write_fig3_csv(const StudyResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "strategy,item,eur\n";
    auto rows = [&](const cost::StrategyCost& sc) {
        for (const auto& item : sc.items) {
            out << freq::to_string(sc.strategy) << ',' << item.label << ','
                << fmt_double(item.eur) << '\n';
        }
        out << freq::to_string(sc.strategy) << ",total," << fmt_double(sc.total_eur) << '\n';
    };
    rows(result.costs.di);
    rows(result.costs.ffr);
    rows(result.costs.epc);
}

}  // namespace hvdc::cba

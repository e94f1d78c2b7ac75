#include "hvdc/costs.hpp"

#include "hvdc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hvdc::cost {

namespace {

double plan_volume_mwh(const plan::RemedialPlan& plan) {
    return std::accumulate(plan.hourly_mw.begin(), plan.hourly_mw.end(), 0.0);
}

double finish_total(StrategyCost& sc) {
    sc.total_eur = 0.0;
    for (const auto& item : sc.items) {
        sc.total_eur += item.eur;
    }
    return sc.total_eur;
}

// nearest-rank percentile on a sorted vector
double percentile(const std::vector<double>& sorted, double pct) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double rank = std::ceil(pct / 100.0 * static_cast<double>(sorted.size()));
    const std::size_t idx =
        static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size())));
    return sorted[idx - 1];
}

}  // namespace

StrategyCost di_cost(const plan::RemedialPlan& plan, const DiCostParams& params) {
    if (plan.strategy != freq::RemedyAction::DiReduction) {
        throw std::invalid_argument("di_cost: plan strategy is not DI reduction");
    }
    if (params.opportunity_eur_mwh < 0.0 || params.fixed_eur_per_event < 0.0 ||
        params.regulating_price_scalar_eur_mwh < 0.0) {
        throw std::invalid_argument("di_cost: prices must be non-negative");
    }
    if (params.regulating_price && params.regulating_price->unit != SeriesUnit::EurPerMwh) {
        throw std::invalid_argument("di_cost: regulating price series must carry EUR/MWh");
    }
    StrategyCost sc;
    sc.strategy = freq::RemedyAction::DiReduction;

    const double opportunity = plan_volume_mwh(plan) * params.opportunity_eur_mwh;
    const double fixed =
        static_cast<double>(plan.occasions()) * params.fixed_eur_per_event;

    // substitute energy is procured in the regulating market for the first
    // substitute_hours_per_event hours of each event
    double substitution = 0.0;
    for (const auto& ev : plan.events) {
        const std::size_t len = ev.end_hour - ev.start_hour + 1;
        const std::size_t covered = std::min<std::size_t>(len, params.substitute_hours_per_event);
        for (std::size_t k = 0; k < covered; ++k) {
            const std::size_t h = ev.start_hour + k;
            double price = params.regulating_price_scalar_eur_mwh;
            if (params.regulating_price) {
                if (h >= params.regulating_price->values.size()) {
                    throw std::invalid_argument(
                        "di_cost: regulating price series does not cover hour " +
                        std::to_string(h));
                }
                price = params.regulating_price->values[h];
            }
            substitution += ev.mw * price;
        }
    }

    sc.items = {{"opportunity", opportunity},
                {"fixed_per_event", fixed},
                {"substitution", substitution}};
    finish_total(sc);
    return sc;
}

StrategyCost ffr_cost(const plan::RemedialPlan& plan, const FfrCostParams& params) {
    if (plan.strategy != freq::RemedyAction::Ffr) {
        throw std::invalid_argument("ffr_cost: plan strategy is not FFR");
    }
    double share_sum = 0.0;
    for (const auto& [tso, share] : params.tso_shares) {
        share_sum += share;
    }
    if (std::abs(share_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("ffr_cost: TSO shares must sum to 1");
    }
    StrategyCost sc;
    sc.strategy = freq::RemedyAction::Ffr;
    const double total = plan_volume_mwh(plan) * params.price_eur_mw_h;
    sc.items = {{"reservation", total}};
    finish_total(sc);
    for (const auto& [tso, share] : params.tso_shares) {
        sc.tso_attribution_eur[tso] = total * share;
    }
    return sc;
}

StrategyCost epc_cost(const plan::RemedialPlan& plan, const EpcCostParams& params,
                      int workers) {
    if (plan.strategy != freq::RemedyAction::Epc) {
        throw std::invalid_argument("epc_cost: plan strategy is not EPC");
    }
    if (params.reserve_price_samples.empty() || params.reservation_price_samples.empty()) {
        throw std::invalid_argument("epc_cost: price sample lists must be non-empty");
    }
    if (params.bootstrap_n < 1000) {
        throw std::invalid_argument("epc_cost: bootstrap_n must be at least 1000");
    }

    const double volume = plan_volume_mwh(plan);

    // resample from sorted copies so summaries do not depend on the order
    // the price lists were supplied in
    std::vector<double> reserve_sorted = params.reserve_price_samples;
    std::vector<double> rent_sorted = params.reservation_price_samples;
    std::sort(reserve_sorted.begin(), reserve_sorted.end());
    std::sort(rent_sorted.begin(), rent_sorted.end());

    auto replicate_cost = [&](std::size_t r) {
        SplitMix64 rng(substream_seed(params.seed, "bootstrap", r));
        double reserve_mean = 0.0;
        for (std::size_t i = 0; i < reserve_sorted.size(); ++i) {
            reserve_mean += reserve_sorted[rng.next_below(reserve_sorted.size())];
        }
        reserve_mean /= static_cast<double>(reserve_sorted.size());
        double rent_mean = 0.0;
        for (std::size_t i = 0; i < rent_sorted.size(); ++i) {
            rent_mean += rent_sorted[rng.next_below(rent_sorted.size())];
        }
        rent_mean /= static_cast<double>(rent_sorted.size());
        return volume * (reserve_mean + rent_mean);
    };

    std::vector<double> costs(params.bootstrap_n);
#ifdef _OPENMP
    if (workers > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
        for (long long r = 0; r < static_cast<long long>(params.bootstrap_n); ++r) {
            costs[r] = replicate_cost(static_cast<std::size_t>(r));
        }
    } else
#else
    (void)workers;
#endif
    {
        for (std::size_t r = 0; r < params.bootstrap_n; ++r) {
            costs[r] = replicate_cost(r);
        }
    }

    // mean in replicate order, percentiles on a sorted copy
    double mean = 0.0;
    for (double c : costs) {
        mean += c;
    }
    mean /= static_cast<double>(costs.size());
    std::vector<double> sorted = costs;
    std::sort(sorted.begin(), sorted.end());

    StrategyCost sc;
    sc.strategy = freq::RemedyAction::Epc;
    sc.items = {{"reserve_plus_reservation", mean}};
    finish_total(sc);
    sc.bootstrap = BootstrapSummary{mean, percentile(sorted, 5.0), percentile(sorted, 95.0)};
    return sc;
}

CostReport compare_costs(const StrategyCost& di, const StrategyCost& ffr,
                         const StrategyCost& epc) {
    if (di.strategy != freq::RemedyAction::DiReduction ||
        ffr.strategy != freq::RemedyAction::Ffr || epc.strategy != freq::RemedyAction::Epc) {
        throw std::invalid_argument("compare_costs: reports out of order");
    }
    CostReport report;
    report.di = di;
    report.ffr = ffr;
    report.epc = epc;
    auto entry = [](const StrategyCost& a, const StrategyCost& b) {
        SavingsEntry e;
        e.cheaper = freq::to_string(a.strategy);
        e.baseline = freq::to_string(b.strategy);
        if (b.total_eur != 0.0) {
            e.savings_pct = 100.0 * (1.0 - a.total_eur / b.total_eur);
        }
        return e;
    };
    report.savings = {entry(epc, di), entry(epc, ffr), entry(ffr, di)};
    return report;
}

namespace {

using nlohmann::json;

json items_to_json(const StrategyCost& sc) {
    json items = json::array();
    for (const auto& item : sc.items) {
        items.push_back({{"label", item.label}, {"eur", item.eur}});
    }
    json doc = {{"strategy", freq::to_string(sc.strategy)},
                {"items", items},
                {"total_eur", sc.total_eur}};
    if (!sc.tso_attribution_eur.empty()) {
        doc["tso_attribution_eur"] = sc.tso_attribution_eur;
    }
    if (sc.bootstrap) {
        doc["bootstrap"] = {{"mean_eur", sc.bootstrap->mean_eur},
                            {"p05_eur", sc.bootstrap->p05_eur},
                            {"p95_eur", sc.bootstrap->p95_eur}};
    }
    return doc;
}

}  // namespace

PriceBook prices_from_json(const json& doc) {
    PriceBook prices;
    if (doc.contains("di")) {
        const json& jd = doc["di"];
        prices.di.opportunity_eur_mwh = jd.value("opportunity_eur_mwh", 4.64);
        prices.di.fixed_eur_per_event = jd.value("fixed_eur_per_event", 4740.0);
        prices.di.regulating_price_scalar_eur_mwh =
            jd.value("regulating_price_scalar_eur_mwh", 54.06);
        prices.di.substitute_hours_per_event =
            jd.value("substitute_hours_per_event", std::size_t{24});
        if (jd.contains("regulating_price_series")) {
            HourlySeries series;
            series.label = "regulating price";
            series.unit = SeriesUnit::EurPerMwh;
            series.values = jd["regulating_price_series"].get<std::vector<double>>();
            prices.di.regulating_price = std::move(series);
        }
    }
    if (doc.contains("ffr")) {
        const json& jf = doc["ffr"];
        prices.ffr.price_eur_mw_h = jf.value("price_eur_mw_h", 48.95);
        if (jf.contains("tso_shares")) {
            prices.ffr.tso_shares.clear();
            for (const auto& [tso, share] : jf["tso_shares"].items()) {
                prices.ffr.tso_shares.emplace_back(tso, share.get<double>());
            }
            std::sort(prices.ffr.tso_shares.begin(), prices.ffr.tso_shares.end());
        }
    }
    if (doc.contains("epc")) {
        const json& je = doc["epc"];
        prices.epc.reserve_price_samples =
            je.at("reserve_price_samples").get<std::vector<double>>();
        prices.epc.reservation_price_samples =
            je.at("reservation_price_samples").get<std::vector<double>>();
        prices.epc.bootstrap_n = je.value("bootstrap_n", std::size_t{10000});
        prices.epc.seed = je.value("seed", std::uint64_t{0});
    }
    return prices;
}

json prices_to_json(const PriceBook& prices) {
    json jd = {{"opportunity_eur_mwh", prices.di.opportunity_eur_mwh},
               {"fixed_eur_per_event", prices.di.fixed_eur_per_event},
               {"regulating_price_scalar_eur_mwh", prices.di.regulating_price_scalar_eur_mwh},
               {"substitute_hours_per_event", prices.di.substitute_hours_per_event}};
    if (prices.di.regulating_price) {
        jd["regulating_price_series"] = prices.di.regulating_price->values;
    }
    json shares;
    for (const auto& [tso, share] : prices.ffr.tso_shares) {
        shares[tso] = share;
    }
    return {
        {"di", jd},
        {"ffr", {{"price_eur_mw_h", prices.ffr.price_eur_mw_h}, {"tso_shares", shares}}},
        {"epc",
         {{"reserve_price_samples", prices.epc.reserve_price_samples},
          {"reservation_price_samples", prices.epc.reservation_price_samples},
          {"bootstrap_n", prices.epc.bootstrap_n},
          {"seed", prices.epc.seed}}},
    };
}

json cost_report_to_json(const CostReport& report) {
    json savings = json::array();
    for (const auto& e : report.savings) {
        json je = {{"cheaper", e.cheaper}, {"baseline", e.baseline}};
        if (e.savings_pct) {
            je["savings_pct"] = *e.savings_pct;
        } else {
            je["savings_pct"] = nullptr;
        }
        savings.push_back(je);
    }
    return {{"di", items_to_json(report.di)},
            {"ffr", items_to_json(report.ffr)},
            {"epc", items_to_json(report.epc)},
            {"savings", savings}};
}

}  // namespace hvdc::cost

#include "hvdc/synth.hpp"

#include "hvdc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace hvdc::synth {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

void check_spec(const SyntheticSpec& spec) {
    if (spec.zones < 2 || spec.zones > 6) {
        throw std::invalid_argument("synth: zone count must be between 2 and 6");
    }
    if (spec.horizon_hours == 0) {
        throw std::invalid_argument("synth: horizon must be at least one hour");
    }
    if (spec.price_cap_eur_mwh <= 100.0) {
        throw std::invalid_argument("synth: price cap must exceed 100 EUR/MWh");
    }
    if (spec.ek_base_gws <= 0.0 || spec.ek_seasonal_gws < 0.0 || spec.ek_noise_gws < 0.0 ||
        spec.dry_factor <= 0.0) {
        throw std::invalid_argument("synth: kinetic-energy shape parameters must be positive");
    }
}

struct ZoneSpec {
    const char* id;
    const char* name;
    SyncArea area;
    double demand_base_mw;
    double price_lo;   // cheapest supply step
    double price_mid;
    double price_hi;
    double capacity_mw;  // total supply capacity
};

// N1 is the cheap hydro-like exporter feeding the load center N2 through
// three parallel HVDC lines; N3-N4 carry an HVDC link in parallel with an
// AC path over N5; X1 is an external area pinned to a fixed exchange.
constexpr ZoneSpec kZones[6] = {
    {"N1", "North Hydro", SyncArea::Nordic, 300.0, 8.0, 14.0, 26.0, 2400.0},
    {"N2", "South Load", SyncArea::Nordic, 650.0, 34.0, 44.0, 58.0, 1400.0},
    {"N3", "Mid Mixed", SyncArea::Nordic, 420.0, 18.0, 26.0, 40.0, 1500.0},
    {"N4", "East Load", SyncArea::Nordic, 480.0, 42.0, 52.0, 66.0, 1100.0},
    {"N5", "Transit", SyncArea::Nordic, 150.0, 22.0, 30.0, 46.0, 700.0},
    {"X1", "External", SyncArea::ContinentalEurope, 350.0, 25.0, 35.0, 50.0, 900.0},
};

}  // namespace

SyntheticSpec spec_from_json(const nlohmann::json& doc) {
    SyntheticSpec spec;
    spec.seed = doc.value("seed", std::uint64_t{42});
    spec.zones = doc.value("zones", 6);
    spec.horizon_hours = doc.value("horizon_hours", std::size_t{8760});
    spec.price_cap_eur_mwh = doc.value("price_cap_eur_mwh", 3000.0);
    spec.demand_base_scale = doc.value("demand_base_scale", 1.0);
    spec.supply_price_scale = doc.value("supply_price_scale", 1.0);
    spec.ek_base_gws = doc.value("ek_base_gws", 185.0);
    spec.ek_seasonal_gws = doc.value("ek_seasonal_gws", 25.0);
    spec.ek_noise_gws = doc.value("ek_noise_gws", 8.0);
    spec.dry_factor = doc.value("dry_factor", 1.0);
    if (doc.contains("adversarial_hour")) {
        if (doc["adversarial_hour"].is_null()) {
            spec.adversarial_hour = std::nullopt;
        } else {
            spec.adversarial_hour = doc["adversarial_hour"].get<std::size_t>();
        }
    }
    check_spec(spec);
    return spec;
}

nlohmann::json spec_to_json(const SyntheticSpec& spec) {
    nlohmann::json doc = {
        {"seed", spec.seed},
        {"zones", spec.zones},
        {"horizon_hours", spec.horizon_hours},
        {"price_cap_eur_mwh", spec.price_cap_eur_mwh},
        {"demand_base_scale", spec.demand_base_scale},
        {"supply_price_scale", spec.supply_price_scale},
        {"ek_base_gws", spec.ek_base_gws},
        {"ek_seasonal_gws", spec.ek_seasonal_gws},
        {"ek_noise_gws", spec.ek_noise_gws},
        {"dry_factor", spec.dry_factor},
    };
    if (spec.adversarial_hour) {
        doc["adversarial_hour"] = *spec.adversarial_hour;
    } else {
        doc["adversarial_hour"] = nullptr;
    }
    return doc;
}

NetworkModel build_network(const SyntheticSpec& spec) {
    check_spec(spec);
    NetworkModel network;
    for (int z = 0; z < spec.zones; ++z) {
        network.zones.push_back({kZones[z].id, kZones[z].name, kZones[z].area});
    }

    auto hvdc = [](const char* id, const char* from, const char* to, double atc,
                   double p_max, double b, double c, double a0) {
        Interconnector ic;
        ic.id = id;
        ic.from_zone = from;
        ic.to_zone = to;
        ic.kind = LineKind::HVDC;
        ic.atc_forward_mw = atc;
        ic.atc_reverse_mw = atc;
        ic.loss = {a0, b, c, p_max};
        return ic;
    };
    auto ac = [](const char* id, const char* from, const char* to, double atc, double p_max,
                 double b, double c) {
        Interconnector ic;
        ic.id = id;
        ic.from_zone = from;
        ic.to_zone = to;
        ic.kind = LineKind::AC;
        ic.atc_forward_mw = atc;
        ic.atc_reverse_mw = atc;
        ic.loss = {0.0, b, c, p_max};
        return ic;
    };

    // parallel trio N1 -> N2: secants 4.5%, 5.5%, 6.5% at the rated point,
    // while true losses at typical flows stay far smaller (flows << p_max)
    network.interconnectors.push_back(
        hvdc("hv-n1n2-a", "N1", "N2", 450.0, 1200.0, 0.0, 0.045 / 1200.0, 0.0));
    network.interconnectors.push_back(
        hvdc("hv-n1n2-b", "N1", "N2", 450.0, 1200.0, 0.0, 0.055 / 1200.0, 0.0));
    network.interconnectors.push_back(
        hvdc("hv-n1n2-c", "N1", "N2", 450.0, 1200.0, 0.0, 0.065 / 1200.0, 0.0));

    if (spec.zones >= 3) {
        network.interconnectors.push_back(ac("ac-n1n3", "N1", "N3", 700.0, 900.0, 0.008, 6e-6));
    }
    if (spec.zones >= 4) {
        network.interconnectors.push_back(
            hvdc("hv-n3n4", "N3", "N4", 800.0, 800.0, 0.003, 6e-6, 1.0));
    }
    if (spec.zones >= 5) {
        // AC detour parallel to hv-n3n4: free for the solver whenever AC
        // losses are not internalized, strictly lossier in truth
        network.interconnectors.push_back(ac("ac-n3n5", "N3", "N5", 350.0, 800.0, 0.0065, 8e-6));
        network.interconnectors.push_back(ac("ac-n5n4", "N5", "N4", 350.0, 800.0, 0.0065, 8e-6));
    }
    if (spec.zones >= 6) {
        Interconnector pin =
            hvdc("hv-n4x1", "N4", "X1", 600.0, 1000.0, 0.003, 1.2e-5, 2.0);
        pin.fixed_flow_mw = -80.0;  // constant import into N4
        network.interconnectors.push_back(pin);
    }
    return network;
}

YearBids build_bids(const SyntheticSpec& spec) {
    check_spec(spec);
    SplitMix64 rng(substream_seed(spec.seed, "bids", 0));
    YearBids bids(spec.horizon_hours);

    for (std::size_t h = 0; h < spec.horizon_hours; ++h) {
        const double diurnal = std::sin(kTau * static_cast<double>(h % 24) / 24.0);
        const double seasonal = std::cos(kTau * static_cast<double>(h) / 8760.0);
        for (int z = 0; z < spec.zones; ++z) {
            const ZoneSpec& zs = kZones[z];
            ZoneBids zb;
            const double demand_shape =
                1.0 + 0.15 * diurnal + 0.08 * seasonal + 0.05 * rng.next_in(-1.0, 1.0);
            const double demand =
                std::max(50.0, zs.demand_base_mw * spec.demand_base_scale * demand_shape);
            zb.demand.steps.push_back({demand, spec.price_cap_eur_mwh});

            const double price_shape =
                1.0 + 0.12 * diurnal + 0.04 * rng.next_in(-1.0, 1.0);
            const double scale = spec.supply_price_scale * price_shape;
            const double q1 = zs.capacity_mw * 0.45;
            const double q2 = zs.capacity_mw * 0.30;
            const double q3 = zs.capacity_mw * 0.25;
            zb.supply.steps.push_back({q1, std::max(1.0, zs.price_lo * scale)});
            zb.supply.steps.push_back({q2, std::max(zb.supply.steps.back().price_eur_mwh,
                                                    zs.price_mid * scale)});
            zb.supply.steps.push_back({q3, std::max(zb.supply.steps.back().price_eur_mwh,
                                                    zs.price_hi * scale)});
            bids[h][zs.id] = std::move(zb);
        }
    }

    // plant the adversarial hour: N2's local step sits between the
    // piecewise-linear and the secant import price of the best trio line,
    // so only linear factors divert the exchange
    if (spec.adversarial_hour && *spec.adversarial_hour < spec.horizon_hours) {
        const std::size_t h = *spec.adversarial_hour;
        ZoneBids n1;
        n1.supply.steps.push_back({2000.0, 10.0});
        n1.demand.steps.push_back({50.0, spec.price_cap_eur_mwh});
        bids[h]["N1"] = std::move(n1);
        ZoneBids n2;
        n2.supply.steps.push_back({1000.0, 10.35});
        n2.demand.steps.push_back({300.0, spec.price_cap_eur_mwh});
        bids[h]["N2"] = std::move(n2);
    }
    return bids;
}

HourlySeries build_kinetic_energy(const SyntheticSpec& spec) {
    check_spec(spec);
    SplitMix64 rng(substream_seed(spec.seed, "ek", 0));
    HourlySeries series;
    series.label = "synthetic kinetic energy";
    series.unit = SeriesUnit::Gws;
    series.values.reserve(spec.horizon_hours);
    for (std::size_t h = 0; h < spec.horizon_hours; ++h) {
        // summer minimum at mid-year, daily ripple, noise drawn before the
        // dry scaling so wet and dry years share the same random path
        const double seasonal =
            spec.ek_base_gws -
            spec.ek_seasonal_gws * std::cos(kTau * (static_cast<double>(h) - 4380.0) / 8760.0);
        const double daily = 4.0 * std::sin(kTau * static_cast<double>(h % 24) / 24.0);
        const double noise = spec.ek_noise_gws * rng.next_in(-1.0, 1.0);
        series.values.push_back(
            std::max(30.0, spec.dry_factor * (seasonal + daily) + noise));
    }
    return series;
}

cost::PriceBook build_prices(const SyntheticSpec& spec) {
    check_spec(spec);
    SplitMix64 rng(substream_seed(spec.seed, "prices", 0));
    cost::PriceBook prices;
    prices.epc.reserve_price_samples.reserve(60);
    prices.epc.reservation_price_samples.reserve(60);
    for (int i = 0; i < 60; ++i) {
        prices.epc.reserve_price_samples.push_back(rng.next_in(8.0, 16.0));
    }
    for (int i = 0; i < 60; ++i) {
        prices.epc.reservation_price_samples.push_back(rng.next_in(2.0, 8.0));
    }
    prices.epc.bootstrap_n = 10000;
    prices.epc.seed = spec.seed;
    return prices;
}

void generate(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
    check_spec(spec);
    std::filesystem::create_directories(out_dir);
    save_network(build_network(spec), out_dir / "network.json");
    save_bids(build_bids(spec), out_dir / "bids.csv");
    save_series(build_kinetic_energy(spec), out_dir / "ek.csv");
    std::ofstream prices(out_dir / "prices.json");
    if (!prices) {
        throw std::runtime_error("cannot write prices.json in " + out_dir.string());
    }
    prices << cost::prices_to_json(build_prices(spec)).dump(2) << "\n";
}

}  // namespace hvdc::synth

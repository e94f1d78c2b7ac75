#pragma once

#include "hvdc/costs.hpp"
#include "hvdc/io.hpp"
#include "hvdc/network.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace hvdc::synth {

/// Parameters of the seeded study generator that stands in for the
/// proprietary market and inertia datasets. Identical specs produce
/// byte-identical files.
struct SyntheticSpec {
    std::uint64_t seed = 42;
    int zones = 6;  // 2..6
    std::size_t horizon_hours = 8760;
    double price_cap_eur_mwh = 3000.0;
    double demand_base_scale = 1.0;
    double supply_price_scale = 1.0;
    double ek_base_gws = 185.0;
    double ek_seasonal_gws = 25.0;
    double ek_noise_gws = 8.0;
    /// Hydrological scaling of the kinetic-energy series; dry years
    /// (< 1) replace hydro production with imports and lower inertia.
    double dry_factor = 1.0;
    /// Hour whose bids are constructed so that linear HVDC factors divert
    /// flow to a strictly costlier local generator. Disabled when beyond
    /// the horizon.
    std::optional<std::size_t> adversarial_hour = 12;
};

SyntheticSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const SyntheticSpec& spec);

NetworkModel build_network(const SyntheticSpec& spec);
YearBids build_bids(const SyntheticSpec& spec);
HourlySeries build_kinetic_energy(const SyntheticSpec& spec);
cost::PriceBook build_prices(const SyntheticSpec& spec);

/// Writes network.json, bids.csv, ek.csv and prices.json into out_dir.
void generate(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

}  // namespace hvdc::synth

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tvws/geodata.hpp"
#include "tvws/propagation.hpp"
#include "tvws/protection.hpp"
#include "tvws/regulatory.hpp"
#include "tvws/study_area.hpp"

namespace tvws {

/// Every tunable constant of a run. Defaults fill the gaps the source
/// model leaves open (noise floor, user density, handover constants, ...).
struct ScenarioConfig {
    // propagation
    double tv_rx_height_m = 10.0;
    double tv_rx_gain_dbi = 0.0;
    std::optional<double> delta_h_override;
    Polarization polarization = Polarization::horizontal;
    double gamma_e = 1.0 / 8.493e6;
    HataEnvironment environment = HataEnvironment::urban;
    double secondary_rx_height_m = 1.5;
    double initial_delta_h_range_km = 50.0;
    double p2s_max_distance_km = 300.0;

    // capacity
    double noise_figure_db = 6.0;
    double bandwidth_hz = 6.0e6;
    double r_cell_km = 1.0;
    int reuse_i = 1;
    int reuse_j = 1;
    int k_i = 6;
    int tier_max = 2;
    double mac_efficiency = 1.0;
    double alpha_users = 1.0;
    double population_density_per_sq_mi = 1000.0;
    double alpha_ho = 1.0;
    double handover_s = 1.0;
    double speed_mps = 50.0 / 3.6;
    int receiver_rings = 8;
    int receiver_angles = 8;
    int max_cells = 256;

    // statistics
    int stats_points = 500;
    double population_threshold = 1000.0;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct Scenario {
    std::vector<TransmitterRecord> registry;
    TerrainGrid terrain;
    std::optional<PopulationGrid> population;
    std::vector<ExclusionSite> sites;
    ProtectionTables tables;
    StudyArea area;
    DeviceParams device;
    int channel = 30;  ///< channel under study
    ScenarioConfig config;
    std::uint64_t seed = 1;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

ProtectionSettings protection_settings(const Scenario& s);

/// One message per broken invariant; empty iff the scenario is usable.
std::vector<std::string> validate(const Scenario& s);

enum class SyntheticKind { single_tower, ring, poisson_field, standard };
enum class TerrainKind { flat, ramp, hills };

SyntheticKind parse_synthetic_kind(const std::string& s);
TerrainKind parse_terrain_kind(const std::string& s);
std::string to_string(SyntheticKind k);
std::string to_string(TerrainKind k);

struct SyntheticParams {
    GeoPoint center{40.0, -100.0};
    double area_half_km = 150.0;  ///< study area is a square of twice this side
    double margin_km = 60.0;      ///< terrain extends this far beyond the area
    double spacing_arcsec = 30.0;
    double area_step_km = 2.0;

    TerrainKind terrain = TerrainKind::flat;
    double base_elevation_m = 300.0;
    double relief_m = 150.0;  ///< ramp rise across the grid, or hill amplitude

    int channel = 30;
    ServiceType service{Modulation::digital, StationClass::full};
    double eirp_dbm = 80.0;
    double height_m = 200.0;

    int ring_count = 6;
    double ring_radius_km = 100.0;

    /// poisson_field: towers per km^2 for each listed channel.
    double intensity_per_km2 = 2e-4;
    std::vector<int> channels;  ///< empty: {channel}

    /// standard: tower count and channel pool (empty: channel-2..channel+2).
    int tower_count = 20;
};

Scenario generate_synthetic(SyntheticKind kind, const SyntheticParams& params, std::uint64_t seed);

/// The 20-tower scenario the monotonicity and capacity checks run on.
Scenario standard_scenario(std::uint64_t seed = 2024);

TerrainGrid synthetic_terrain(TerrainKind kind, const GeoPoint& north_west, double spacing_arcsec, std::size_t rows,
                              std::size_t cols, double base_m, double relief_m, std::uint64_t seed);

/// Reads scenario.toml; data paths are relative to the file.
Scenario load_scenario(const std::filesystem::path& toml_path);

/// Writes scenario.toml plus the data files it references into `dir`.
void save_scenario(const Scenario& s, const std::filesystem::path& dir);

std::string format_scenario_toml(const Scenario& s);

}  // namespace tvws

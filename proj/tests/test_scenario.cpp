#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "support.hpp"
#include "tvws/error.hpp"
#include "tvws/scenario.hpp"

using namespace tvws;

namespace {

SyntheticParams small_params() {
    SyntheticParams p;
    p.area_half_km = 40.0;
    p.margin_km = 30.0;
    p.area_step_km = 5.0;
    return p;
}

}  // namespace

TEST_CASE("validate examples") {
    Scenario s = generate_synthetic(SyntheticKind::single_tower, small_params(), 1);
    CHECK(validate(s).empty());

    Scenario out = s;
    out.registry.front().location = {s.terrain.north() + 1.0, s.area.center().lon_deg};
    CHECK(validate(out).size() == 1);

    Scenario neg = s;
    neg.terrain.spacing_arcsec = -30;
    CHECK(validate(neg).size() == 1);

    Scenario dup = s;
    dup.registry.push_back(dup.registry.front());
    CHECK(validate(dup).size() == 1);

    Scenario cfg = s;
    cfg.config.mac_efficiency = 0;
    cfg.channel = 70;
    CHECK(validate(cfg).size() == 2);
}

TEST_CASE("generators") {
    const auto p = small_params();
    const Scenario one = generate_synthetic(SyntheticKind::single_tower, p, 9);
    CHECK(one.registry.size() == 1);
    CHECK(generate_synthetic(SyntheticKind::ring, p, 9).registry.size() == static_cast<std::size_t>(p.ring_count));

    for (auto kind : {SyntheticKind::single_tower, SyntheticKind::ring, SyntheticKind::poisson_field,
                      SyntheticKind::standard})
        CHECK(generate_synthetic(kind, p, 42) == generate_synthetic(kind, p, 42));
    CHECK_FALSE(standard_scenario(1) == standard_scenario(2));

    const Scenario st = standard_scenario();
    CHECK(st.registry.size() == 20);
    CHECK(validate(st).empty());
    CHECK(parse_synthetic_kind(to_string(SyntheticKind::poisson_field)) == SyntheticKind::poisson_field);
    CHECK(parse_terrain_kind(to_string(TerrainKind::hills)) == TerrainKind::hills);
    CHECK_THROWS_AS(parse_terrain_kind("moon"), Error);
}

TEST_CASE("poisson field count concentrates around lambda A") {
    auto p = small_params();
    p.area_half_km = 100.0;
    p.intensity_per_km2 = 400.0 / (4 * p.area_half_km * p.area_half_km);
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const Scenario s = generate_synthetic(SyntheticKind::poisson_field, p, seed);
        CHECK(std::abs(static_cast<double>(s.registry.size()) - 400.0) <= 3 * std::sqrt(400.0));
        for (const auto& tx : s.registry) CHECK(s.area.contains(tx.location));
    }
    p.channels = {21, 22};
    const Scenario two = generate_synthetic(SyntheticKind::poisson_field, p, 6);
    CHECK(std::abs(static_cast<double>(two.registry.size()) - 800.0) <= 3 * std::sqrt(800.0));
}

TEST_CASE("synthetic terrain kinds") {
    const auto flat = synthetic_terrain(TerrainKind::flat, {41, -101}, 30, 50, 60, 300, 100, 1);
    for (double v : flat.values) CHECK(v == 300.0);
    const auto ramp = synthetic_terrain(TerrainKind::ramp, {41, -101}, 30, 50, 60, 300, 100, 1);
    CHECK(ramp.violations().empty());
    const auto hills = synthetic_terrain(TerrainKind::hills, {41, -101}, 30, 50, 60, 300, 100, 1);
    const auto [lo, hi] = std::minmax_element(hills.values.begin(), hills.values.end());
    CHECK(*hi > *lo);
    CHECK(hills == synthetic_terrain(TerrainKind::hills, {41, -101}, 30, 50, 60, 300, 100, 1));
}

TEST_CASE("scenario files round-trip exactly") {
    auto p = small_params();
    p.terrain = TerrainKind::hills;
    Scenario s = generate_synthetic(SyntheticKind::ring, p, 77);
    s.seed = 123456789012345ULL;
    s.channel = 29;
    s.device.device_class = DeviceClass::portable;
    s.device.eirp_dbm = 13.25;
    s.device.antenna_height_m = 2.5;
    s.device.rx_gain_dbi = 1.1;
    s.config.delta_h_override = 71.3;
    s.config.noise_figure_db = 7.123456789;
    s.config.environment = HataEnvironment::suburban;
    s.config.polarization = Polarization::vertical;
    s.config.speed_mps = 1.0 / 3.0;
    s.config.max_cells = 17;
    s.config.stats_points = 33;
    s.tables.contour_dbu[1][2] = 40.5;
    s.sites = {{"metro", SiteKind::plmrs, 20, {40.1, -100.1}}};
    s.population = fixture::grid<PopulationGrid>(s.terrain.origin, 120, 10, 12,
                                                 [](std::size_t r, std::size_t c) { return r * 100.0 + c / 7.0; });
    s.area.mask.assign(s.area.size(), true);
    s.area.mask[2] = false;

    const auto dir = fixture::temp_dir("scenario_roundtrip");
    save_scenario(s, dir);
    const Scenario back = load_scenario(dir / "scenario.toml");
    CHECK(back.registry == s.registry);
    CHECK(back.terrain == s.terrain);
    CHECK(back.population == s.population);
    CHECK(back.sites == s.sites);
    CHECK(back.tables == s.tables);
    CHECK(back.area == s.area);
    CHECK(back.device == s.device);
    CHECK(back.config == s.config);
    CHECK(back.seed == s.seed);
    CHECK(back == s);
    CHECK(format_scenario_toml(back) == format_scenario_toml(s));
}

TEST_CASE("load errors") {
    const auto dir = fixture::temp_dir("scenario_errors");
    {
        std::ofstream f(dir / "bad.toml");
        f << "seed = [\n";
    }
    CHECK_THROWS_AS(load_scenario(dir / "bad.toml"), ParseError);
    {
        std::ofstream f(dir / "type.toml");
        f << "seed = \"x\"\n";
    }
    CHECK_THROWS_AS(load_scenario(dir / "type.toml"), Error);
    CHECK_THROWS_AS(load_scenario(dir / "missing.toml"), Error);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "support.hpp"
#include "tvws/error.hpp"
#include "tvws/protection.hpp"
#include "tvws/scenario.hpp"

using namespace tvws;

namespace {

const GeoPoint kCenter{40, -100};

const TerrainGrid& flat() {
    static const TerrainGrid g = fixture::flat_around(kCenter, 200, 300.0, 60.0);
    return g;
}

// Threshold in dBm from the closed forms, independent of the library helpers.
double threshold_dbm(double dbu, double f_mhz) { return dbu - 20.0 * std::log10(f_mhz) - 77.2; }

}  // namespace

TEST_CASE("flat terrain gives a circular contour") {
    const auto tx = fixture::tower("a", 30, kCenter, 80, 200);
    const auto c = protected_contour(tx, flat());
    CHECK(c.max_radius_km() - c.min_radius_km() <= 0.001);
    CHECK(c.min_radius_km() > 10.0);
}

TEST_CASE("single azimuth equals a bisection on the forward loss") {
    const auto tx = fixture::tower("a", 30, kCenter, 80, 200);
    ProtectionSettings s;
    const AzimuthContour az = contour_along(tx, flat(), 45.0, s);
    const double f = 569.0;
    const double budget = 80.0 - threshold_dbm(41.0, f);
    ItmParams p;
    p.f_mhz = f;
    p.h_g1_m = 200.0;
    p.h_g2_m = 10.0;
    p.delta_h_m = 0.0;
    const auto coeffs = itm_coefficients(p);
    const double d = oracle::bisect_increasing([&](double m) { return total_loss(coeffs, p, m); }, budget, 1000, 2e6);
    CHECK(az.haat_m == doctest::Approx(200.0));
    CHECK(az.delta_h_m == doctest::Approx(0.0));
    CHECK(std::abs(az.radius_km * 1000 - d) <= 2.0);
}

TEST_CASE("contour grows with EIRP and shrinks with the threshold") {
    const auto lo = fixture::tower("lo", 30, kCenter, 70, 200);
    const auto hi = fixture::tower("hi", 30, kCenter, 80, 200);
    const auto clo = protected_contour(lo, flat());
    const auto chi = protected_contour(hi, flat());
    for (int az = 0; az < kAzimuths; ++az) CHECK(chi.radii_km[az] >= clo.radii_km[az]);

    ProtectionSettings strict;
    strict.tables.contour_dbu[1][2] = 50.0;
    const auto cs = protected_contour(hi, flat(), strict);
    for (int az = 0; az < kAzimuths; ++az) CHECK(cs.radii_km[az] <= chi.radii_km[az]);
}

TEST_CASE("minimum separation") {
    const auto tx = fixture::tower("a", 30, kCenter, 80, 200);
    DeviceParams fixed;
    DeviceParams portable;
    portable.device_class = DeviceClass::portable;
    portable.eirp_dbm = 16;
    portable.antenna_height_m = 3;

    const double co = min_separation_km(tx, 30, fixed, Relationship::co);
    const double adj = min_separation_km(tx, 31, fixed, Relationship::upper_adj);
    CHECK(adj < co);
    CHECK(min_separation_km(tx, 30, portable, Relationship::co) < co);

    // Oracle: invert the textbook Hata loss at the secondary channel frequency.
    const double target = 36.0 - threshold_dbm(41.0, 569.0) + 23.0;
    const double d = oracle::bisect_increasing([](double km) { return oracle::hata_urban_db(569, 30, 10, km); }, target, 1, 20);
    CHECK(co == doctest::Approx(d).epsilon(2e-3 / d));

    DeviceParams off = fixed;
    off.eirp_dbm = -INFINITY;
    CHECK(min_separation_km(tx, 30, off, Relationship::co) == 1.0);

    // Separation is non-decreasing in height and EIRP.
    double prev = 0;
    for (double h = 1; h <= 200; h += 10) {
        DeviceParams d2 = fixed;
        d2.hypothetical = true;
        d2.antenna_height_m = h;
        const double v = min_separation_km(tx, 30, d2, Relationship::co);
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0;
    for (double e = -10; e <= 36; e += 2) {
        DeviceParams d2 = fixed;
        d2.eirp_dbm = e;
        const double v = min_separation_km(tx, 30, d2, Relationship::co);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("region construction") {
    const auto tx = fixture::tower("a", 30, kCenter, 80, 200);
    const auto contour = protected_contour(tx, flat());
    const auto same = make_region(tx, contour, 0.0, Relationship::co);
    CHECK(same.region == same.contour);

    DeviceParams fixed;
    const auto r = protection_region(tx, flat(), fixed, Relationship::co);
    for (int az = 0; az < kAzimuths; ++az)
        CHECK(r.region.radii_km[az] - r.contour.radii_km[az] == doctest::Approx(r.separation_km));

    DeviceParams portable;
    portable.device_class = DeviceClass::portable;
    portable.eirp_dbm = 16;
    portable.antenna_height_m = 3;
    const auto pa = protection_region(tx, flat(), portable, Relationship::upper_adj);
    for (int az = 0; az < kAzimuths; ++az) CHECK(pa.region.radii_km[az] <= r.region.radii_km[az]);

    CHECK(relationship_between(30, 30) == Relationship::co);
    CHECK(relationship_between(30, 31) == Relationship::upper_adj);
    CHECK(relationship_between(30, 29) == Relationship::lower_adj);
    CHECK_FALSE(relationship_between(30, 32).has_value());
}

TEST_CASE("membership against a planar polygon oracle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    RadialContour c;
    c.center = kCenter;
    // Irregular but smooth, like a terrain-driven contour.
    const double phase = 2 * oracle::kPi * u(rng);
    for (int az = 0; az < kAzimuths; ++az) {
        const double t = oracle::rad(az);
        c.radii_km[az] = 30 + 8 * std::sin(3 * t) + 5 * std::cos(7 * t + phase) + 2 * std::sin(13 * t);
    }

    CHECK(in_region(kCenter, c));
    CHECK_FALSE(in_region(destination(kCenter, 123, c.max_radius_km() + 1), c));

    // Azimuthal-equidistant plane around the center.
    std::vector<std::pair<double, double>> poly;
    for (int az = 0; az < kAzimuths; ++az)
        poly.push_back({c.radii_km[az] * std::sin(oracle::rad(az)), c.radii_km[az] * std::cos(oracle::rad(az))});
    int compared = 0;
    for (int k = 0; k < 20000; ++k) {
        const double az = 360 * u(rng);
        const double d = c.min_radius_km() + (c.max_radius_km() - c.min_radius_km()) * u(rng);
        auto inside = [&](double dd) { return oracle::point_in_polygon(dd * std::sin(oracle::rad(az)), dd * std::cos(oracle::rad(az)), poly); };
        // Skip points within the chord-versus-arc sliver of the boundary.
        if (inside(d * 0.999) != inside(d * 1.001)) continue;
        ++compared;
        CHECK(in_region(destination(kCenter, az, d), c) == inside(d));
    }
    CHECK(compared > 15000);
}

TEST_CASE("rotating the terrain by 90 degrees rotates the contour") {
    const std::size_t n = 561;  // 30" spacing, about 2 x 130 km
    const double half = (n - 1) / 2 * 30.0 / 3600.0;
    const GeoPoint center{0, 0};
    const auto base = synthetic_terrain(TerrainKind::hills, {half, -half}, 30.0, n, n, 200, 300, 9);
    TerrainGrid rot = base;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t col = 0; col < n; ++col) rot.values[r * n + col] = base.values[(n - 1 - col) * n + r];
    const auto tx = fixture::tower("a", 30, center, 78, 150);
    const auto a = protected_contour(tx, base);
    const auto b = protected_contour(tx, rot);
    double worst = 0;
    for (int az = 0; az < kAzimuths; ++az) {
        const double ra = a.radii_km[az];
        const double rb = b.radii_km[(az + 90) % kAzimuths];
        worst = std::max(worst, std::abs(ra - rb) / ra);
    }
    INFO("worst relative difference " << worst);
    CHECK(worst < 0.02);
}

TEST_CASE("GeoJSON rings close and the region encloses the contour") {
    const auto tx = fixture::tower("a", 30, kCenter, 80, 200);
    const auto r = protection_region(tx, flat(), DeviceParams{}, Relationship::co);
    const auto j = nlohmann::json::parse(regions_geojson({r}));
    REQUIRE(j["features"].size() == 2);
    for (const auto& f : j["features"]) {
        const auto& ring = f["geometry"]["coordinates"][0];
        CHECK(ring.size() == 361);
        CHECK(ring.front() == ring.back());
    }
    CHECK(j["features"][0]["properties"]["kind"] == "contour");
    CHECK(j["features"][1]["properties"]["kind"] == "region");
    CHECK(j["features"][1]["properties"]["separation_km"].get<double>() == doctest::Approx(r.separation_km));
    // Circular within 1 m on flat terrain.
    for (const auto& v : j["features"][0]["geometry"]["coordinates"][0]) {
        const double d = distance_km(kCenter, {v[1].get<double>(), v[0].get<double>()});
        CHECK(std::abs(d - r.contour.radii_km[0]) <= 0.001);
    }
}

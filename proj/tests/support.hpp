#pragma once

// Test-side oracles. These are written from the closed forms directly and do
// not call the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tvws/geodata.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double rad(double deg) { return deg * kPi / 180.0; }

inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    const double dlat = rad(lat2 - lat1);
    const double dlon = rad(lon2 - lon1);
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(rad(lat1)) * std::cos(rad(lat2)) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * 6371.0 * std::asin(std::min(1.0, std::sqrt(a)));
}

// 20 log10(4 pi d f / c), d in m, f in MHz.
inline double free_space_db(double f_mhz, double d_m) {
    return 20.0 * std::log10(4.0 * kPi * d_m * f_mhz * 1e6 / 2.998e8);
}

// Okumura-Hata, small/medium city, urban.
inline double hata_urban_db(double f, double hb, double hm, double d_km) {
    const double ahm = (1.1 * std::log10(f) - 0.7) * hm - (1.56 * std::log10(f) - 0.8);
    return 69.55 + 26.16 * std::log10(f) - 13.82 * std::log10(hb) - ahm + (44.9 - 6.55 * std::log10(hb)) * std::log10(d_km);
}

// Linear-interpolated percentile on a sorted copy.
inline double percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Largest d in [lo, hi] with f(d) <= target for an increasing f, by plain bisection.
inline double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi) {
    for (int k = 0; k < 200 && hi - lo > 1e-4; ++k) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) <= target ? lo : hi) = mid;
    }
    return lo;
}

// Composite trapezoid integral with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int k = 1; k < n; ++k) s += f(a + k * h);
    return s * h;
}

// Even-odd point-in-polygon on planar (x, y) vertices.
inline bool point_in_polygon(double x, double y, const std::vector<std::pair<double, double>>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto [xi, yi] = poly[i];
        const auto [xj, yj] = poly[j];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
    }
    return inside;
}

}  // namespace oracle

namespace fixture {

// Raster with north-west origin and a value per (row, col).
template <class Grid = tvws::TerrainGrid>
Grid grid(const tvws::GeoPoint& nw, double spacing_arcsec, std::size_t rows, std::size_t cols,
          const std::function<double(std::size_t, std::size_t)>& value) {
    Grid g;
    g.origin = nw;
    g.spacing_arcsec = spacing_arcsec;
    g.n_rows = rows;
    g.n_cols = cols;
    g.values.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) g.values[r * cols + c] = value(r, c);
    return g;
}

// Flat grid centered on `center`, half_km wide on each side.
inline tvws::TerrainGrid flat_around(const tvws::GeoPoint& center, double half_km, double elevation,
                                     double spacing_arcsec = 30.0) {
    const double dlat = half_km / 111.19492664455873;
    const double dlon = dlat / std::cos(oracle::rad(center.lat_deg));
    const double step = spacing_arcsec / 3600.0;
    const auto rows = static_cast<std::size_t>(std::ceil(2 * dlat / step)) + 1;
    const auto cols = static_cast<std::size_t>(std::ceil(2 * dlon / step)) + 1;
    return grid({center.lat_deg + dlat, center.lon_deg - dlon}, spacing_arcsec, rows, cols,
                [&](std::size_t, std::size_t) { return elevation; });
}

inline tvws::TransmitterRecord tower(const std::string& id, int channel, const tvws::GeoPoint& at, double eirp = 80.0,
                                     double height = 200.0,
                                     tvws::ServiceType service = {tvws::Modulation::digital, tvws::StationClass::full}) {
    tvws::TransmitterRecord tx;
    tx.id = id;
    tx.channel = channel;
    tx.service = service;
    tx.eirp_dbm = eirp;
    tx.ground_height_m = height;
    tx.location = at;
    return tx;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("tvws_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace fixture

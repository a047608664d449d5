#include "tvws/study_area.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tvws {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double StudyArea::height_km() const {
    return (north_east.lat_deg - south_west.lat_deg) * kDegToRad * kEarthRadiusKm;
}

double StudyArea::width_km() const {
    const double mid = 0.5 * (north_east.lat_deg + south_west.lat_deg);
    return (north_east.lon_deg - south_west.lon_deg) * kDegToRad * kEarthRadiusKm * std::cos(mid * kDegToRad);
}

double StudyArea::area_km2() const {
    return kEarthRadiusKm * kEarthRadiusKm * (north_east.lon_deg - south_west.lon_deg) * kDegToRad *
           (std::sin(north_east.lat_deg * kDegToRad) - std::sin(south_west.lat_deg * kDegToRad));
}

std::size_t StudyArea::n_rows() const {
    if (rows) return rows;
    return static_cast<std::size_t>(std::max(1L, std::lround(height_km() / step_km)));
}

std::size_t StudyArea::n_cols() const {
    if (cols) return cols;
    return static_cast<std::size_t>(std::max(1L, std::lround(width_km() / step_km)));
}

GeoPoint StudyArea::point(std::size_t row, std::size_t col) const {
    const double dlat = (north_east.lat_deg - south_west.lat_deg) / static_cast<double>(n_rows());
    const double dlon = (north_east.lon_deg - south_west.lon_deg) / static_cast<double>(n_cols());
    return {south_west.lat_deg + (static_cast<double>(row) + 0.5) * dlat,
            south_west.lon_deg + (static_cast<double>(col) + 0.5) * dlon};
}

bool StudyArea::contains(const GeoPoint& p) const {
    return p.lat_deg >= south_west.lat_deg && p.lat_deg <= north_east.lat_deg && p.lon_deg >= south_west.lon_deg &&
           p.lon_deg <= north_east.lon_deg;
}

GeoPoint StudyArea::center() const {
    return {0.5 * (south_west.lat_deg + north_east.lat_deg), 0.5 * (south_west.lon_deg + north_east.lon_deg)};
}

std::vector<std::string> StudyArea::violations() const {
    std::vector<std::string> out;
    if (!south_west.valid() || !north_east.valid()) out.push_back("area corners must be valid coordinates");
    if (!(north_east.lat_deg > south_west.lat_deg) || !(north_east.lon_deg > south_west.lon_deg))
        out.push_back("area box is degenerate");
    if (!(step_km > 0.0) || !std::isfinite(step_km)) out.push_back("area step_km must be positive");
    if (!mask.empty() && out.empty() && mask.size() != size()) out.push_back("area mask size does not match lattice");
    return out;
}

std::vector<GeoPoint> sample_points(const StudyArea& area, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s0 = std::sin(area.south_west.lat_deg * kDegToRad);
    const double s1 = std::sin(area.north_east.lat_deg * kDegToRad);
    std::vector<GeoPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lat = std::asin(s0 + u(rng) * (s1 - s0)) / kDegToRad;
        const double lon = area.south_west.lon_deg + u(rng) * (area.north_east.lon_deg - area.south_west.lon_deg);
        out.push_back({lat, lon});
    }
    return out;
}

}  // namespace tvws

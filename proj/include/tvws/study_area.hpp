#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tvws/geodata.hpp"

namespace tvws {

/// Lat/lon box sampled on a regular lattice of cell centers.
struct StudyArea {
    GeoPoint south_west;
    GeoPoint north_east;
    double step_km = 1.0;
    /// Explicit lattice shape; 0 derives it from step_km.
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Optional row-major validity flags (rows * cols); empty means all valid.
    std::vector<bool> mask;

    std::size_t n_rows() const;
    std::size_t n_cols() const;
    std::size_t size() const { return n_rows() * n_cols(); }
    /// Center of lattice cell (row 0 is the southern edge).
    GeoPoint point(std::size_t row, std::size_t col) const;
    GeoPoint point(std::size_t index) const { return point(index / n_cols(), index % n_cols()); }
    bool valid_cell(std::size_t index) const { return mask.empty() || mask[index]; }
    bool contains(const GeoPoint& p) const;
    GeoPoint center() const;

    double height_km() const;
    double width_km() const;  ///< at the middle latitude
    /// Area of the spherical box in km^2.
    double area_km2() const;

    std::vector<std::string> violations() const;
    friend bool operator==(const StudyArea&, const StudyArea&) = default;
};

/// Points spread uniformly over the spherical box, reproducible from the seed.
std::vector<GeoPoint> sample_points(const StudyArea& area, std::size_t n, std::uint64_t seed);

}  // namespace tvws

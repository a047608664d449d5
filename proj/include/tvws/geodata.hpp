#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace tvws {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    bool valid() const;
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double distance_km(const GeoPoint& a, const GeoPoint& b);

// Initial bearing from a to b, degrees clockwise from north in [0, 360).
double bearing_deg(const GeoPoint& a, const GeoPoint& b);

// Point reached by travelling distance_km along the great circle leaving
// `start` at `azimuth_deg`.
GeoPoint destination(const GeoPoint& start, double azimuth_deg, double distance_km);

/// Regular lat/lon raster. Sample (r, c) sits at
/// (origin.lat - r * spacing, origin.lon + c * spacing); row 0 is the
/// northern edge. NaN marks a NODATA cell.
struct Raster {
    GeoPoint origin;
    double spacing_arcsec = 30.0;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;

    double spacing_deg() const { return spacing_arcsec / 3600.0; }
    double at(std::size_t row, std::size_t col) const { return values[row * n_cols + col]; }
    GeoPoint sample_location(std::size_t row, std::size_t col) const;

    double north() const { return origin.lat_deg; }
    double south() const;
    double west() const { return origin.lon_deg; }
    double east() const;
    bool contains(const GeoPoint& p) const;

    // Empty when the geometry is consistent; otherwise one message per problem.
    std::vector<std::string> violations() const;

    friend bool operator==(const Raster&, const Raster&);
};

struct TerrainGrid : Raster {};
struct PopulationGrid : Raster {};

enum class Modulation { analog, digital };
enum class StationClass { full, class_a, lptv, translator };

struct ServiceType {
    Modulation modulation = Modulation::digital;
    StationClass station = StationClass::full;
    friend bool operator==(const ServiceType&, const ServiceType&) = default;
};

std::string to_string(ServiceType s);
ServiceType parse_service(const std::string& s);

struct TransmitterRecord {
    std::string id;
    int channel = 0;
    ServiceType service;
    double eirp_dbm = 0.0;
    double ground_height_m = 0.0;
    GeoPoint location;

    friend bool operator==(const TransmitterRecord&, const TransmitterRecord&) = default;
};

// Throws InvariantViolation naming the first offending field.
void validate(const TransmitterRecord& tx, std::size_t row = 0);

// Bilinear interpolation of the four samples surrounding p.
double elevation_at(const Raster& grid, const GeoPoint& p);

// Height above average terrain along one azimuth: site elevation plus
// structure height minus the mean of radial samples every 0.1 km from
// 3.2 km to 16.1 km.
double haat(const TerrainGrid& grid, const TransmitterRecord& tx, double azimuth_deg);

// Interdecile (90th - 10th percentile) elevation range of samples taken
// every 0.1 km from the center out to range_km.
double delta_h(const TerrainGrid& grid, const GeoPoint& center, double azimuth_deg, double range_km);

// Furthest distance (multiple of 0.1 km, capped at limit_km) such that every
// 0.1 km sample along the radial lies inside the raster with data.
double max_radial_km(const Raster& grid, const GeoPoint& center, double azimuth_deg, double limit_km);

// Percentile with linear interpolation between order statistics (p in [0,1]).
double percentile(std::vector<double> samples, double p);

std::vector<TransmitterRecord> load_registry(const std::filesystem::path& path);
std::vector<TransmitterRecord> parse_registry(const std::string& text);
void write_registry(const std::filesystem::path& path, const std::vector<TransmitterRecord>& records);
std::string format_registry(const std::vector<TransmitterRecord>& records);

// ESRI ASCII grid (ncols/nrows/xll*/yll*/cellsize/NODATA_value header).
Raster parse_grid(const std::string& text);
Raster load_grid(const std::filesystem::path& path);
TerrainGrid load_terrain(const std::filesystem::path& path);
PopulationGrid load_population(const std::filesystem::path& path);
std::string format_grid(const Raster& grid);
void write_grid(const std::filesystem::path& path, const Raster& grid);

}  // namespace tvws

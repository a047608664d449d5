#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tvws/engine.hpp"
#include "tvws/study_area.hpp"

namespace tvws {

struct Availability {
    bool available = false;
    /// Portable device inside an adjacent-channel region: allowed at the
    /// reduced EIRP cap only.
    bool reduced_power = false;
};

Availability check_availability(const GeoPoint& q, const ChannelContext& ctx, const std::vector<ExclusionSite>& sites);

/// Full rule check for one point and channel.
Availability channel_available(const GeoPoint& q, int channel, const DeviceParams& dev, const Engine& engine);

struct AvailabilityResult {
    int channel = 0;
    double p = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_available = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Row-major per-cell flags (masked cells are never available).
    std::vector<std::uint8_t> available;
    std::vector<std::uint8_t> reduced_power;
};

AvailabilityResult availability_probability(const ChannelContext& ctx, const StudyArea& area,
                                            const std::vector<ExclusionSite>& sites = {});
AvailabilityResult availability_probability(int channel, const DeviceParams& dev, const Engine& engine,
                                            const StudyArea& area);

struct ChannelStatus {
    int channel = 0;
    bool reduced_power = false;
};

/// Available channels at q, sorted by channel.
std::vector<ChannelStatus> available_set(const GeoPoint& q, const DeviceParams& dev, const Engine& engine);

/// CSV `lat,lon,channel,available,reduced_power_flag`, one row per cell.
std::string availability_csv(const AvailabilityResult& r, const StudyArea& area);
/// GeoJSON FeatureCollection of cell-center points with the same fields.
std::string availability_geojson(const AvailabilityResult& r, const StudyArea& area);

enum class Band { low_vhf, high_vhf, low_uhf };
inline constexpr int kBands = 3;
const char* band_name(Band b);
/// Channels counted in a band: LVHF 2..6, HVHF 7..13, LUHF 14..51 without 37.
std::vector<int> band_channels(Band b);

/// Channel counts at one sample point, per band.
struct PointCounts {
    GeoPoint location;
    bool urban = false;
    std::array<int, kBands> available{};  ///< fixed or portable
    std::array<int, kBands> fixed{};
    std::array<int, kBands> portable{};
    std::array<int, kBands> busy{};       ///< inside a co-channel protected contour
};

struct BandStats {
    std::string name;
    int total_channels = 0;
    double available = 0.0;
    double fixed = 0.0;
    double portable = 0.0;
    double microphone_reserved = 0.0;
    double busy = 0.0;
    double unused = 0.0;
    double cuf = 0.0;  ///< 1 - unused / total
};

inline constexpr int kMaxChannelCount = 50;

struct GroupStats {
    std::size_t n_points = 0;
    std::array<BandStats, kBands + 1> bands;  ///< last entry sums all bands
    /// Empirical CDF of channel counts, index x = count.
    std::array<double, kMaxChannelCount + 1> cdf_available{};
    std::array<double, kMaxChannelCount + 1> cdf_fixed{};
    std::array<double, kMaxChannelCount + 1> cdf_portable{};
};

struct Statistics {
    double population_threshold = 1000.0;
    GroupStats all;
    GroupStats urban;
    GroupStats rural;
};

/// Devices the statistics count for: each class at its FCC caps.
DeviceParams reference_device(DeviceClass c);

std::vector<PointCounts> point_counts(const Engine& engine, const std::vector<GeoPoint>& points,
                                      double population_threshold);
GroupStats summarize(const std::vector<PointCounts>& counts);
Statistics statistics(const Engine& engine, const StudyArea& area, std::size_t n_points, double population_threshold,
                      std::uint64_t seed);

/// Table of band rows plus CDF rows.
std::string statistics_csv(const Statistics& s);

}  // namespace tvws

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tvws/geodata.hpp"
#include "tvws/propagation.hpp"
#include "tvws/protection.hpp"
#include "tvws/regulatory.hpp"

namespace tvws {

/// Emission level relative to total in-channel power over one offset
/// interval (MHz from the channel edge): level_db + slope * (f - start).
struct MaskSegment {
    double start_mhz = 0.0;
    double end_mhz = 0.0;  ///< may be +inf
    double level_db = 0.0;
    double slope_db_per_mhz = 0.0;

    double level_at(double offset_mhz) const { return level_db + slope_db_per_mhz * (offset_mhz - start_mhz); }
    friend bool operator==(const MaskSegment&, const MaskSegment&) = default;
};

struct EmissionMask {
    std::vector<MaskSegment> segments;

    /// Level (dB_DTV) at an offset >= 0 from the channel edge.
    double level_at(double offset_mhz) const;
    std::vector<std::string> violations() const;

    /// 8-VSB full-service transmitter limits.
    static EmissionMask full_service();
    /// Low-power / translator limits.
    static EmissionMask lptv();
    friend bool operator==(const EmissionMask&, const EmissionMask&) = default;
};

/// CSV `offset_start_mhz,offset_end_mhz,level_db_dtv,slope_db_per_mhz`.
EmissionMask parse_mask(const std::string& text);
EmissionMask load_mask(const std::filesystem::path& path);
std::string format_mask(const EmissionMask& m);

/// Fraction of a transmitter's power falling in the channel `offset`
/// channels away (|offset| 1 or 2): integral of 10^(E/10) over that 6 MHz.
double leakage_factor(const EmissionMask& mask, int channel_offset);

/// Integral of 10^(E(f)/10) df over [a_mhz, b_mhz] by adaptive Simpson.
double mask_power_integral(const EmissionMask& mask, double a_mhz, double b_mhz);

const EmissionMask& mask_for(ServiceType s);

/// Weight applied to a tower's power as seen on a channel `offset` away:
/// 1 in band, the mask leakage for 1 or 2 channels, 0 beyond.
double p2s_weight(ServiceType s, int channel_offset);

inline constexpr double kP2SMaxDistanceKm = 300.0;

/// Terrain parameters of one station along each integer azimuth.
struct TowerTerrain {
    std::array<double, kAzimuths> haat_m{};
    std::array<double, kAzimuths> delta_h_m{};
};

TowerTerrain tower_terrain(const std::array<AzimuthContour, kAzimuths>& profile);

struct P2SOptions {
    double rx_height_m = 1.5;
    double rx_gain_dbi = 0.0;
    double max_distance_km = kP2SMaxDistanceKm;
    Polarization polarization = Polarization::horizontal;
    double gamma_e = 1.0 / 8.493e6;
};

/// Aggregate primary-to-secondary interference on one channel. ITM
/// coefficients are prepared once per tower and azimuth; queries only sum.
class P2SField {
public:
    P2SField(const std::vector<TransmitterRecord>& registry, const std::vector<TowerTerrain>& terrain, int channel,
             const P2SOptions& options);

    /// Linear sum in mW; 0 when no tower contributes.
    double interference_mw(const GeoPoint& q) const;
    /// Same in dBm; -inf when no tower contributes.
    double interference_dbm(const GeoPoint& q) const;

    std::size_t source_count() const { return sources_.size(); }

private:
    struct Source {
        GeoPoint location;
        double eirp_dbm;
        double weight;
        std::array<ItmCoefficients, kAzimuths> coefficients;
    };
    std::vector<Source> sources_;
    double f_mhz_;
    P2SOptions options_;
};

/// Stand-alone form: derives per-azimuth HAAT and Δh from the terrain.
double p2s_interference_dbm(const GeoPoint& q, int channel, const std::vector<TransmitterRecord>& registry,
                            const TerrainGrid& terrain, double rx_gain_dbi, double rx_height_m,
                            const ProtectionSettings& settings = {});

struct ReusePlan {
    int i = 1;
    int j = 1;
    double r_cell_km = 1.0;
    int k_i = 6;  ///< interferers per tier

    int cluster_size() const { return i * i + i * j + j * j; }
    std::vector<std::string> violations() const;
    friend bool operator==(const ReusePlan&, const ReusePlan&) = default;
};

/// D = sqrt(3K) r_cell.
double reuse_distance_km(const ReusePlan& plan);
/// D_{i,j} = sqrt(i^2 + ij + j^2) D.
double tier_distance_km(const ReusePlan& plan, int i, int j);

/// Shift pairs 0 <= i <= j <= max_shift, excluding (0, 0).
std::vector<std::pair<int, int>> tier_shifts(int max_shift = 2);

/// K_I * sum over tiers of EIRP + G_sec - L(D_ij), in linear power; -inf
/// for a silent device.
double s2s_interference_dbm(const ReusePlan& plan, const DeviceParams& dev, const std::function<double(double)>& loss_db_at_km,
                            const std::vector<std::pair<int, int>>& shifts = tier_shifts(2));

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

}  // namespace tvws

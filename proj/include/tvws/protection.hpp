#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tvws/geodata.hpp"
#include "tvws/propagation.hpp"
#include "tvws/regulatory.hpp"

namespace tvws {

inline constexpr int kAzimuths = 360;

/// Star-shaped region given by one radius per integer azimuth degree.
struct RadialContour {
    GeoPoint center;
    std::array<double, kAzimuths> radii_km{};

    /// Radius toward azimuth_deg, linear between the bracketing degrees.
    double radius_at(double azimuth_deg) const;
    double max_radius_km() const;
    double min_radius_km() const;

    static RadialContour circle(const GeoPoint& center, double radius_km);
    friend bool operator==(const RadialContour&, const RadialContour&) = default;
};

struct ProtectionRegion {
    RadialContour contour;      ///< r_PC
    double separation_km = 0.0;  ///< d_MS
    RadialContour region;       ///< r_PC + d_MS
    int channel = 0;            ///< channel of the protected station
    Relationship relationship = Relationship::co;
    std::string tx_id;
};

/// Knobs shared by every contour and separation computation.
struct ProtectionSettings {
    double tv_rx_height_m = 10.0;  ///< TV receive antenna, used for r_PC and d_MS
    double tv_rx_gain_dbi = 0.0;
    std::optional<double> delta_h_override;
    Polarization polarization = Polarization::horizontal;
    double gamma_e = 1.0 / 8.493e6;
    double initial_delta_h_range_km = 50.0;
    HataEnvironment environment = HataEnvironment::urban;
    ProtectionTables tables;
};

/// Terrain seen from a station along one azimuth, and the resulting radius.
struct AzimuthContour {
    double haat_m = 0.0;
    double delta_h_m = 0.0;
    double radius_km = 0.0;
    InverseStatus status = InverseStatus::inside;
};

/// Path-loss budget (dB) a station's signal may spend before reaching its
/// protection threshold.
double contour_loss_budget_db(const TransmitterRecord& tx, const ProtectionSettings& s);

ItmParams contour_itm_params(const TransmitterRecord& tx, double haat_m, double delta_h_m,
                             const ProtectionSettings& s);

AzimuthContour contour_along(const TransmitterRecord& tx, const TerrainGrid& terrain, double azimuth_deg,
                             const ProtectionSettings& s);

RadialContour protected_contour(const TransmitterRecord& tx, const TerrainGrid& terrain,
                                const ProtectionSettings& s = {});

/// Same, also returning the per-azimuth terrain parameters.
std::array<AzimuthContour, kAzimuths> contour_profile(const TransmitterRecord& tx, const TerrainGrid& terrain,
                                                      const ProtectionSettings& s = {});

/// Distance (km) at which the secondary signal at a TV receiver falls below
/// the station's threshold minus the D/U ratio; secondary loss is HATA.
/// `channel` is the secondary's channel.
double min_separation_km(const TransmitterRecord& tx, int channel, const DeviceParams& dev, Relationship rel,
                         const ProtectionSettings& s = {});

/// Relationship of a secondary on `channel` to a station on `tx_channel`,
/// or nullopt when they are more than one channel apart.
std::optional<Relationship> relationship_between(int tx_channel, int channel);

ProtectionRegion make_region(const TransmitterRecord& tx, const RadialContour& contour, double separation_km,
                             Relationship rel);

ProtectionRegion protection_region(const TransmitterRecord& tx, const TerrainGrid& terrain, const DeviceParams& dev,
                                   Relationship rel, const ProtectionSettings& s = {});

bool in_region(const GeoPoint& p, const RadialContour& r);
bool in_region(const GeoPoint& p, const ProtectionRegion& r);
bool in_region(const GeoPoint& p, const std::vector<ProtectionRegion>& regions);

/// GeoJSON FeatureCollection with one Polygon per contour and region ring
/// (360 vertices plus the closing vertex, [lon, lat] order).
std::string regions_geojson(const std::vector<ProtectionRegion>& regions);

}  // namespace tvws

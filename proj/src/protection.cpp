#include "tvws/protection.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tvws/error.hpp"
#include "tvws/parallel.hpp"

namespace tvws {

namespace {

// Δh needs a few samples along the radial to mean anything.
constexpr double kMinDeltaHRangeKm = 1.0;
constexpr int kDeltaHIterations = 3;
constexpr double kDeltaHConvergenceKm = 0.5;

}  // namespace

double RadialContour::radius_at(double azimuth_deg) const {
    double az = std::fmod(azimuth_deg, 360.0);
    if (az < 0.0) az += 360.0;
    const int lo = static_cast<int>(std::floor(az)) % kAzimuths;
    const int hi = (lo + 1) % kAzimuths;
    const double t = az - std::floor(az);
    return radii_km[lo] + t * (radii_km[hi] - radii_km[lo]);
}

double RadialContour::max_radius_km() const { return *std::max_element(radii_km.begin(), radii_km.end()); }
double RadialContour::min_radius_km() const { return *std::min_element(radii_km.begin(), radii_km.end()); }

RadialContour RadialContour::circle(const GeoPoint& center, double radius_km) {
    RadialContour c;
    c.center = center;
    c.radii_km.fill(radius_km);
    return c;
}

double contour_loss_budget_db(const TransmitterRecord& tx, const ProtectionSettings& s) {
    const double f = channel_frequency_mhz(tx.channel).mid_mhz;
    const double threshold_dbm = dbu_to_dbm(coverage_threshold_dbu(tx.service, tx.channel, s.tables), f);
    return tx.eirp_dbm + s.tv_rx_gain_dbi - threshold_dbm;
}

ItmParams contour_itm_params(const TransmitterRecord& tx, double haat_m, double delta_h_m,
                             const ProtectionSettings& s) {
    ItmParams p;
    p.f_mhz = channel_frequency_mhz(tx.channel).mid_mhz;
    p.h_g1_m = std::clamp(haat_m, 0.5, 3000.0);
    p.h_g2_m = s.tv_rx_height_m;
    p.delta_h_m = delta_h_m;
    p.polarization = s.polarization;
    p.gamma_e = s.gamma_e;
    return p;
}

AzimuthContour contour_along(const TransmitterRecord& tx, const TerrainGrid& terrain, double azimuth_deg,
                             const ProtectionSettings& s) {
    AzimuthContour out;
    out.haat_m = haat(terrain, tx, azimuth_deg);
    const double budget = contour_loss_budget_db(tx, s);

    auto solve = [&](double dh) {
        out.delta_h_m = dh;
        const InverseResult r = inverse_loss(itm_curve(contour_itm_params(tx, out.haat_m, dh, s)), budget);
        out.radius_km = r.distance_m / 1000.0;
        out.status = r.status;
    };

    if (s.delta_h_override) {
        solve(*s.delta_h_override);
        return out;
    }
    // Δh is taken over the span the contour reaches, which in turn depends on
    // Δh; a few fixed-point steps settle it.
    double range = s.initial_delta_h_range_km;
    for (int it = 0; it < kDeltaHIterations; ++it) {
        const double reach = max_radial_km(terrain, tx.location, azimuth_deg, std::max(range, kMinDeltaHRangeKm));
        if (reach < kMinDeltaHRangeKm)
            throw OutOfBounds("terrain ends within " + std::to_string(kMinDeltaHRangeKm) + " km of '" + tx.id + "'");
        solve(delta_h(terrain, tx.location, azimuth_deg, reach));
        const bool settled = std::abs(out.radius_km - range) < kDeltaHConvergenceKm;
        range = out.radius_km;
        if (settled) break;
    }
    return out;
}

std::array<AzimuthContour, kAzimuths> contour_profile(const TransmitterRecord& tx, const TerrainGrid& terrain,
                                                      const ProtectionSettings& s) {
    std::array<AzimuthContour, kAzimuths> out;
    parallel_for(kAzimuths, [&](std::size_t az) { out[az] = contour_along(tx, terrain, static_cast<double>(az), s); });
    return out;
}

RadialContour protected_contour(const TransmitterRecord& tx, const TerrainGrid& terrain, const ProtectionSettings& s) {
    const auto profile = contour_profile(tx, terrain, s);
    RadialContour c;
    c.center = tx.location;
    for (int az = 0; az < kAzimuths; ++az) c.radii_km[az] = profile[az].radius_km;
    return c;
}

double min_separation_km(const TransmitterRecord& tx, int channel, const DeviceParams& dev, Relationship rel,
                         const ProtectionSettings& s) {
    const double f_tv = channel_frequency_mhz(tx.channel).mid_mhz;
    const double threshold_dbm = dbu_to_dbm(coverage_threshold_dbu(tx.service, tx.channel, s.tables), f_tv);
    const double gamma0 = du_ratio_db(tx.service.modulation, rel, s.tables);
    const double target = dev.eirp_dbm + s.tv_rx_gain_dbi - threshold_dbm + gamma0;
    const double f_sec = channel_frequency_mhz(channel).mid_mhz;
    const LossCurve curve = hata_curve(f_sec, dev.antenna_height_m, s.tv_rx_height_m, s.environment);
    if (target == -INFINITY) return curve.d_min_m / 1000.0;
    return inverse_loss(curve, target).distance_m / 1000.0;
}

std::optional<Relationship> relationship_between(int tx_channel, int channel) {
    if (channel == tx_channel) return Relationship::co;
    if (channel == tx_channel + 1) return Relationship::upper_adj;
    if (channel == tx_channel - 1) return Relationship::lower_adj;
    return std::nullopt;
}

ProtectionRegion make_region(const TransmitterRecord& tx, const RadialContour& contour, double separation_km,
                             Relationship rel) {
    ProtectionRegion r;
    r.contour = contour;
    r.separation_km = separation_km;
    r.region = contour;
    for (auto& v : r.region.radii_km) v += separation_km;
    r.channel = tx.channel;
    r.relationship = rel;
    r.tx_id = tx.id;
    return r;
}

ProtectionRegion protection_region(const TransmitterRecord& tx, const TerrainGrid& terrain, const DeviceParams& dev,
                                   Relationship rel, const ProtectionSettings& s) {
    int channel = tx.channel;
    if (rel == Relationship::upper_adj) channel = tx.channel + 1;
    if (rel == Relationship::lower_adj) channel = tx.channel - 1;
    channel = std::clamp(channel, kMinTvChannel, 69);
    return make_region(tx, protected_contour(tx, terrain, s), min_separation_km(tx, channel, dev, rel, s), rel);
}

bool in_region(const GeoPoint& p, const RadialContour& r) {
    const double d = distance_km(r.center, p);
    if (d > r.max_radius_km()) return false;
    if (d == 0.0) return true;
    return d <= r.radius_at(bearing_deg(r.center, p));
}

bool in_region(const GeoPoint& p, const ProtectionRegion& r) { return in_region(p, r.region); }

bool in_region(const GeoPoint& p, const std::vector<ProtectionRegion>& regions) {
    return std::any_of(regions.begin(), regions.end(), [&](const ProtectionRegion& r) { return in_region(p, r); });
}

namespace {

nlohmann::json ring(const RadialContour& c) {
    nlohmann::json coords = nlohmann::json::array();
    for (int az = 0; az <= kAzimuths; ++az) {
        const GeoPoint v = destination(c.center, az % kAzimuths, c.radii_km[az % kAzimuths]);
        coords.push_back({v.lon_deg, v.lat_deg});
    }
    // Closing vertex repeats the first one exactly.
    coords.back() = coords.front();
    return nlohmann::json::array({coords});
}

nlohmann::json feature(const ProtectionRegion& r, const RadialContour& c, const char* kind) {
    return {{"type", "Feature"},
            {"properties",
             {{"tx_id", r.tx_id},
              {"channel", r.channel},
              {"relationship", to_string(r.relationship)},
              {"kind", kind},
              {"separation_km", r.separation_km}}},
            {"geometry", {{"type", "Polygon"}, {"coordinates", ring(c)}}}};
}

}  // namespace

std::string regions_geojson(const std::vector<ProtectionRegion>& regions) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& r : regions) {
        features.push_back(feature(r, r.contour, "contour"));
        features.push_back(feature(r, r.region, "region"));
    }
    return nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}.dump(2);
}

}  // namespace tvws

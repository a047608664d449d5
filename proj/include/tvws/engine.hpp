#pragma once

#include <vector>

#include "tvws/interference.hpp"
#include "tvws/protection.hpp"
#include "tvws/scenario.hpp"

namespace tvws {

/// Protection regions that constrain one channel for one device.
struct ChannelContext {
    int channel = 0;
    DeviceClass device_class = DeviceClass::fixed;
    bool permissible = false;
    std::vector<ProtectionRegion> co;
    std::vector<ProtectionRegion> adjacent;
};

/// Scenario plus the per-station terrain profiles and protected contours,
/// computed once up front. The scenario must outlive the engine.
class Engine {
public:
    explicit Engine(const Scenario& scenario);

    const Scenario& scenario() const { return *scenario_; }
    const ProtectionSettings& settings() const { return settings_; }
    const std::vector<RadialContour>& contours() const { return contours_; }
    const std::vector<TowerTerrain>& tower_terrain() const { return terrain_; }

    ChannelContext channel_context(int channel, const DeviceParams& dev) const;

    /// Interference field on `channel` for a receiver with the device's
    /// antenna height and receive gain.
    P2SField p2s_field(int channel, const DeviceParams& dev) const;

private:
    const Scenario* scenario_;
    ProtectionSettings settings_;
    std::vector<RadialContour> contours_;
    std::vector<TowerTerrain> terrain_;
};

}  // namespace tvws

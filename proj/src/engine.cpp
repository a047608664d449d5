#include "tvws/engine.hpp"

#include <algorithm>
#include <cmath>

#include "tvws/error.hpp"
#include "tvws/parallel.hpp"

namespace tvws {

Engine::Engine(const Scenario& scenario) : scenario_(&scenario), settings_(protection_settings(scenario)) {
    const auto& registry = scenario.registry;
    contours_.resize(registry.size());
    terrain_.resize(registry.size());
    parallel_for(registry.size(), [&](std::size_t k) {
        const auto profile = contour_profile(registry[k], scenario.terrain, settings_);
        contours_[k].center = registry[k].location;
        for (int az = 0; az < kAzimuths; ++az) contours_[k].radii_km[az] = profile[az].radius_km;
        terrain_[k] = tvws::tower_terrain(profile);
    });
}

ChannelContext Engine::channel_context(int channel, const DeviceParams& dev) const {
    ChannelContext ctx;
    ctx.channel = channel;
    ctx.device_class = dev.device_class;
    ctx.permissible = is_permissible(dev.device_class, channel);
    if (!ctx.permissible) return ctx;
    const auto& registry = scenario_->registry;
    for (std::size_t k = 0; k < registry.size(); ++k) {
        const auto rel = relationship_between(registry[k].channel, channel);
        if (!rel) continue;
        const double d_ms = min_separation_km(registry[k], channel, dev, *rel, settings_);
        auto region = make_region(registry[k], contours_[k], d_ms, *rel);
        (*rel == Relationship::co ? ctx.co : ctx.adjacent).push_back(std::move(region));
    }
    return ctx;
}

P2SField Engine::p2s_field(int channel, const DeviceParams& dev) const {
    P2SOptions o;
    o.rx_height_m = std::clamp(dev.antenna_height_m, 0.5, 3000.0);
    o.rx_gain_dbi = dev.rx_gain_dbi;
    o.max_distance_km = scenario_->config.p2s_max_distance_km;
    o.polarization = settings_.polarization;
    o.gamma_e = settings_.gamma_e;
    return P2SField(scenario_->registry, terrain_, channel, o);
}

}  // namespace tvws

#include "tvws/availability.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tvws/error.hpp"
#include "tvws/parallel.hpp"
#include "tvws/text.hpp"

namespace tvws {

Availability check_availability(const GeoPoint& q, const ChannelContext& ctx, const std::vector<ExclusionSite>& sites) {
    Availability a;
    if (!ctx.permissible) return a;
    if (!exclusion_checks(q, ctx.channel, ctx.device_class, sites).empty()) return a;
    if (in_region(q, ctx.co)) return a;
    if (in_region(q, ctx.adjacent)) {
        if (ctx.device_class == DeviceClass::fixed) return a;
        a.reduced_power = true;
    }
    a.available = true;
    return a;
}

Availability channel_available(const GeoPoint& q, int channel, const DeviceParams& dev, const Engine& engine) {
    return check_availability(q, engine.channel_context(channel, dev), engine.scenario().sites);
}

AvailabilityResult availability_probability(const ChannelContext& ctx, const StudyArea& area,
                                            const std::vector<ExclusionSite>& sites) {
    AvailabilityResult r;
    r.channel = ctx.channel;
    r.rows = area.n_rows();
    r.cols = area.n_cols();
    const std::size_t n = r.rows * r.cols;
    r.available.assign(n, 0);
    r.reduced_power.assign(n, 0);
    parallel_for(n, [&](std::size_t i) {
        if (!area.valid_cell(i)) return;
        const Availability a = check_availability(area.point(i), ctx, sites);
        r.available[i] = a.available;
        r.reduced_power[i] = a.available && a.reduced_power;
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!area.valid_cell(i)) continue;
        ++r.n_samples;
        r.n_available += r.available[i];
    }
    r.p = r.n_samples ? static_cast<double>(r.n_available) / static_cast<double>(r.n_samples) : 0.0;
    return r;
}

AvailabilityResult availability_probability(int channel, const DeviceParams& dev, const Engine& engine,
                                            const StudyArea& area) {
    return availability_probability(engine.channel_context(channel, dev), area, engine.scenario().sites);
}

std::vector<ChannelStatus> available_set(const GeoPoint& q, const DeviceParams& dev, const Engine& engine) {
    std::vector<ChannelStatus> out;
    for (int ch : permissible_channels(dev.device_class)) {
        const Availability a = channel_available(q, ch, dev, engine);
        if (a.available) out.push_back({ch, a.reduced_power});
    }
    return out;
}

std::string availability_csv(const AvailabilityResult& r, const StudyArea& area) {
    std::string out = "lat,lon,channel,available,reduced_power_flag\n";
    for (std::size_t i = 0; i < r.available.size(); ++i) {
        if (!area.valid_cell(i)) continue;
        const GeoPoint p = area.point(i);
        out += text::format_double(p.lat_deg) + "," + text::format_double(p.lon_deg) + "," + std::to_string(r.channel) +
               "," + std::to_string(r.available[i]) + "," + std::to_string(r.reduced_power[i]) + "\n";
    }
    return out;
}

std::string availability_geojson(const AvailabilityResult& r, const StudyArea& area) {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < r.available.size(); ++i) {
        if (!area.valid_cell(i)) continue;
        const GeoPoint p = area.point(i);
        features.push_back({{"type", "Feature"},
                            {"properties",
                             {{"channel", r.channel},
                              {"available", r.available[i] != 0},
                              {"reduced_power", r.reduced_power[i] != 0}}},
                            {"geometry", {{"type", "Point"}, {"coordinates", {p.lon_deg, p.lat_deg}}}}});
    }
    return nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

const char* band_name(Band b) {
    switch (b) {
        case Band::low_vhf: return "LVHF";
        case Band::high_vhf: return "HVHF";
        case Band::low_uhf: return "LUHF";
    }
    return "";
}

std::vector<int> band_channels(Band b) {
    std::vector<int> out;
    const auto [lo, hi] = b == Band::low_vhf ? std::pair{2, 6} : b == Band::high_vhf ? std::pair{7, 13} : std::pair{14, 51};
    for (int ch = lo; ch <= hi; ++ch)
        if (ch != 37) out.push_back(ch);
    return out;
}

DeviceParams reference_device(DeviceClass c) {
    DeviceParams d;
    d.device_class = c;
    d.eirp_dbm = max_eirp_dbm(c, false);
    d.antenna_height_m = c == DeviceClass::fixed ? kFixedMaxHeightM : kPortableMaxHeightM;
    return d;
}

namespace {

double population_at(const std::optional<PopulationGrid>& pop, const GeoPoint& p) {
    if (!pop || !pop->contains(p)) return 0.0;
    try {
        return elevation_at(*pop, p);
    } catch (const NoData&) {
        return 0.0;
    }
}

}  // namespace

std::vector<PointCounts> point_counts(const Engine& engine, const std::vector<GeoPoint>& points,
                                      double population_threshold) {
    const auto& scenario = engine.scenario();
    std::array<ChannelContext, kMaxTvChannel + 1> fixed;
    std::array<ChannelContext, kMaxTvChannel + 1> portable;
    std::array<std::vector<std::size_t>, kMaxTvChannel + 1> co_towers;
    for (int ch = kMinTvChannel; ch <= kMaxTvChannel; ++ch) {
        fixed[ch] = engine.channel_context(ch, reference_device(DeviceClass::fixed));
        portable[ch] = engine.channel_context(ch, reference_device(DeviceClass::portable));
    }
    for (std::size_t k = 0; k < scenario.registry.size(); ++k) co_towers[scenario.registry[k].channel].push_back(k);

    std::vector<PointCounts> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        PointCounts& pc = out[i];
        pc.location = points[i];
        pc.urban = population_at(scenario.population, points[i]) >= population_threshold;
        for (int b = 0; b < kBands; ++b) {
            for (int ch : band_channels(static_cast<Band>(b))) {
                const bool f = check_availability(points[i], fixed[ch], scenario.sites).available;
                const bool p = check_availability(points[i], portable[ch], scenario.sites).available;
                pc.fixed[b] += f;
                pc.portable[b] += p;
                pc.available[b] += f || p;
                const bool busy = std::any_of(co_towers[ch].begin(), co_towers[ch].end(), [&](std::size_t k) {
                    return in_region(points[i], engine.contours()[k]);
                });
                pc.busy[b] += busy;
            }
        }
    });
    return out;
}

GroupStats summarize(const std::vector<PointCounts>& counts) {
    GroupStats g;
    g.n_points = counts.size();
    const double n = static_cast<double>(counts.size());
    std::array<std::size_t, kMaxChannelCount + 1> hist_avail{}, hist_fixed{}, hist_portable{};
    for (int b = 0; b <= kBands; ++b) {
        BandStats& s = g.bands[b];
        s.name = b == kBands ? "all" : band_name(static_cast<Band>(b));
    }
    for (int b = 0; b < kBands; ++b) {
        const auto chans = band_channels(static_cast<Band>(b));
        g.bands[b].total_channels = static_cast<int>(chans.size());
        g.bands[b].microphone_reserved =
            static_cast<double>(std::count_if(chans.begin(), chans.end(), is_microphone_reserved));
    }
    for (const auto& pc : counts) {
        int ta = 0, tf = 0, tp = 0;
        for (int b = 0; b < kBands; ++b) {
            g.bands[b].available += pc.available[b];
            g.bands[b].fixed += pc.fixed[b];
            g.bands[b].portable += pc.portable[b];
            g.bands[b].busy += pc.busy[b];
            ta += pc.available[b];
            tf += pc.fixed[b];
            tp += pc.portable[b];
        }
        ++hist_avail[std::min(ta, kMaxChannelCount)];
        ++hist_fixed[std::min(tf, kMaxChannelCount)];
        ++hist_portable[std::min(tp, kMaxChannelCount)];
    }
    BandStats& all = g.bands[kBands];
    for (int b = 0; b < kBands; ++b) {
        BandStats& s = g.bands[b];
        if (n > 0) {
            s.available /= n;
            s.fixed /= n;
            s.portable /= n;
            s.busy /= n;
        }
        s.unused = s.total_channels - s.available - s.busy;
        s.cuf = 1.0 - s.unused / s.total_channels;
        all.total_channels += s.total_channels;
        all.available += s.available;
        all.fixed += s.fixed;
        all.portable += s.portable;
        all.microphone_reserved += s.microphone_reserved;
        all.busy += s.busy;
        all.unused += s.unused;
    }
    all.cuf = 1.0 - all.unused / all.total_channels;
    std::size_t ca = 0, cf = 0, cp = 0;
    for (int x = 0; x <= kMaxChannelCount; ++x) {
        ca += hist_avail[x];
        cf += hist_fixed[x];
        cp += hist_portable[x];
        g.cdf_available[x] = n > 0 ? ca / n : 0.0;
        g.cdf_fixed[x] = n > 0 ? cf / n : 0.0;
        g.cdf_portable[x] = n > 0 ? cp / n : 0.0;
    }
    return g;
}

Statistics statistics(const Engine& engine, const StudyArea& area, std::size_t n_points, double population_threshold,
                      std::uint64_t seed) {
    if (n_points < 1) throw DomainError("statistics need at least one sample point");
    const auto counts = point_counts(engine, sample_points(area, n_points, seed), population_threshold);
    std::vector<PointCounts> urban, rural;
    for (const auto& c : counts) (c.urban ? urban : rural).push_back(c);
    Statistics s;
    s.population_threshold = population_threshold;
    s.all = summarize(counts);
    s.urban = summarize(urban);
    s.rural = summarize(rural);
    return s;
}

std::string statistics_csv(const Statistics& s) {
    std::string out = "group,section,key,value\n";
    auto row = [&](const std::string& g, const std::string& sec, const std::string& key, double v) {
        out += g + "," + sec + "," + key + "," + text::format_double(v) + "\n";
    };
    const std::pair<const char*, const GroupStats*> groups[] = {{"all", &s.all}, {"urban", &s.urban}, {"rural", &s.rural}};
    for (const auto& [name, g] : groups) {
        row(name, "points", "n", static_cast<double>(g->n_points));
        for (const auto& b : g->bands) {
            row(name, b.name, "total_channels", b.total_channels);
            row(name, b.name, "available", b.available);
            row(name, b.name, "fixed", b.fixed);
            row(name, b.name, "portable", b.portable);
            row(name, b.name, "microphone_reserved", b.microphone_reserved);
            row(name, b.name, "busy", b.busy);
            row(name, b.name, "unused", b.unused);
            row(name, b.name, "cuf", b.cuf);
        }
        for (int x = 0; x <= kMaxChannelCount; ++x) row(name, "cdf_available", std::to_string(x), g->cdf_available[x]);
        for (int x = 0; x <= kMaxChannelCount; ++x) row(name, "cdf_fixed", std::to_string(x), g->cdf_fixed[x]);
        for (int x = 0; x <= kMaxChannelCount; ++x) row(name, "cdf_portable", std::to_string(x), g->cdf_portable[x]);
    }
    return out;
}

}  // namespace tvws

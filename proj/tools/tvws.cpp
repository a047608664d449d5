// tvws: command-line front end for the white-space analysis library.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tvws/availability.hpp"
#include "tvws/capacity.hpp"
#include "tvws/engine.hpp"
#include "tvws/error.hpp"
#include "tvws/parallel.hpp"
#include "tvws/scenario.hpp"
#include "tvws/text.hpp"

using namespace tvws;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

// Bad user input that is not a library error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string scenario;
    std::string output;
    unsigned jobs = 0;
};

struct DeviceFlags {
    std::optional<std::string> device;
    std::optional<double> eirp;
    std::optional<double> height;
    bool hypothetical = false;

    void add(CLI::App* cmd) {
        cmd->add_option("--device", device, "fixed | portable")->check(CLI::IsMember({"fixed", "portable", "personal"}));
        cmd->add_option("--eirp", eirp, "device EIRP in dBm");
        cmd->add_option("--height", height, "device antenna height in m");
        cmd->add_flag("--hypothetical", hypothetical, "allow values beyond the device caps");
    }

    // A different class starts from that class's caps; explicit values win.
    void apply(DeviceParams& d) const {
        if (device) {
            const DeviceClass c = parse_device_class(*device);
            if (c != d.device_class) d = reference_device(c);
        }
        if (eirp) d.eirp_dbm = *eirp;
        if (height) d.antenna_height_m = *height;
        if (hypothetical) d.hypothetical = true;
        const auto bad = violations(d);
        if (!bad.empty()) throw UsageError("device: " + bad.front());
    }
};

void emit(const Common& c, const std::string& contents) {
    if (c.output.empty() || c.output == "-") {
        std::cout << contents;
        std::cout.flush();
    } else {
        text::write_file(c.output, contents);
        spdlog::info("wrote {}", c.output);
    }
}

Scenario open_scenario(const Common& c) {
    if (c.scenario.empty()) throw UsageError("--scenario is required");
    spdlog::debug("loading {}", c.scenario);
    Scenario s = load_scenario(c.scenario);
    const auto bad = validate(s);
    if (!bad.empty()) {
        for (const auto& m : bad) spdlog::error("{}", m);
        throw UsageError("scenario '" + c.scenario + "' is invalid (" + std::to_string(bad.size()) + " violations)");
    }
    return s;
}

void check_channel(int channel) {
    if (channel < kMinTvChannel || channel > kMaxTvChannel)
        throw UsageError("channel must be within " + std::to_string(kMinTvChannel) + ".." + std::to_string(kMaxTvChannel));
}

GeoPoint point_in_area(const Scenario& s, double lat, double lon) {
    const GeoPoint q{lat, lon};
    if (!s.area.contains(q))
        throw UsageError("point " + text::format_double(lat) + "," + text::format_double(lon) + " is outside the study area");
    return q;
}

std::string num(double v) { return text::format_double(v); }

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("tvws");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TVWS_LOG")) {
        const auto level = spdlog::level::from_str(text::to_lower(env));
        // from_str maps unknown names to off; accept only real names.
        if (level != spdlog::level::off || text::to_lower(env) == "off") spdlog::set_level(level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"TV white space availability, interference and capacity analysis"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Common common;
    app.add_option("--scenario", common.scenario, "scenario.toml path");
    app.add_option("-o,--output", common.output, "output file (default stdout)");
    app.add_option("-j,--jobs", common.jobs, "worker threads (default: all cores)");

    // channels
    auto* channels = app.add_subcommand("channels", "list available channels at a point");
    double lat = 0.0, lon = 0.0;
    DeviceFlags ch_dev;
    channels->add_option("--lat", lat, "latitude in degrees")->required();
    channels->add_option("--lon", lon, "longitude in degrees")->required();
    ch_dev.add(channels);

    // contour
    auto* contour = app.add_subcommand("contour", "protected contour and protection region of one station");
    std::string tx_id;
    std::string relationship = "co";
    DeviceFlags ct_dev;
    contour->add_option("--tx", tx_id, "station id")->required();
    contour->add_option("--relationship", relationship, "co | upper_adj | lower_adj")
        ->check(CLI::IsMember({"co", "upper_adj", "lower_adj"}));
    ct_dev.add(contour);

    // availability
    auto* avail = app.add_subcommand("availability", "per-cell availability over the study area");
    std::optional<int> av_channel;
    std::string av_format = "csv";
    DeviceFlags av_dev;
    avail->add_option("--channel", av_channel, "TV channel (default: scenario channel)");
    avail->add_option("--format", av_format, "csv | geojson")->check(CLI::IsMember({"csv", "geojson"}));
    av_dev.add(avail);

    // interference
    auto* interf = app.add_subcommand("interference", "primary-to-secondary and secondary-to-secondary interference");
    std::optional<double> if_lat, if_lon;
    std::optional<int> if_channel;
    DeviceFlags if_dev;
    interf->add_option("--lat", if_lat, "latitude (omit for the whole area)");
    interf->add_option("--lon", if_lon, "longitude (omit for the whole area)");
    interf->add_option("--channel", if_channel, "TV channel (default: scenario channel)");
    if_dev.add(interf);

    // capacity
    auto* capacity = app.add_subcommand("capacity", "secondary network capacity");
    std::optional<int> cap_channel;
    bool cap_all = false;
    DeviceFlags cap_dev;
    capacity->add_option("--channel", cap_channel, "TV channel (default: scenario channel)");
    capacity->add_flag("--all", cap_all, "every permissible channel plus a total row");
    cap_dev.add(capacity);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "re-run the pipeline over one parameter");
    std::string sw_param;
    double sw_from = 0.0, sw_to = 0.0;
    int sw_steps = 0;
    std::optional<int> sw_channel;
    DeviceFlags sw_dev;
    sweep_cmd->add_option("--param", sw_param, "eirp | height | deltah | rcell")->required();
    sweep_cmd->add_option("--from", sw_from)->required();
    sweep_cmd->add_option("--to", sw_to)->required();
    sweep_cmd->add_option("--steps", sw_steps)->required();
    sweep_cmd->add_option("--channel", sw_channel, "TV channel (default: scenario channel)");
    sw_dev.add(sweep_cmd);

    // stats
    auto* stats = app.add_subcommand("stats", "channel-count statistics over random sample points");
    std::optional<int> st_points;
    std::optional<std::uint64_t> st_seed;
    stats->add_option("--points", st_points, "sample points (default: scenario setting)");
    stats->add_option("--seed", st_seed, "sampling seed (default: scenario seed)");

    // synth
    auto* synth = app.add_subcommand("synth", "write a synthetic scenario directory");
    std::string sy_kind = "standard";
    std::string sy_dir;
    std::uint64_t sy_seed = 2024;
    SyntheticParams sp;
    std::string sy_terrain;
    synth->add_option("--kind", sy_kind, "single_tower | ring | poisson_field | standard")
        ->check(CLI::IsMember({"single_tower", "ring", "poisson_field", "standard"}));
    synth->add_option("--dir", sy_dir, "output directory")->required();
    synth->add_option("--seed", sy_seed);
    synth->add_option("--terrain", sy_terrain, "flat | ramp | hills")->check(CLI::IsMember({"flat", "ramp", "hills"}));
    synth->add_option("--relief", sp.relief_m, "terrain relief in m");
    synth->add_option("--half-width", sp.area_half_km, "study area half width in km");
    synth->add_option("--area-step", sp.area_step_km, "study lattice step in km");
    synth->add_option("--channel", sp.channel);
    synth->add_option("--towers", sp.tower_count, "tower count (standard)");
    synth->add_option("--intensity", sp.intensity_per_km2, "towers per km^2 per channel (poisson_field)");
    synth->add_option("--tower-eirp", sp.eirp_dbm, "station EIRP in dBm");
    synth->add_option("--tower-height", sp.height_m, "station antenna height in m");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check a scenario and list violations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        set_worker_count(common.jobs);

        if (*validate_cmd) {
            if (common.scenario.empty()) throw UsageError("--scenario is required");
            const Scenario s = load_scenario(common.scenario);
            const auto bad = validate(s);
            std::string out;
            for (const auto& m : bad) out += m + "\n";
            emit(common, out);
            return bad.empty() ? kExitOk : kExitInput;
        }

        if (*synth) {
            if (!sy_terrain.empty()) sp.terrain = parse_terrain_kind(sy_terrain);
            const SyntheticKind kind = parse_synthetic_kind(sy_kind);
            Scenario s = kind == SyntheticKind::standard && sy_terrain.empty() ? standard_scenario(sy_seed)
                                                                                : generate_synthetic(kind, sp, sy_seed);
            save_scenario(s, sy_dir);
            spdlog::info("wrote {} with {} stations", sy_dir, s.registry.size());
            return kExitOk;
        }

        Scenario s = open_scenario(common);

        if (*channels) {
            ch_dev.apply(s.device);
            const GeoPoint q = point_in_area(s, lat, lon);
            const Engine engine(s);
            std::string out = "channel,reduced_power\n";
            for (const auto& c : available_set(q, s.device, engine))
                out += std::to_string(c.channel) + "," + (c.reduced_power ? "1" : "0") + "\n";
            emit(common, out);
            return kExitOk;
        }

        if (*contour) {
            ct_dev.apply(s.device);
            std::size_t k = 0;
            while (k < s.registry.size() && s.registry[k].id != tx_id) ++k;
            if (k == s.registry.size()) throw UsageError("unknown station id '" + tx_id + "'");
            const Relationship rel = relationship == "co"          ? Relationship::co
                                     : relationship == "upper_adj" ? Relationship::upper_adj
                                                                   : Relationship::lower_adj;
            const auto region = protection_region(s.registry[k], s.terrain, s.device, rel, protection_settings(s));
            emit(common, regions_geojson({region}) + "\n");
            return kExitOk;
        }

        if (*avail) {
            av_dev.apply(s.device);
            const int channel = av_channel.value_or(s.channel);
            check_channel(channel);
            const Engine engine(s);
            const auto r = availability_probability(channel, s.device, engine, s.area);
            spdlog::info("channel {}: p = {} over {} cells", channel, num(r.p), r.n_samples);
            emit(common, av_format == "csv" ? availability_csv(r, s.area) : availability_geojson(r, s.area) + "\n");
            return kExitOk;
        }

        if (*interf) {
            if_dev.apply(s.device);
            const int channel = if_channel.value_or(s.channel);
            check_channel(channel);
            if (if_lat.has_value() != if_lon.has_value()) throw UsageError("--lat and --lon go together");
            const Engine engine(s);
            const CellModel cell = cell_model(s);
            const P2SField field = engine.p2s_field(channel, s.device);
            const double s2s = cell_s2s_dbm(channel, cell);
            const double signal = cell_signal_dbm(channel, cell);
            const ChannelContext ctx = engine.channel_context(channel, s.device);

            std::vector<GeoPoint> points;
            if (if_lat) {
                points.push_back(point_in_area(s, *if_lat, *if_lon));
            } else {
                for (std::size_t i = 0; i < s.area.size(); ++i)
                    if (s.area.valid_cell(i)) points.push_back(s.area.point(i));
            }
            std::vector<std::string> rows(points.size());
            parallel_for(points.size(), [&](std::size_t i) {
                const double p2s_mw = field.interference_mw(points[i]);
                const double ratio = sinr(dbm_to_mw(signal), cell.link.noise_mw(), p2s_mw, dbm_to_mw(s2s));
                const bool ok = check_availability(points[i], ctx, s.sites).available;
                rows[i] = num(points[i].lat_deg) + "," + num(points[i].lon_deg) + "," + std::to_string(channel) + "," +
                          num(mw_to_dbm(p2s_mw)) + "," + num(s2s) + "," + num(10.0 * std::log10(ratio)) + "," +
                          (ok ? "1" : "0") + "\n";
            });
            std::string out = "lat,lon,channel,p2s_dbm,s2s_dbm,sinr_db,available\n";
            for (const auto& r : rows) out += r;
            emit(common, out);
            return kExitOk;
        }

        if (*capacity) {
            cap_dev.apply(s.device);
            const Engine engine(s);
            const CellModel cell = cell_model(s);
            std::vector<int> chans;
            if (cap_all) {
                chans = permissible_channels(s.device.device_class);
            } else {
                chans.push_back(cap_channel.value_or(s.channel));
                check_channel(chans.front());
            }
            std::vector<CellCapacity> per;
            for (int ch : chans) per.push_back(cell_capacity(ch, cell, engine, s.area));
            std::string out = "channel,p,mean_log2,capacity_bps,users,c_user_bps,cpa_bps_m2,mobile_bps\n";
            auto row = [&](const std::string& label, double p, double mean_log2, double c) {
                const UserCapacity u = per_user_capacity(c, cell);
                out += label + "," + num(p) + "," + num(mean_log2) + "," + num(c) + "," + num(u.users) + "," +
                       num(u.c_user_bps) + "," + num(u.cpa_bps_m2) + "," + num(mobile_capacity_bps(u.c_user_bps, cell)) +
                       "\n";
            };
            for (const auto& c : per) row(std::to_string(c.channel), c.p, c.mean_log2, c.capacity_bps);
            if (cap_all) row("total", std::nan(""), std::nan(""), total_capacity_bps(per));
            emit(common, out);
            return kExitOk;
        }

        if (*sweep_cmd) {
            sw_dev.apply(s.device);
            const SweepParam param = parse_sweep_param(sw_param);
            const int channel = sw_channel.value_or(s.channel);
            check_channel(channel);
            const auto values = linspace(sw_from, sw_to, sw_steps);
            emit(common, sweep_csv(sweep(param, values, channel, s, s.device.hypothetical)));
            return kExitOk;
        }

        if (*stats) {
            const int points = st_points.value_or(s.config.stats_points);
            if (points < 1) throw UsageError("--points must be at least 1");
            const auto n = static_cast<std::size_t>(points);
            const Engine engine(s);
            const Statistics st =
                statistics(engine, s.area, n, s.config.population_threshold, st_seed.value_or(s.seed));
            emit(common, statistics_csv(st));
            return kExitOk;
        }
    } catch (const UsageError& e) {
        spdlog::error("{}", e.what());
        return kExitInput;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        spdlog::critical("internal error: {}", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}

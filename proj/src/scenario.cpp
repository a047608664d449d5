#include "tvws/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "tvws/error.hpp"
#include "tvws/interference.hpp"
#include "tvws/text.hpp"

namespace tvws {

namespace {

constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;
constexpr double kHaatReachKm = 16.1;

}  // namespace

ProtectionSettings protection_settings(const Scenario& s) {
    ProtectionSettings p;
    p.tv_rx_height_m = s.config.tv_rx_height_m;
    p.tv_rx_gain_dbi = s.config.tv_rx_gain_dbi;
    p.delta_h_override = s.config.delta_h_override;
    p.polarization = s.config.polarization;
    p.gamma_e = s.config.gamma_e;
    p.initial_delta_h_range_km = s.config.initial_delta_h_range_km;
    p.environment = s.config.environment;
    p.tables = s.tables;
    return p;
}

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> out;
    auto add_all = [&](const std::string& prefix, const std::vector<std::string>& msgs) {
        for (const auto& m : msgs) out.push_back(prefix + m);
    };

    const auto terrain_bad = s.terrain.violations();
    add_all("terrain: ", terrain_bad);
    std::set<std::string> ids;
    for (std::size_t k = 0; k < s.registry.size(); ++k) {
        const auto& tx = s.registry[k];
        try {
            validate(tx, k + 1);
        } catch (const InvariantViolation& e) {
            out.push_back(std::string("registry: ") + e.what());
            continue;
        }
        if (!ids.insert(tx.id).second) out.push_back("registry: duplicate id '" + tx.id + "'");
        if (!terrain_bad.empty()) continue;
        // Towers need the whole HAAT radial on the grid.
        const double cos_lat = std::cos(tx.location.lat_deg * std::numbers::pi / 180.0);
        const double margin = std::min({(s.terrain.north() - tx.location.lat_deg) * kKmPerDegree,
                                        (tx.location.lat_deg - s.terrain.south()) * kKmPerDegree,
                                        (s.terrain.east() - tx.location.lon_deg) * kKmPerDegree * cos_lat,
                                        (tx.location.lon_deg - s.terrain.west()) * kKmPerDegree * cos_lat});
        if (!(margin >= kHaatReachKm))
            out.push_back("registry: tower '" + tx.id + "' is not inside the terrain with a " +
                          text::format_double(kHaatReachKm) + " km margin");
    }
    if (s.population) {
        add_all("population: ", s.population->violations());
        for (double v : s.population->values)
            if (v < 0.0) {
                out.push_back("population: negative density");
                break;
            }
    }
    for (const auto& site : s.sites)
        if (!site.location.valid()) out.push_back("sites: '" + site.name + "' has an invalid location");
    add_all("area: ", s.area.violations());
    add_all("device: ", violations(s.device));
    if (s.channel < kMinTvChannel || s.channel > kMaxTvChannel) out.push_back("channel must be within 2..51");

    const auto& c = s.config;
    auto in_range = [&](double v, double lo, double hi, const char* name) {
        if (!(v >= lo && v <= hi)) out.push_back(std::string("config: ") + name + " out of range");
    };
    in_range(c.tv_rx_height_m, 0.5, 3000.0, "tv_rx_height_m");
    in_range(c.secondary_rx_height_m, 0.5, 3000.0, "secondary_rx_height_m");
    in_range(c.tv_rx_gain_dbi, -50.0, 50.0, "tv_rx_gain_dbi");
    if (c.delta_h_override) in_range(*c.delta_h_override, 0.0, 1e4, "delta_h_override");
    in_range(c.gamma_e, 1e-9, 1e-5, "gamma_e");
    in_range(c.initial_delta_h_range_km, 1.0, 2000.0, "initial_delta_h_range_km");
    in_range(c.p2s_max_distance_km, 1.0, 2000.0, "p2s_max_distance_km");
    in_range(c.noise_figure_db, 0.0, 50.0, "noise_figure_db");
    in_range(c.bandwidth_hz, 1.0, 1e9, "bandwidth_hz");
    in_range(c.r_cell_km, 1e-3, 100.0, "r_cell_km");
    if (c.reuse_i < 0 || c.reuse_j < 0 || (c.reuse_i == 0 && c.reuse_j == 0))
        out.push_back("config: reuse_i, reuse_j must be >= 0 and not both 0");
    if (c.k_i < 1) out.push_back("config: k_i must be >= 1");
    if (c.tier_max < 1) out.push_back("config: tier_max must be >= 1");
    if (!(c.mac_efficiency > 0.0 && c.mac_efficiency <= 1.0)) out.push_back("config: mac_efficiency out of range");
    in_range(c.alpha_users, 1e-12, 1e12, "alpha_users");
    in_range(c.population_density_per_sq_mi, 1e-12, 1e9, "population_density_per_sq_mi");
    in_range(c.alpha_ho, 0.0, 1e6, "alpha_ho");
    in_range(c.handover_s, 0.0, 1e6, "handover_s");
    in_range(c.speed_mps, 0.0, 1e4, "speed_mps");
    if (c.receiver_rings < 1 || c.receiver_angles < 1) out.push_back("config: receiver lattice is empty");
    if (c.max_cells < 1) out.push_back("config: max_cells must be >= 1");
    if (c.stats_points < 1) out.push_back("config: stats_points must be >= 1");
    in_range(c.population_threshold, 0.0, 1e9, "population_threshold");
    return out;
}

SyntheticKind parse_synthetic_kind(const std::string& s) {
    const std::string v = text::to_lower(s);
    if (v == "single_tower") return SyntheticKind::single_tower;
    if (v == "ring") return SyntheticKind::ring;
    if (v == "poisson_field") return SyntheticKind::poisson_field;
    if (v == "standard") return SyntheticKind::standard;
    throw Error("unknown synthetic scenario kind '" + s + "'");
}

TerrainKind parse_terrain_kind(const std::string& s) {
    const std::string v = text::to_lower(s);
    if (v == "flat") return TerrainKind::flat;
    if (v == "ramp") return TerrainKind::ramp;
    if (v == "hills") return TerrainKind::hills;
    throw Error("unknown terrain kind '" + s + "'");
}

std::string to_string(SyntheticKind k) {
    switch (k) {
        case SyntheticKind::single_tower: return "single_tower";
        case SyntheticKind::ring: return "ring";
        case SyntheticKind::poisson_field: return "poisson_field";
        case SyntheticKind::standard: return "standard";
    }
    return "";
}

std::string to_string(TerrainKind k) {
    switch (k) {
        case TerrainKind::flat: return "flat";
        case TerrainKind::ramp: return "ramp";
        case TerrainKind::hills: return "hills";
    }
    return "";
}

TerrainGrid synthetic_terrain(TerrainKind kind, const GeoPoint& north_west, double spacing_arcsec, std::size_t rows,
                              std::size_t cols, double base_m, double relief_m, std::uint64_t seed) {
    TerrainGrid g;
    g.origin = north_west;
    g.spacing_arcsec = spacing_arcsec;
    g.n_rows = rows;
    g.n_cols = cols;
    g.values.assign(rows * cols, base_m);
    if (kind == TerrainKind::flat) return g;
    if (kind == TerrainKind::ramp) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                g.values[r * cols + c] = base_m + relief_m * static_cast<double>(c) / static_cast<double>(cols - 1);
        return g;
    }
    // Hills: a handful of plane waves with random direction, wavelength and phase.
    struct Wave {
        double kx, ky, phase, amp;
    };
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Wave> waves;
    double amp_sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dir = 2.0 * std::numbers::pi * u(rng);
        const double wavelength_km = 8.0 + 52.0 * u(rng);
        const double k = 2.0 * std::numbers::pi / wavelength_km;
        const double amp = 0.5 + u(rng);
        waves.push_back({k * std::cos(dir), k * std::sin(dir), 2.0 * std::numbers::pi * u(rng), amp});
        amp_sum += amp;
    }
    const double cos_lat = std::cos(north_west.lat_deg * std::numbers::pi / 180.0);
    const double step_km = spacing_arcsec / 3600.0 * kKmPerDegree;
    for (std::size_t r = 0; r < rows; ++r) {
        const double y = static_cast<double>(r) * step_km;
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = static_cast<double>(c) * step_km * cos_lat;
            double h = 0.0;
            for (const auto& w : waves) h += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
            g.values[r * cols + c] = base_m + relief_m * (0.5 + 0.5 * h / amp_sum);
        }
    }
    return g;
}

namespace {

struct Frame {
    double dlat_area;
    double dlon_area;
    double cos_lat;
};

Frame make_frame(const SyntheticParams& p) {
    const double cos_lat = std::cos(p.center.lat_deg * std::numbers::pi / 180.0);
    return {p.area_half_km / kKmPerDegree, p.area_half_km / (kKmPerDegree * cos_lat), cos_lat};
}

TransmitterRecord make_tower(const std::string& id, int channel, ServiceType service, double eirp, double height,
                             const GeoPoint& at) {
    TransmitterRecord tx;
    tx.id = id;
    tx.channel = channel;
    tx.service = service;
    tx.eirp_dbm = eirp;
    tx.ground_height_m = height;
    tx.location = at;
    return tx;
}

// Rounds to a short decimal so registry files stay readable.
double tidy(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

Scenario generate_synthetic(SyntheticKind kind, const SyntheticParams& params, std::uint64_t seed) {
    Scenario s;
    s.seed = seed;
    s.channel = params.channel;
    const Frame f = make_frame(params);
    s.area.south_west = {params.center.lat_deg - f.dlat_area, params.center.lon_deg - f.dlon_area};
    s.area.north_east = {params.center.lat_deg + f.dlat_area, params.center.lon_deg + f.dlon_area};
    s.area.step_km = params.area_step_km;

    const double half_grid_km = params.area_half_km + params.margin_km;
    const double spacing_deg = params.spacing_arcsec / 3600.0;
    const double dlat_grid = half_grid_km / kKmPerDegree;
    const double dlon_grid = half_grid_km / (kKmPerDegree * f.cos_lat);
    const auto rows = static_cast<std::size_t>(std::ceil(2.0 * dlat_grid / spacing_deg)) + 1;
    const auto cols = static_cast<std::size_t>(std::ceil(2.0 * dlon_grid / spacing_deg)) + 1;
    const GeoPoint nw{params.center.lat_deg + dlat_grid, params.center.lon_deg - dlon_grid};
    s.terrain = synthetic_terrain(params.terrain, nw, params.spacing_arcsec, rows, cols, params.base_elevation_m,
                                  params.relief_m, seed);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_point = [&] {
        return GeoPoint{tidy(s.area.south_west.lat_deg + u(rng) * 2.0 * f.dlat_area, 1e6),
                        tidy(s.area.south_west.lon_deg + u(rng) * 2.0 * f.dlon_area, 1e6)};
    };

    switch (kind) {
        case SyntheticKind::single_tower:
            s.registry.push_back(
                make_tower("tower-1", params.channel, params.service, params.eirp_dbm, params.height_m, params.center));
            break;
        case SyntheticKind::ring:
            for (int i = 0; i < params.ring_count; ++i) {
                const GeoPoint at = destination(params.center, 360.0 * i / params.ring_count, params.ring_radius_km);
                s.registry.push_back(make_tower("ring-" + std::to_string(i + 1), params.channel, params.service,
                                                params.eirp_dbm, params.height_m, at));
            }
            break;
        case SyntheticKind::poisson_field: {
            const std::vector<int> channels = params.channels.empty() ? std::vector<int>{params.channel} : params.channels;
            const double area_km2 = 4.0 * params.area_half_km * params.area_half_km;
            int n_id = 0;
            for (int ch : channels) {
                std::poisson_distribution<int> count(params.intensity_per_km2 * area_km2);
                const int n = count(rng);
                for (int i = 0; i < n; ++i)
                    s.registry.push_back(make_tower("pf-" + std::to_string(++n_id), ch, params.service,
                                                    params.eirp_dbm, params.height_m, random_point()));
            }
            break;
        }
        case SyntheticKind::standard: {
            std::vector<int> pool = params.channels;
            if (pool.empty())
                for (int ch = params.channel - 2; ch <= params.channel + 2; ++ch)
                    if (ch >= kMinTvChannel && ch <= kMaxTvChannel && ch != 37) pool.push_back(ch);
            for (int i = 0; i < params.tower_count; ++i) {
                const bool full = i % 4 == 0;
                const ServiceType service{Modulation::digital, full ? StationClass::full : StationClass::lptv};
                const double eirp = full ? 70.0 + 8.0 * u(rng) : 48.0 + 12.0 * u(rng);
                const double height = full ? 120.0 + 180.0 * u(rng) : 30.0 + 90.0 * u(rng);
                const int ch = pool[static_cast<std::size_t>(i) % pool.size()];
                s.registry.push_back(make_tower("st-" + std::to_string(i + 1), ch, service, tidy(eirp, 100.0),
                                                tidy(height, 10.0), random_point()));
            }
            break;
        }
    }
    return s;
}

Scenario standard_scenario(std::uint64_t seed) {
    SyntheticParams p;
    p.terrain = TerrainKind::hills;
    p.relief_m = 150.0;
    p.channel = 30;
    p.tower_count = 20;
    p.area_step_km = 3.0;
    return generate_synthetic(SyntheticKind::standard, p, seed);
}

namespace {

std::string toml_float(double v) {
    if (std::isnan(v)) return "nan";
    std::string s = text::format_double(v);
    if (s.find_first_of(".eni") == std::string::npos) s += ".0";
    return s;
}

std::string toml_string(const std::string& v) {
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string toml_point(const GeoPoint& p) { return "[" + toml_float(p.lat_deg) + ", " + toml_float(p.lon_deg) + "]"; }

double get_double(const toml::table& t, const char* key, double fallback) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<double>()) return *v;
    throw Error(std::string("scenario key '") + key + "' must be a number");
}

int get_int(const toml::table& t, const char* key, int fallback) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<int64_t>()) return static_cast<int>(*v);
    throw Error(std::string("scenario key '") + key + "' must be an integer");
}

bool get_bool(const toml::table& t, const char* key, bool fallback) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<bool>()) return *v;
    throw Error(std::string("scenario key '") + key + "' must be true or false");
}

std::optional<std::string> get_string(const toml::table& t, const char* key) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (auto v = n->value<std::string>()) return *v;
    throw Error(std::string("scenario key '") + key + "' must be a string");
}

GeoPoint get_point(const toml::table& t, const char* key) {
    const toml::array* a = t.get_as<toml::array>(key);
    if (!a || a->size() != 2) throw Error(std::string("scenario key '") + key + "' must be [lat, lon]");
    const auto lat = (*a)[0].value<double>();
    const auto lon = (*a)[1].value<double>();
    if (!lat || !lon) throw Error(std::string("scenario key '") + key + "' must hold two numbers");
    return {*lat, *lon};
}

const toml::table& section(const toml::table& root, const char* name) {
    static const toml::table empty;
    const toml::table* t = root.get_as<toml::table>(name);
    return t ? *t : empty;
}

}  // namespace

std::string format_scenario_toml(const Scenario& s) {
    const auto& c = s.config;
    std::ostringstream o;
    o << "seed = " << s.seed << "\n";
    o << "channel = " << s.channel << "\n\n";

    o << "[data]\n";
    o << "registry = \"registry.csv\"\n";
    o << "terrain = \"terrain.asc\"\n";
    if (s.population) o << "population = \"population.asc\"\n";
    if (!s.sites.empty()) o << "sites = \"sites.csv\"\n";
    if (!(s.tables == ProtectionTables::fcc())) o << "tables = \"tables.csv\"\n";
    o << "\n";

    o << "[area]\n";
    o << "south_west = " << toml_point(s.area.south_west) << "\n";
    o << "north_east = " << toml_point(s.area.north_east) << "\n";
    o << "step_km = " << toml_float(s.area.step_km) << "\n";
    if (s.area.rows) o << "rows = " << s.area.rows << "\n";
    if (s.area.cols) o << "cols = " << s.area.cols << "\n";
    if (!s.area.mask.empty()) {
        std::string m;
        for (bool b : s.area.mask) m += b ? '1' : '0';
        o << "mask = \"" << m << "\"\n";
    }
    o << "\n";

    const auto& d = s.device;
    o << "[device]\n";
    o << "class = " << toml_string(to_string(d.device_class)) << "\n";
    o << "eirp_dbm = " << toml_float(d.eirp_dbm) << "\n";
    o << "antenna_height_m = " << toml_float(d.antenna_height_m) << "\n";
    o << "antenna_gain_dbi = " << toml_float(d.antenna_gain_dbi) << "\n";
    o << "rx_gain_dbi = " << toml_float(d.rx_gain_dbi) << "\n";
    o << "hypothetical = " << (d.hypothetical ? "true" : "false") << "\n\n";

    o << "[propagation]\n";
    o << "tv_rx_height_m = " << toml_float(c.tv_rx_height_m) << "\n";
    o << "tv_rx_gain_dbi = " << toml_float(c.tv_rx_gain_dbi) << "\n";
    if (c.delta_h_override) o << "delta_h_override = " << toml_float(*c.delta_h_override) << "\n";
    o << "polarization = " << toml_string(c.polarization == Polarization::horizontal ? "horizontal" : "vertical") << "\n";
    o << "gamma_e = " << toml_float(c.gamma_e) << "\n";
    o << "environment = " << toml_string(to_string(c.environment)) << "\n";
    o << "secondary_rx_height_m = " << toml_float(c.secondary_rx_height_m) << "\n";
    o << "initial_delta_h_range_km = " << toml_float(c.initial_delta_h_range_km) << "\n";
    o << "p2s_max_distance_km = " << toml_float(c.p2s_max_distance_km) << "\n\n";

    o << "[capacity]\n";
    o << "noise_figure_db = " << toml_float(c.noise_figure_db) << "\n";
    o << "bandwidth_hz = " << toml_float(c.bandwidth_hz) << "\n";
    o << "r_cell_km = " << toml_float(c.r_cell_km) << "\n";
    o << "reuse_i = " << c.reuse_i << "\n";
    o << "reuse_j = " << c.reuse_j << "\n";
    o << "k_i = " << c.k_i << "\n";
    o << "tier_max = " << c.tier_max << "\n";
    o << "mac_efficiency = " << toml_float(c.mac_efficiency) << "\n";
    o << "alpha_users = " << toml_float(c.alpha_users) << "\n";
    o << "population_density_per_sq_mi = " << toml_float(c.population_density_per_sq_mi) << "\n";
    o << "alpha_ho = " << toml_float(c.alpha_ho) << "\n";
    o << "handover_s = " << toml_float(c.handover_s) << "\n";
    o << "speed_mps = " << toml_float(c.speed_mps) << "\n";
    o << "receiver_rings = " << c.receiver_rings << "\n";
    o << "receiver_angles = " << c.receiver_angles << "\n";
    o << "max_cells = " << c.max_cells << "\n\n";

    o << "[statistics]\n";
    o << "n_points = " << c.stats_points << "\n";
    o << "population_threshold = " << toml_float(c.population_threshold) << "\n";
    return o.str();
}

Scenario load_scenario(const std::filesystem::path& toml_path) {
    toml::table root;
    try {
        root = toml::parse_file(toml_path.string());
    } catch (const toml::parse_error& e) {
        const auto line = e.source().begin.line;
        throw ParseError(line, std::string(e.description()));
    }
    const auto base = toml_path.parent_path();
    Scenario s;
    const toml::node* seed = root.get("seed");
    if (seed) {
        const auto v = seed->value<int64_t>();
        if (!v || *v < 0) throw Error("scenario key 'seed' must be a non-negative integer");
        s.seed = static_cast<std::uint64_t>(*v);
    }
    s.channel = get_int(root, "channel", s.channel);

    const auto& data = section(root, "data");
    const auto registry = get_string(data, "registry");
    const auto terrain = get_string(data, "terrain");
    if (!registry || !terrain) throw Error("scenario [data] needs 'registry' and 'terrain'");
    s.registry = load_registry(base / *registry);
    s.terrain = load_terrain(base / *terrain);
    if (const auto p = get_string(data, "population")) s.population = load_population(base / *p);
    if (const auto p = get_string(data, "sites")) s.sites = load_sites(base / *p);
    if (const auto p = get_string(data, "tables")) s.tables = load_tables_overrides(base / *p);

    const auto& area = section(root, "area");
    s.area.south_west = get_point(area, "south_west");
    s.area.north_east = get_point(area, "north_east");
    s.area.step_km = get_double(area, "step_km", s.area.step_km);
    s.area.rows = static_cast<std::size_t>(std::max(0, get_int(area, "rows", 0)));
    s.area.cols = static_cast<std::size_t>(std::max(0, get_int(area, "cols", 0)));
    if (const auto m = get_string(area, "mask")) {
        for (char ch : *m) {
            if (ch != '0' && ch != '1') throw Error("scenario area mask may contain only 0 and 1");
            s.area.mask.push_back(ch == '1');
        }
    }

    const auto& dev = section(root, "device");
    auto& d = s.device;
    if (const auto v = get_string(dev, "class")) d.device_class = parse_device_class(*v);
    d.eirp_dbm = get_double(dev, "eirp_dbm", d.eirp_dbm);
    d.antenna_height_m = get_double(dev, "antenna_height_m", d.antenna_height_m);
    d.antenna_gain_dbi = get_double(dev, "antenna_gain_dbi", d.antenna_gain_dbi);
    d.rx_gain_dbi = get_double(dev, "rx_gain_dbi", d.rx_gain_dbi);
    d.hypothetical = get_bool(dev, "hypothetical", d.hypothetical);

    auto& c = s.config;
    const auto& prop = section(root, "propagation");
    c.tv_rx_height_m = get_double(prop, "tv_rx_height_m", c.tv_rx_height_m);
    c.tv_rx_gain_dbi = get_double(prop, "tv_rx_gain_dbi", c.tv_rx_gain_dbi);
    if (prop.get("delta_h_override")) c.delta_h_override = get_double(prop, "delta_h_override", 0.0);
    if (const auto v = get_string(prop, "polarization")) {
        const std::string p = text::to_lower(*v);
        if (p == "horizontal") c.polarization = Polarization::horizontal;
        else if (p == "vertical") c.polarization = Polarization::vertical;
        else throw Error("unknown polarization '" + *v + "'");
    }
    c.gamma_e = get_double(prop, "gamma_e", c.gamma_e);
    if (const auto v = get_string(prop, "environment")) c.environment = parse_environment(*v);
    c.secondary_rx_height_m = get_double(prop, "secondary_rx_height_m", c.secondary_rx_height_m);
    c.initial_delta_h_range_km = get_double(prop, "initial_delta_h_range_km", c.initial_delta_h_range_km);
    c.p2s_max_distance_km = get_double(prop, "p2s_max_distance_km", c.p2s_max_distance_km);

    const auto& cap = section(root, "capacity");
    c.noise_figure_db = get_double(cap, "noise_figure_db", c.noise_figure_db);
    c.bandwidth_hz = get_double(cap, "bandwidth_hz", c.bandwidth_hz);
    c.r_cell_km = get_double(cap, "r_cell_km", c.r_cell_km);
    c.reuse_i = get_int(cap, "reuse_i", c.reuse_i);
    c.reuse_j = get_int(cap, "reuse_j", c.reuse_j);
    c.k_i = get_int(cap, "k_i", c.k_i);
    c.tier_max = get_int(cap, "tier_max", c.tier_max);
    c.mac_efficiency = get_double(cap, "mac_efficiency", c.mac_efficiency);
    c.alpha_users = get_double(cap, "alpha_users", c.alpha_users);
    c.population_density_per_sq_mi = get_double(cap, "population_density_per_sq_mi", c.population_density_per_sq_mi);
    c.alpha_ho = get_double(cap, "alpha_ho", c.alpha_ho);
    c.handover_s = get_double(cap, "handover_s", c.handover_s);
    c.speed_mps = get_double(cap, "speed_mps", c.speed_mps);
    c.receiver_rings = get_int(cap, "receiver_rings", c.receiver_rings);
    c.receiver_angles = get_int(cap, "receiver_angles", c.receiver_angles);
    c.max_cells = get_int(cap, "max_cells", c.max_cells);

    const auto& stats = section(root, "statistics");
    c.stats_points = get_int(stats, "n_points", c.stats_points);
    c.population_threshold = get_double(stats, "population_threshold", c.population_threshold);
    return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_registry(dir / "registry.csv", s.registry);
    write_grid(dir / "terrain.asc", s.terrain);
    if (s.population) write_grid(dir / "population.asc", *s.population);
    if (!s.sites.empty()) text::write_file(dir / "sites.csv", format_sites(s.sites));
    if (!(s.tables == ProtectionTables::fcc())) text::write_file(dir / "tables.csv", format_tables(s.tables));
    text::write_file(dir / "scenario.toml", format_scenario_toml(s));
}

}  // namespace tvws

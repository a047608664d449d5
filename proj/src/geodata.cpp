#include "tvws/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tvws/error.hpp"
#include "tvws/text.hpp"

namespace tvws {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kIndexSlack = 1e-9;

// HAAT radial window, in 0.1 km steps.
constexpr int kHaatFirstStep = 32;
constexpr int kHaatLastStep = 161;

const char* kRegistryHeader = "id,channel,service,eirp_dbm,ground_height_m,lat_deg,lon_deg";

double normalize_lon(double lon) {
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0) lon += 360.0;
    return lon - 180.0;
}

}  // namespace

bool GeoPoint::valid() const {
    return std::isfinite(lat_deg) && std::isfinite(lon_deg) && lat_deg >= -90.0 && lat_deg <= 90.0 &&
           lon_deg >= -180.0 && lon_deg < 180.0;
}

double distance_km(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.lat_deg * kDegToRad;
    const double phi2 = b.lat_deg * kDegToRad;
    const double dphi = phi2 - phi1;
    const double dlam = (b.lon_deg - a.lon_deg) * kDegToRad;
    const double s1 = std::sin(dphi / 2);
    const double s2 = std::sin(dlam / 2);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double bearing_deg(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.lat_deg * kDegToRad;
    const double phi2 = b.lat_deg * kDegToRad;
    const double dlam = (b.lon_deg - a.lon_deg) * kDegToRad;
    const double y = std::sin(dlam) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlam);
    double az = std::atan2(y, x) * kRadToDeg;
    if (az < 0) az += 360.0;
    if (az >= 360.0) az -= 360.0;
    return az;
}

GeoPoint destination(const GeoPoint& start, double azimuth_deg, double dist_km) {
    const double delta = dist_km / kEarthRadiusKm;
    const double theta = azimuth_deg * kDegToRad;
    const double phi1 = start.lat_deg * kDegToRad;
    const double lam1 = start.lon_deg * kDegToRad;
    const double sin_phi2 = std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta);
    const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
    const double lam2 = lam1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                                          std::cos(delta) - std::sin(phi1) * sin_phi2);
    return {phi2 * kRadToDeg, normalize_lon(lam2 * kRadToDeg)};
}

GeoPoint Raster::sample_location(std::size_t row, std::size_t col) const {
    return {origin.lat_deg - static_cast<double>(row) * spacing_deg(),
            origin.lon_deg + static_cast<double>(col) * spacing_deg()};
}

double Raster::south() const {
    return origin.lat_deg - static_cast<double>(n_rows == 0 ? 0 : n_rows - 1) * spacing_deg();
}

double Raster::east() const {
    return origin.lon_deg + static_cast<double>(n_cols == 0 ? 0 : n_cols - 1) * spacing_deg();
}

bool Raster::contains(const GeoPoint& p) const {
    if (n_rows < 2 || n_cols < 2) return false;
    const double fr = (origin.lat_deg - p.lat_deg) / spacing_deg();
    const double fc = (p.lon_deg - origin.lon_deg) / spacing_deg();
    return fr >= -kIndexSlack && fc >= -kIndexSlack && fr <= static_cast<double>(n_rows - 1) + kIndexSlack &&
           fc <= static_cast<double>(n_cols - 1) + kIndexSlack;
}

std::vector<std::string> Raster::violations() const {
    std::vector<std::string> out;
    if (!(spacing_arcsec > 0) || !std::isfinite(spacing_arcsec)) out.push_back("grid spacing must be positive");
    if (n_rows < 2 || n_cols < 2) out.push_back("grid needs at least 2 rows and 2 columns");
    if (n_rows * n_cols != values.size()) out.push_back("grid value count does not match n_rows * n_cols");
    if (!origin.valid()) out.push_back("grid origin is not a valid coordinate");
    return out;
}

bool operator==(const Raster& a, const Raster& b) {
    if (!(a.origin == b.origin) || a.spacing_arcsec != b.spacing_arcsec || a.n_rows != b.n_rows ||
        a.n_cols != b.n_cols || a.values.size() != b.values.size())
        return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = a.values[i];
        const double y = b.values[i];
        if (std::isnan(x) != std::isnan(y)) return false;
        if (!std::isnan(x) && x != y) return false;
    }
    return true;
}

std::string to_string(ServiceType s) {
    std::string out = s.modulation == Modulation::digital ? "digital_" : "analog_";
    switch (s.station) {
        case StationClass::full: return out + "full";
        case StationClass::class_a: return out + "class_a";
        case StationClass::lptv: return out + "lptv";
        case StationClass::translator: return out + "translator";
    }
    return out;
}

ServiceType parse_service(const std::string& raw) {
    const std::string s = text::to_lower(text::trim(raw));
    const auto sep = s.find('_');
    if (sep == std::string::npos) throw InvariantViolation("service");
    const std::string mod = s.substr(0, sep);
    const std::string cls = s.substr(sep + 1);
    ServiceType out;
    if (mod == "digital")
        out.modulation = Modulation::digital;
    else if (mod == "analog")
        out.modulation = Modulation::analog;
    else
        throw InvariantViolation("service");
    if (cls == "full")
        out.station = StationClass::full;
    else if (cls == "class_a" || cls == "classa")
        out.station = StationClass::class_a;
    else if (cls == "lptv")
        out.station = StationClass::lptv;
    else if (cls == "translator")
        out.station = StationClass::translator;
    else
        throw InvariantViolation("service");
    return out;
}

void validate(const TransmitterRecord& tx, std::size_t row) {
    if (tx.id.empty()) throw InvariantViolation("id", row);
    if (tx.channel < 2 || tx.channel > 51) throw InvariantViolation("channel", row);
    if (!std::isfinite(tx.eirp_dbm)) throw InvariantViolation("eirp_dbm", row);
    if (!(tx.ground_height_m >= 0.5 && tx.ground_height_m <= 3000.0)) throw InvariantViolation("ground_height_m", row);
    if (!(tx.location.lat_deg >= -90.0 && tx.location.lat_deg <= 90.0)) throw InvariantViolation("lat_deg", row);
    if (!(tx.location.lon_deg >= -180.0 && tx.location.lon_deg < 180.0)) throw InvariantViolation("lon_deg", row);
}

double elevation_at(const Raster& grid, const GeoPoint& p) {
    if (!grid.contains(p)) {
        std::ostringstream msg;
        msg << "point (" << p.lat_deg << ", " << p.lon_deg << ") is outside the grid";
        throw OutOfBounds(msg.str());
    }
    const double fr = std::clamp((grid.origin.lat_deg - p.lat_deg) / grid.spacing_deg(), 0.0,
                                 static_cast<double>(grid.n_rows - 1));
    const double fc = std::clamp((p.lon_deg - grid.origin.lon_deg) / grid.spacing_deg(), 0.0,
                                 static_cast<double>(grid.n_cols - 1));
    const auto r0 = std::min(static_cast<std::size_t>(fr), grid.n_rows - 2);
    const auto c0 = std::min(static_cast<std::size_t>(fc), grid.n_cols - 2);
    const double tr = fr - static_cast<double>(r0);
    const double tc = fc - static_cast<double>(c0);

    const double z00 = grid.at(r0, c0);
    const double z01 = grid.at(r0, c0 + 1);
    const double z10 = grid.at(r0 + 1, c0);
    const double z11 = grid.at(r0 + 1, c0 + 1);
    if (std::isnan(z00) || std::isnan(z01) || std::isnan(z10) || std::isnan(z11)) {
        std::ostringstream msg;
        msg << "NODATA cell near (" << p.lat_deg << ", " << p.lon_deg << ")";
        throw NoData(msg.str());
    }
    const double top = z00 + (z01 - z00) * tc;
    const double bottom = z10 + (z11 - z10) * tc;
    return top + (bottom - top) * tr;
}

double haat(const TerrainGrid& grid, const TransmitterRecord& tx, double azimuth_deg) {
    const double site = elevation_at(grid, tx.location);
    double sum = 0.0;
    for (int k = kHaatFirstStep; k <= kHaatLastStep; ++k)
        sum += elevation_at(grid, destination(tx.location, azimuth_deg, 0.1 * k));
    const double mean = sum / static_cast<double>(kHaatLastStep - kHaatFirstStep + 1);
    return site + tx.ground_height_m - mean;
}

double percentile(std::vector<double> samples, double p) {
    if (samples.empty()) throw Error("percentile of an empty sample set");
    std::sort(samples.begin(), samples.end());
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, samples.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return samples[lo] + (samples[hi] - samples[lo]) * t;
}

double delta_h(const TerrainGrid& grid, const GeoPoint& center, double azimuth_deg, double range_km) {
    const long steps = std::max(1L, std::lround(range_km / 0.1));
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(steps) + 1);
    for (long k = 0; k <= steps; ++k)
        samples.push_back(elevation_at(grid, destination(center, azimuth_deg, 0.1 * static_cast<double>(k))));
    return percentile(samples, 0.9) - percentile(std::move(samples), 0.1);
}

double max_radial_km(const Raster& grid, const GeoPoint& center, double azimuth_deg, double limit_km) {
    const long max_steps = std::lround(limit_km / 0.1);
    long k = 0;
    for (; k < max_steps; ++k) {
        const GeoPoint p = destination(center, azimuth_deg, 0.1 * static_cast<double>(k + 1));
        if (!grid.contains(p)) break;
        try {
            (void)elevation_at(grid, p);
        } catch (const NoData&) {
            break;
        }
    }
    return 0.1 * static_cast<double>(k);
}

std::vector<TransmitterRecord> parse_registry(const std::string& contents) {
    const auto lines = text::split_lines(contents);
    if (lines.empty()) throw ParseError(1, "missing header");
    const auto header = text::split(lines[0], ',');
    const auto expected = text::split(kRegistryHeader, ',');
    if (header != expected) throw ParseError(1, std::string("header must be '") + kRegistryHeader + "'");

    std::vector<TransmitterRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != expected.size())
            throw ParseError(row, "expected " + std::to_string(expected.size()) + " fields, got " +
                                      std::to_string(f.size()));
        TransmitterRecord tx;
        tx.id = f[0];
        tx.channel = text::parse_int(f[1], row, "channel");
        try {
            tx.service = parse_service(f[2]);
        } catch (const InvariantViolation&) {
            throw InvariantViolation("service", row);
        }
        tx.eirp_dbm = text::parse_double(f[3], row, "eirp_dbm");
        tx.ground_height_m = text::parse_double(f[4], row, "ground_height_m");
        tx.location.lat_deg = text::parse_double(f[5], row, "lat_deg");
        tx.location.lon_deg = text::parse_double(f[6], row, "lon_deg");
        validate(tx, row);
        out.push_back(std::move(tx));
    }
    return out;
}

std::vector<TransmitterRecord> load_registry(const std::filesystem::path& path) {
    return parse_registry(text::read_file(path));
}

std::string format_registry(const std::vector<TransmitterRecord>& records) {
    std::string out = std::string(kRegistryHeader) + "\n";
    for (const auto& tx : records) {
        out += tx.id + "," + std::to_string(tx.channel) + "," + to_string(tx.service) + "," +
               text::format_double(tx.eirp_dbm) + "," + text::format_double(tx.ground_height_m) + "," +
               text::format_double(tx.location.lat_deg) + "," + text::format_double(tx.location.lon_deg) + "\n";
    }
    return out;
}

void write_registry(const std::filesystem::path& path, const std::vector<TransmitterRecord>& records) {
    text::write_file(path, format_registry(records));
}

Raster parse_grid(const std::string& contents) {
    std::istringstream in(contents);
    long ncols = -1;
    long nrows = -1;
    double xll = NAN, yll = NAN, cellsize = NAN;
    bool center_registered = false;
    double nodata = NAN;
    bool has_nodata = false;

    std::size_t row = 0;
    std::string line;
    std::streampos data_start = 0;
    for (;;) {
        data_start = in.tellg();
        if (!std::getline(in, line)) break;
        ++row;
        std::istringstream ls(line);
        std::string key;
        std::string value;
        ls >> key >> value;
        if (key.empty()) continue;
        const std::string k = text::to_lower(key);
        if (k == "ncols")
            ncols = text::parse_int(value, row, key);
        else if (k == "nrows")
            nrows = text::parse_int(value, row, key);
        else if (k == "xllcorner" || k == "xllcenter") {
            xll = text::parse_double(value, row, key);
            center_registered = k == "xllcenter";
        } else if (k == "yllcorner" || k == "yllcenter")
            yll = text::parse_double(value, row, key);
        else if (k == "cellsize")
            cellsize = text::parse_double(value, row, key);
        else if (k == "nodata_value") {
            nodata = text::parse_double(value, row, key);
            has_nodata = true;
        } else {
            --row;
            break;
        }
    }
    if (ncols < 2 || nrows < 2) throw ParseError(row, "ncols/nrows missing or < 2");
    if (!std::isfinite(xll) || !std::isfinite(yll)) throw ParseError(row, "xll/yll missing");
    if (!(cellsize > 0)) throw ParseError(row, "cellsize missing or not positive");

    Raster g;
    g.n_cols = static_cast<std::size_t>(ncols);
    g.n_rows = static_cast<std::size_t>(nrows);
    g.spacing_arcsec = cellsize * 3600.0;
    if (center_registered) {
        g.origin = {yll + static_cast<double>(nrows - 1) * cellsize, xll};
    } else {
        g.origin = {yll + (static_cast<double>(nrows) - 0.5) * cellsize, xll + 0.5 * cellsize};
    }
    g.values.reserve(g.n_rows * g.n_cols);

    in.clear();
    in.seekg(data_start);
    std::string tok;
    while (in >> tok) {
        const double v = text::parse_double(tok, row + 1 + g.values.size() / g.n_cols, "value");
        if (!std::isfinite(v)) throw ParseError(row + 1 + g.values.size() / g.n_cols, "non-finite grid value");
        g.values.push_back(has_nodata && v == nodata ? NAN : v);
    }
    if (g.values.size() != g.n_rows * g.n_cols)
        throw ParseError(row, "expected " + std::to_string(g.n_rows * g.n_cols) + " values, got " +
                                  std::to_string(g.values.size()));
    return g;
}

Raster load_grid(const std::filesystem::path& path) { return parse_grid(text::read_file(path)); }

TerrainGrid load_terrain(const std::filesystem::path& path) { return TerrainGrid{load_grid(path)}; }

PopulationGrid load_population(const std::filesystem::path& path) {
    PopulationGrid g{load_grid(path)};
    for (double v : g.values)
        if (!std::isnan(v) && v < 0) throw InvariantViolation("population");
    return g;
}

namespace {

// Finds a value x near `guess` for which reconstruct(x) == target exactly, so
// that a written header reproduces the in-memory geometry bit for bit.
template <class Fn>
double exact_preimage(double guess, double target, Fn reconstruct) {
    if (reconstruct(guess) == target) return guess;
    double up = guess;
    double down = guess;
    for (int i = 0; i < 256; ++i) {
        up = std::nextafter(up, INFINITY);
        if (reconstruct(up) == target) return up;
        down = std::nextafter(down, -INFINITY);
        if (reconstruct(down) == target) return down;
    }
    return guess;
}

}  // namespace

std::string format_grid(const Raster& grid) {
    const double cellsize =
        exact_preimage(grid.spacing_arcsec / 3600.0, grid.spacing_arcsec, [](double c) { return c * 3600.0; });
    const double span = static_cast<double>(grid.n_rows - 1);
    const double ylc = exact_preimage(grid.origin.lat_deg - span * cellsize, grid.origin.lat_deg,
                                      [&](double y) { return y + span * cellsize; });
    bool has_nodata = false;
    for (double v : grid.values) has_nodata = has_nodata || std::isnan(v);

    std::string out;
    out += "ncols " + std::to_string(grid.n_cols) + "\n";
    out += "nrows " + std::to_string(grid.n_rows) + "\n";
    out += "xllcenter " + text::format_double(grid.origin.lon_deg) + "\n";
    out += "yllcenter " + text::format_double(ylc) + "\n";
    out += "cellsize " + text::format_double(cellsize) + "\n";
    if (has_nodata) out += "NODATA_value -9999\n";
    for (std::size_t r = 0; r < grid.n_rows; ++r) {
        for (std::size_t c = 0; c < grid.n_cols; ++c) {
            const double v = grid.at(r, c);
            if (c) out += ' ';
            out += std::isnan(v) ? std::string("-9999") : text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_grid(const std::filesystem::path& path, const Raster& grid) { text::write_file(path, format_grid(grid)); }

}  // namespace tvws

#include "tvws/interference.hpp"

#include <algorithm>
#include <cmath>

#include "tvws/error.hpp"
#include "tvws/text.hpp"

namespace tvws {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return mw > 0.0 ? 10.0 * std::log10(mw) : -INFINITY; }

double EmissionMask::level_at(double offset_mhz) const {
    for (const auto& s : segments)
        if (offset_mhz >= s.start_mhz && offset_mhz < s.end_mhz) return s.level_at(offset_mhz);
    if (!segments.empty() && offset_mhz == segments.back().end_mhz) return segments.back().level_at(offset_mhz);
    throw DomainError("emission mask does not cover offset " + text::format_double(offset_mhz) + " MHz");
}

std::vector<std::string> EmissionMask::violations() const {
    std::vector<std::string> out;
    if (segments.empty()) {
        out.push_back("mask has no segments");
        return out;
    }
    if (segments.front().start_mhz != 0.0) out.push_back("first segment must start at 0 MHz");
    if (segments.back().end_mhz != INFINITY) out.push_back("last segment must extend to infinity");
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& s = segments[k];
        const std::string tag = "segment " + std::to_string(k + 1);
        if (!(s.end_mhz > s.start_mhz)) out.push_back(tag + " is empty or reversed");
        if (k > 0 && s.start_mhz != segments[k - 1].end_mhz) out.push_back(tag + " does not start where the previous ends");
        if (!std::isfinite(s.level_db) || !std::isfinite(s.slope_db_per_mhz)) out.push_back(tag + " is not finite");
        if (s.level_db > 0.0) out.push_back(tag + " rises above 0 dB");
        if (std::isfinite(s.end_mhz) ? s.level_at(s.end_mhz) > 0.0 : s.slope_db_per_mhz > 0.0)
            out.push_back(tag + " rises above 0 dB");
    }
    return out;
}

EmissionMask EmissionMask::full_service() {
    return {{{0.0, 0.5, -47.0, 0.0}, {0.5, 6.0, -47.0, -11.5}, {6.0, INFINITY, -110.0, 0.0}}};
}

EmissionMask EmissionMask::lptv() {
    return {{{0.0, 0.5, -47.0, 0.0}, {0.5, 3.0, -47.0, -11.5}, {3.0, INFINITY, -76.0, 0.0}}};
}

namespace {

const char* const kMaskHeader = "offset_start_mhz,offset_end_mhz,level_db_dtv,slope_db_per_mhz";

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive(f, a, fa, b, fb, m, fm, whole, std::max(std::abs(whole) * rel_tol, 1e-300), 40);
}

}  // namespace

double mask_power_integral(const EmissionMask& mask, double a_mhz, double b_mhz) {
    double total = 0.0;
    // Each segment is smooth on its own, so integrate piecewise.
    for (const auto& s : mask.segments) {
        const double lo = std::max(a_mhz, s.start_mhz);
        const double hi = std::min(b_mhz, s.end_mhz);
        if (!(hi > lo)) continue;
        total += integrate([&s](double f) { return std::pow(10.0, s.level_at(f) / 10.0); }, lo, hi, 1e-10);
    }
    return total;
}

double leakage_factor(const EmissionMask& mask, int channel_offset) {
    const int n = std::abs(channel_offset);
    if (n != 1 && n != 2) throw DomainError("leakage is defined for channel offsets of 1 or 2");
    return mask_power_integral(mask, (n - 1) * kChannelWidthMhz, n * kChannelWidthMhz);
}

EmissionMask parse_mask(const std::string& text_in) {
    const auto lines = text::split_lines(text_in);
    if (lines.empty() || text::trim(lines[0]) != kMaskHeader)
        throw ParseError(1, std::string("expected header '") + kMaskHeader + "'");
    EmissionMask m;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != 4) throw ParseError(row, "expected 4 fields, got " + std::to_string(f.size()));
        m.segments.push_back({text::parse_double(f[0], row, "offset_start_mhz"),
                              text::parse_double(f[1], row, "offset_end_mhz"),
                              text::parse_double(f[2], row, "level_db_dtv"),
                              text::parse_double(f[3], row, "slope_db_per_mhz")});
    }
    const auto bad = m.violations();
    if (!bad.empty()) throw InvariantViolation("segments: " + bad.front());
    return m;
}

EmissionMask load_mask(const std::filesystem::path& path) { return parse_mask(text::read_file(path)); }

std::string format_mask(const EmissionMask& m) {
    std::string out = std::string(kMaskHeader) + "\n";
    for (const auto& s : m.segments)
        out += text::format_double(s.start_mhz) + "," + text::format_double(s.end_mhz) + "," +
               text::format_double(s.level_db) + "," + text::format_double(s.slope_db_per_mhz) + "\n";
    return out;
}

const EmissionMask& mask_for(ServiceType s) {
    static const EmissionMask full = EmissionMask::full_service();
    static const EmissionMask low_power = EmissionMask::lptv();
    const bool high_power = s.station == StationClass::full || s.station == StationClass::class_a;
    return high_power ? full : low_power;
}

double p2s_weight(ServiceType s, int channel_offset) {
    const int n = std::abs(channel_offset);
    if (n == 0) return 1.0;
    if (n > 2) return 0.0;
    // [high power?][offset - 1]
    static const std::array<std::array<double, 2>, 2> cache = [] {
        std::array<std::array<double, 2>, 2> c{};
        for (int k = 1; k <= 2; ++k) {
            c[0][k - 1] = leakage_factor(EmissionMask::lptv(), k);
            c[1][k - 1] = leakage_factor(EmissionMask::full_service(), k);
        }
        return c;
    }();
    const bool high_power = s.station == StationClass::full || s.station == StationClass::class_a;
    return cache[high_power ? 1 : 0][n - 1];
}

TowerTerrain tower_terrain(const std::array<AzimuthContour, kAzimuths>& profile) {
    TowerTerrain t;
    for (int az = 0; az < kAzimuths; ++az) {
        t.haat_m[az] = profile[az].haat_m;
        t.delta_h_m[az] = profile[az].delta_h_m;
    }
    return t;
}

P2SField::P2SField(const std::vector<TransmitterRecord>& registry, const std::vector<TowerTerrain>& terrain,
                   int channel, const P2SOptions& options)
    : f_mhz_(channel_frequency_mhz(channel).mid_mhz), options_(options) {
    if (terrain.size() != registry.size()) throw Error("P2S field needs terrain parameters for every tower");
    for (std::size_t k = 0; k < registry.size(); ++k) {
        const auto& tx = registry[k];
        const double w = p2s_weight(tx.service, tx.channel - channel);
        if (w <= 0.0) continue;
        Source s{tx.location, tx.eirp_dbm, w, {}};
        for (int az = 0; az < kAzimuths; ++az) {
            ItmParams p;
            p.f_mhz = f_mhz_;
            p.h_g1_m = std::clamp(terrain[k].haat_m[az], 0.5, 3000.0);
            p.h_g2_m = options.rx_height_m;
            p.delta_h_m = terrain[k].delta_h_m[az];
            p.polarization = options.polarization;
            p.gamma_e = options.gamma_e;
            s.coefficients[az] = itm_coefficients(p);
        }
        sources_.push_back(std::move(s));
    }
}

double P2SField::interference_mw(const GeoPoint& q) const {
    double total = 0.0;
    for (const auto& s : sources_) {
        const double d_km = distance_km(s.location, q);
        if (d_km > options_.max_distance_km) continue;
        const double d_m = std::max(d_km, 1.0) * 1000.0;
        const int az = d_km > 0.0 ? static_cast<int>(std::lround(bearing_deg(s.location, q))) % kAzimuths : 0;
        const double loss = itm_aref(s.coefficients[az], d_m) + free_space_loss_db(f_mhz_, d_m);
        total += s.weight * dbm_to_mw(s.eirp_dbm - loss + options_.rx_gain_dbi);
    }
    return total;
}

double P2SField::interference_dbm(const GeoPoint& q) const { return mw_to_dbm(interference_mw(q)); }

double p2s_interference_dbm(const GeoPoint& q, int channel, const std::vector<TransmitterRecord>& registry,
                            const TerrainGrid& terrain, double rx_gain_dbi, double rx_height_m,
                            const ProtectionSettings& settings) {
    std::vector<TransmitterRecord> near;
    std::vector<TowerTerrain> params;
    for (const auto& tx : registry) {
        if (std::abs(tx.channel - channel) > 2 || distance_km(tx.location, q) > kP2SMaxDistanceKm) continue;
        near.push_back(tx);
        params.push_back(tower_terrain(contour_profile(tx, terrain, settings)));
    }
    P2SOptions o;
    o.rx_height_m = rx_height_m;
    o.rx_gain_dbi = rx_gain_dbi;
    o.polarization = settings.polarization;
    o.gamma_e = settings.gamma_e;
    return P2SField(near, params, channel, o).interference_dbm(q);
}

std::vector<std::string> ReusePlan::violations() const {
    std::vector<std::string> out;
    if (i < 0 || j < 0 || (i == 0 && j == 0)) out.push_back("reuse shifts i, j must be >= 0 and not both 0");
    if (!(r_cell_km > 0.0) || !std::isfinite(r_cell_km)) out.push_back("r_cell_km must be positive");
    if (k_i < 1) out.push_back("k_i must be >= 1");
    return out;
}

double reuse_distance_km(const ReusePlan& plan) { return std::sqrt(3.0 * plan.cluster_size()) * plan.r_cell_km; }

double tier_distance_km(const ReusePlan& plan, int i, int j) {
    return std::sqrt(static_cast<double>(i * i + i * j + j * j)) * reuse_distance_km(plan);
}

std::vector<std::pair<int, int>> tier_shifts(int max_shift) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i <= max_shift; ++i)
        for (int j = i; j <= max_shift; ++j)
            if (i != 0 || j != 0) out.emplace_back(i, j);
    return out;
}

double s2s_interference_dbm(const ReusePlan& plan, const DeviceParams& dev,
                            const std::function<double(double)>& loss_db_at_km,
                            const std::vector<std::pair<int, int>>& shifts) {
    double total = 0.0;
    for (const auto& [i, j] : shifts) {
        const double loss = loss_db_at_km(tier_distance_km(plan, i, j));
        total += plan.k_i * dbm_to_mw(dev.eirp_dbm + dev.antenna_gain_dbi - loss);
    }
    return mw_to_dbm(total);
}

}  // namespace tvws

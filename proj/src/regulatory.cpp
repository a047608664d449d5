#include "tvws/regulatory.hpp"

#include <algorithm>
#include <cmath>

#include "tvws/error.hpp"
#include "tvws/text.hpp"

namespace tvws {

std::string to_string(DeviceClass c) { return c == DeviceClass::fixed ? "fixed" : "portable"; }

DeviceClass parse_device_class(const std::string& s) {
    const std::string v = text::to_lower(text::trim(s));
    if (v == "fixed") return DeviceClass::fixed;
    if (v == "portable" || v == "personal") return DeviceClass::portable;
    throw Error("unknown device class '" + s + "'");
}

std::vector<std::string> violations(const DeviceParams& dev) {
    std::vector<std::string> out;
    // EIRP may be -inf (device off); everything else must be finite.
    if (std::isnan(dev.eirp_dbm) || dev.eirp_dbm == INFINITY || !std::isfinite(dev.antenna_height_m) ||
        !std::isfinite(dev.antenna_gain_dbi) || !std::isfinite(dev.rx_gain_dbi))
        out.push_back("device parameters must be finite");
    if (!(dev.antenna_height_m > 0.0)) out.push_back("antenna_height_m must be positive");
    if (dev.hypothetical) return out;
    const bool fixed = dev.device_class == DeviceClass::fixed;
    const double eirp_cap = max_eirp_dbm(dev.device_class, false);
    const double height_cap = fixed ? kFixedMaxHeightM : kPortableMaxHeightM;
    if (dev.eirp_dbm > eirp_cap)
        out.push_back("eirp_dbm " + text::format_double(dev.eirp_dbm) + " exceeds the " + to_string(dev.device_class) +
                      " limit of " + text::format_double(eirp_cap) + " dBm");
    if (dev.antenna_height_m > height_cap)
        out.push_back("antenna_height_m " + text::format_double(dev.antenna_height_m) + " exceeds the " +
                      to_string(dev.device_class) + " limit of " + text::format_double(height_cap) + " m");
    return out;
}

ChannelFrequency channel_frequency_mhz(int channel) {
    double low;
    if (channel >= 2 && channel <= 4)
        low = 54.0 + 6.0 * (channel - 2);
    else if (channel >= 5 && channel <= 6)
        low = 76.0 + 6.0 * (channel - 5);
    else if (channel >= 7 && channel <= 13)
        low = 174.0 + 6.0 * (channel - 7);
    else if (channel >= 14 && channel <= 69)
        low = 470.0 + 6.0 * (channel - 14);
    else
        throw DomainError("TV channel " + std::to_string(channel) + " outside 2..69");
    return {low, low + kChannelWidthMhz / 2.0, low + kChannelWidthMhz};
}

bool is_permissible(DeviceClass c, int channel) {
    if (channel == 37) return false;
    if (c == DeviceClass::portable) return channel >= 21 && channel <= kMaxTvChannel;
    return channel >= kMinTvChannel && channel <= kMaxTvChannel && channel != 3 && channel != 4;
}

std::vector<int> permissible_channels(DeviceClass c) {
    std::vector<int> out;
    for (int ch = kMinTvChannel; ch <= kMaxTvChannel; ++ch)
        if (is_permissible(c, ch)) out.push_back(ch);
    return out;
}

bool is_microphone_reserved(int channel) {
    return std::find(kMicrophoneReserved.begin(), kMicrophoneReserved.end(), channel) != kMicrophoneReserved.end();
}

double max_eirp_dbm(DeviceClass c, bool adjacent_to_primary) {
    if (c == DeviceClass::fixed) return 36.0;
    return adjacent_to_primary ? 16.0 : 20.0;
}

BandGroup band_group(int channel) {
    if (channel >= 2 && channel <= 6) return BandGroup::low_vhf;
    if (channel >= 7 && channel <= 13) return BandGroup::high_vhf;
    if (channel >= 14 && channel <= 69) return BandGroup::uhf;
    throw DomainError("TV channel " + std::to_string(channel) + " outside 2..69");
}

std::string to_string(BandGroup g) {
    switch (g) {
        case BandGroup::low_vhf: return "low_vhf";
        case BandGroup::high_vhf: return "high_vhf";
        case BandGroup::uhf: return "uhf";
    }
    return "uhf";
}

std::string to_string(Relationship r) {
    switch (r) {
        case Relationship::co: return "co";
        case Relationship::upper_adj: return "upper_adj";
        case Relationship::lower_adj: return "lower_adj";
    }
    return "co";
}

const ProtectionTables& ProtectionTables::fcc() {
    static const ProtectionTables t;
    return t;
}

double contour_threshold_dbu(Modulation m, int channel, const ProtectionTables& t) {
    if (channel < kMinTvChannel || channel > kMaxTvChannel)
        throw DomainError("TV channel " + std::to_string(channel) + " outside 2..51");
    return t.contour_dbu[static_cast<int>(m)][static_cast<int>(band_group(channel))];
}

double du_ratio_db(Modulation m, Relationship r, const ProtectionTables& t) {
    return t.du_ratio_db[static_cast<int>(m)][static_cast<int>(r)];
}

double analog_modified_field_dbu(int channel) {
    switch (band_group(channel)) {
        case BandGroup::low_vhf: return 47.0;
        case BandGroup::high_vhf: return 56.0;
        case BandGroup::uhf: return 64.0 - 20.0 * std::log10(615.0 / channel_frequency_mhz(channel).mid_mhz);
    }
    return 64.0;
}

double coverage_threshold_dbu(ServiceType s, int channel, const ProtectionTables& t) {
    if (s.modulation == Modulation::analog) {
        // UHF dipole correction applied on top of the (possibly overridden) table value.
        const double base = contour_threshold_dbu(Modulation::analog, channel, t);
        if (band_group(channel) != BandGroup::uhf) return base;
        return base + analog_modified_field_dbu(channel) - 64.0;
    }
    return contour_threshold_dbu(Modulation::digital, channel, t);
}

double dbu_to_dbm(double dbu, double f_mhz) { return dbu - 20.0 * std::log10(f_mhz) - 77.2; }

namespace {

const char* const kTablesHeader = "table,service,key,value_db";

int modulation_index(const std::string& s, std::size_t row) {
    if (s == "analog") return 0;
    if (s == "digital") return 1;
    throw ParseError(row, "unknown service '" + s + "'");
}

}  // namespace

ProtectionTables parse_tables_overrides(const std::string& text_in) {
    ProtectionTables t = ProtectionTables::fcc();
    const auto lines = text::split_lines(text_in);
    if (lines.empty() || text::trim(lines[0]) != kTablesHeader)
        throw ParseError(1, std::string("expected header '") + kTablesHeader + "'");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != 4) throw ParseError(row, "expected 4 fields, got " + std::to_string(f.size()));
        const int m = modulation_index(text::to_lower(f[1]), row);
        const std::string key = text::to_lower(f[2]);
        const double v = text::parse_double(f[3], row, "value_db");
        if (!std::isfinite(v)) throw InvariantViolation("value_db", row);
        if (f[0] == "contour") {
            if (key == "low_vhf") t.contour_dbu[m][0] = v;
            else if (key == "high_vhf") t.contour_dbu[m][1] = v;
            else if (key == "uhf") t.contour_dbu[m][2] = v;
            else throw ParseError(row, "unknown band group '" + key + "'");
        } else if (f[0] == "du_ratio") {
            if (key == "co") t.du_ratio_db[m][0] = v;
            else if (key == "upper_adj") t.du_ratio_db[m][1] = v;
            else if (key == "lower_adj") t.du_ratio_db[m][2] = v;
            else throw ParseError(row, "unknown channel separation '" + key + "'");
        } else {
            throw ParseError(row, "unknown table '" + f[0] + "'");
        }
    }
    return t;
}

ProtectionTables load_tables_overrides(const std::filesystem::path& path) {
    return parse_tables_overrides(text::read_file(path));
}

std::string format_tables(const ProtectionTables& t) {
    static const char* const mods[] = {"analog", "digital"};
    static const char* const groups[] = {"low_vhf", "high_vhf", "uhf"};
    static const char* const rels[] = {"co", "upper_adj", "lower_adj"};
    std::string out = std::string(kTablesHeader) + "\n";
    for (int m = 0; m < 2; ++m)
        for (int g = 0; g < 3; ++g)
            out += std::string("contour,") + mods[m] + "," + groups[g] + "," + text::format_double(t.contour_dbu[m][g]) + "\n";
    for (int m = 0; m < 2; ++m)
        for (int r = 0; r < 3; ++r)
            out += std::string("du_ratio,") + mods[m] + "," + rels[r] + "," + text::format_double(t.du_ratio_db[m][r]) + "\n";
    return out;
}

namespace {
const char* const kSitesHeader = "name,kind,channel,lat_deg,lon_deg";
}

std::vector<ExclusionSite> parse_sites(const std::string& text_in) {
    const auto lines = text::split_lines(text_in);
    if (lines.empty() || text::trim(lines[0]) != kSitesHeader)
        throw ParseError(1, std::string("expected header '") + kSitesHeader + "'");
    std::vector<ExclusionSite> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], ',');
        if (f.size() != 5) throw ParseError(row, "expected 5 fields, got " + std::to_string(f.size()));
        ExclusionSite s;
        s.name = f[0];
        const std::string kind = text::to_lower(f[1]);
        if (kind == "plmrs" || kind == "cmrs") {
            s.kind = SiteKind::plmrs;
            s.channel = text::parse_int(f[2], row, "channel");
            if (s.channel < kMinTvChannel || s.channel > kMaxTvChannel) throw InvariantViolation("channel", row);
        } else if (kind == "astronomy") {
            s.kind = SiteKind::radio_astronomy;
            s.channel = f[2].empty() ? 0 : text::parse_int(f[2], row, "channel");
        } else {
            throw ParseError(row, "unknown site kind '" + f[1] + "'");
        }
        s.location = {text::parse_double(f[3], row, "lat_deg"), text::parse_double(f[4], row, "lon_deg")};
        if (!s.location.valid()) throw InvariantViolation("location", row);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ExclusionSite> load_sites(const std::filesystem::path& path) { return parse_sites(text::read_file(path)); }

std::string format_sites(const std::vector<ExclusionSite>& sites) {
    std::string out = std::string(kSitesHeader) + "\n";
    for (const auto& s : sites) {
        out += s.name + "," + (s.kind == SiteKind::plmrs ? "plmrs" : "astronomy") + "," +
               (s.kind == SiteKind::plmrs ? std::to_string(s.channel) : "") + "," +
               text::format_double(s.location.lat_deg) + "," + text::format_double(s.location.lon_deg) + "\n";
    }
    return out;
}

std::string to_string(ExclusionRule r) {
    switch (r) {
        case ExclusionRule::plmrs_co_channel: return "plmrs_co_channel";
        case ExclusionRule::plmrs_adjacent: return "plmrs_adjacent";
        case ExclusionRule::radio_astronomy: return "radio_astronomy";
        case ExclusionRule::microphone_reserved: return "microphone_reserved";
    }
    return "";
}

std::vector<ExclusionRule> exclusion_checks(const GeoPoint& p, int channel, DeviceClass,
                                            const std::vector<ExclusionSite>& sites) {
    bool co = false;
    bool adj = false;
    bool astro = false;
    for (const auto& s : sites) {
        const double d = distance_km(p, s.location);
        if (s.kind == SiteKind::radio_astronomy) {
            astro = astro || d < kRadioAstronomyKm;
        } else if (s.channel == channel) {
            co = co || d < kPlmrsCoChannelKm;
        } else if (std::abs(s.channel - channel) == 1) {
            adj = adj || d < kPlmrsAdjacentKm;
        }
    }
    std::vector<ExclusionRule> out;
    if (co) out.push_back(ExclusionRule::plmrs_co_channel);
    if (adj) out.push_back(ExclusionRule::plmrs_adjacent);
    if (astro) out.push_back(ExclusionRule::radio_astronomy);
    if (is_microphone_reserved(channel)) out.push_back(ExclusionRule::microphone_reserved);
    return out;
}

}  // namespace tvws

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "tvws/geodata.hpp"

namespace tvws {

enum class DeviceClass { fixed, portable };

std::string to_string(DeviceClass c);
DeviceClass parse_device_class(const std::string& s);

/// Secondary device parameters (the set Γ that governs availability).
struct DeviceParams {
    DeviceClass device_class = DeviceClass::fixed;
    double eirp_dbm = 36.0;
    double antenna_height_m = 30.0;
    double antenna_gain_dbi = 0.0;  ///< G_sec
    double rx_gain_dbi = 0.0;       ///< G_r of the secondary receiver
    /// Allows values beyond the FCC caps for what-if sweeps.
    bool hypothetical = false;

    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

/// Messages for each FCC cap the device breaks; always empty for
/// hypothetical devices with finite values.
std::vector<std::string> violations(const DeviceParams& dev);

inline constexpr int kMinTvChannel = 2;
inline constexpr int kMaxTvChannel = 51;
inline constexpr double kChannelWidthMhz = 6.0;

struct ChannelFrequency {
    double low_mhz;
    double mid_mhz;
    double high_mhz;
};

/// US broadcast channel plan, channels 2..69.
ChannelFrequency channel_frequency_mhz(int channel);

std::vector<int> permissible_channels(DeviceClass c);
bool is_permissible(DeviceClass c, int channel);

/// First channel on each side of channel 37.
inline constexpr std::array<int, 2> kMicrophoneReserved = {36, 38};
bool is_microphone_reserved(int channel);

double max_eirp_dbm(DeviceClass c, bool adjacent_to_primary);
inline constexpr double kFixedMaxHeightM = 30.0;
inline constexpr double kPortableMaxHeightM = 3.0;

enum class BandGroup { low_vhf, high_vhf, uhf };
BandGroup band_group(int channel);
std::string to_string(BandGroup g);

/// Channel relationship seen from the secondary device: upper_adj means the
/// secondary sits one channel above the protected station.
enum class Relationship { co, upper_adj, lower_adj };
std::string to_string(Relationship r);

/// Protected-contour thresholds (dBu) and D/U ratios (dB), indexed by
/// [modulation][band group] and [modulation][relationship].
struct ProtectionTables {
    std::array<std::array<double, 3>, 2> contour_dbu{{{47.0, 56.0, 64.0}, {28.0, 36.0, 41.0}}};
    std::array<std::array<double, 3>, 2> du_ratio_db{{{34.0, -17.0, -14.0}, {23.0, -26.0, -28.0}}};

    static const ProtectionTables& fcc();
    friend bool operator==(const ProtectionTables&, const ProtectionTables&) = default;
};

double contour_threshold_dbu(Modulation m, int channel, const ProtectionTables& t = ProtectionTables::fcc());
double du_ratio_db(Modulation m, Relationship r, const ProtectionTables& t = ProtectionTables::fcc());

/// Defining field for analog coverage: 47 / 56 dBu on VHF, dipole-corrected
/// 64 - 20 log10(615 / f_mid) on UHF (channels 14..69).
double analog_modified_field_dbu(int channel);

/// Threshold used when drawing a station's protected contour: the modified
/// field for analog stations, the table value for digital ones.
double coverage_threshold_dbu(ServiceType s, int channel, const ProtectionTables& t = ProtectionTables::fcc());

/// Received power (dBm, 0 dBi antenna) for a field strength in dBu.
double dbu_to_dbm(double dbu, double f_mhz);

/// CSV `table,service,key,value_db`; table is contour (key low_vhf, high_vhf,
/// uhf) or du_ratio (key co, upper_adj, lower_adj). Missing rows keep the
/// FCC value.
ProtectionTables parse_tables_overrides(const std::string& text);
ProtectionTables load_tables_overrides(const std::filesystem::path& path);
std::string format_tables(const ProtectionTables& t);

enum class SiteKind { plmrs, radio_astronomy };

struct ExclusionSite {
    std::string name;
    SiteKind kind = SiteKind::plmrs;
    int channel = 0;  ///< PLMRS/CMRS channel; unused for astronomy sites
    GeoPoint location;

    friend bool operator==(const ExclusionSite&, const ExclusionSite&) = default;
};

/// CSV `name,kind,channel,lat_deg,lon_deg`, kind plmrs or astronomy.
std::vector<ExclusionSite> parse_sites(const std::string& text);
std::vector<ExclusionSite> load_sites(const std::filesystem::path& path);
std::string format_sites(const std::vector<ExclusionSite>& sites);

inline constexpr double kPlmrsCoChannelKm = 134.0;
inline constexpr double kPlmrsAdjacentKm = 131.0;
inline constexpr double kRadioAstronomyKm = 2.4;

enum class ExclusionRule { plmrs_co_channel, plmrs_adjacent, radio_astronomy, microphone_reserved };
std::string to_string(ExclusionRule r);

std::vector<ExclusionRule> exclusion_checks(const GeoPoint& p, int channel, DeviceClass c,
                                            const std::vector<ExclusionSite>& sites);

}  // namespace tvws

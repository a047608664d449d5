#pragma once

#include <functional>
#include <string>

namespace tvws {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

enum class Polarization { horizontal, vertical };

/// Inputs of the ITM area-mode reference attenuation.
struct ItmParams {
    double f_mhz = 600.0;
    double h_g1_m = 100.0;  ///< transmitter structural height (HAAT for broadcasters)
    double h_g2_m = 10.0;   ///< receiver structural height
    double delta_h_m = 90.0;
    Polarization polarization = Polarization::horizontal;
    double gamma_e = 1.0 / 8.493e6;  ///< effective earth curvature, 1/m
};

/// Throws DomainError when any field is outside the ITM validity ranges.
void check_domain(const ItmParams& p);

/// Piecewise-linear A_ref(d) in dB with d in meters:
///   d <= d_ls : max(0, a_el + k1 d + k2 ln(d / d_ls))
///   d <= d_x  : a_ed + m_d d
///   otherwise : a_es + m_s d
/// d_x is +infinity when the path has no usable troposcatter region.
struct ItmCoefficients {
    double a_el = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double a_ed = 0.0;
    double m_d = 0.0;
    double a_es = 0.0;
    double m_s = 0.0;
    double d_ls_m = 0.0;
    double d_x_m = 0.0;
    double d_l_m = 0.0;   ///< smooth-earth horizon distance shrunk by terrain roughness
    double x_ae_m = 0.0;  ///< diffraction distance scale
};

ItmCoefficients itm_coefficients(const ItmParams& p);

inline constexpr double kItmMinDistanceM = 1000.0;
inline constexpr double kItmMaxDistanceM = 2.0e6;

double itm_aref(const ItmCoefficients& c, double d_m);

double free_space_loss_db(double f_mhz, double d_m);

/// A_ref plus free-space loss.
double total_loss(const ItmCoefficients& c, const ItmParams& p, double d_m);

// Debug dump: d_ls_m,d_x_m,a_el,k1,a_ed,m_d,a_es,m_s
std::string coefficients_csv_header();
std::string coefficients_csv_row(const ItmCoefficients& c);

enum class HataEnvironment { urban, suburban, rural };

HataEnvironment parse_environment(const std::string& s);
std::string to_string(HataEnvironment e);

struct HataResult {
    double loss_db = 0.0;
    bool clamped = false;  ///< some input was moved into the model's domain
};

/// Okumura-Hata median loss (small/medium city mobile antenna correction)
/// with the suburban and open-area corrections. Out-of-domain inputs are
/// clamped to f 150..1500 MHz, h_b 30..200 m, h_m 1..10 m, d 1..20 km.
/// With extrapolate_distance the log-distance term is used as is for any d > 0.
HataResult hata_loss(double f_mhz, double h_b_m, double h_m_m, double d_km, HataEnvironment env,
                     bool extrapolate_distance = false);

/// Monotone loss-versus-distance curve over [d_min_m, d_max_m].
struct LossCurve {
    std::function<double(double)> loss_db;  ///< argument in meters
    double d_min_m = kItmMinDistanceM;
    double d_max_m = kItmMaxDistanceM;
};

LossCurve itm_curve(const ItmParams& p);
LossCurve free_space_curve(double f_mhz, double d_min_m = kItmMinDistanceM, double d_max_m = kItmMaxDistanceM);
LossCurve hata_curve(double f_mhz, double h_b_m, double h_m_m, HataEnvironment env);

enum class InverseStatus { inside, clamped_min, clamped_max };

struct InverseResult {
    double distance_m = 0.0;
    InverseStatus status = InverseStatus::inside;
};

/// Largest distance with loss(d) <= target_db, by bisection to 1 m. Returns
/// d_min (clamped_min) when even the closest distance exceeds the target and
/// d_max (clamped_max) when the target is never exceeded. Throws NonMonotone
/// if a coarse probe of the curve finds a decrease.
InverseResult inverse_loss(const LossCurve& curve, double target_db);

}  // namespace tvws

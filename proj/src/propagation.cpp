#include "tvws/propagation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "tvws/error.hpp"
#include "tvws/text.hpp"

namespace tvws {

namespace {

// Ground and atmosphere constants for the continental-temperate, average
// ground case: relative permittivity, conductivity (S/m), surface refractivity.
constexpr double kGroundPermittivity = 15.0;
constexpr double kGroundConductivity = 0.005;
constexpr double kSurfaceRefractivity = 301.0;

// Returned by the troposcatter routine when both antennas are too low for
// the scatter approximation to apply.
constexpr double kScatterInvalid = 1001.0;

double knife_edge_db(double v2) {
    if (v2 < 5.76) return 6.02 + 9.11 * std::sqrt(v2) - 1.27 * v2;
    return 12.953 + 4.343 * std::log(v2);
}

// Height-gain over a smooth spherical earth.
double height_gain_db(double x, double pk) {
    double fht;
    if (x < 200.0) {
        const double w = -std::log(pk);
        if (pk < 1e-5 || x * w * w * w > 5495.0) {
            fht = -117.0;
            if (x > 1.0) fht += 17.372 * std::log(x);
        } else {
            fht = 2.5e-5 * x * x / pk - 8.686 * w - 15.0;
        }
    } else {
        fht = 0.05751 * x - 4.343 * std::log(x);
        if (x < 2000.0) {
            const double w = 0.0134 * x * std::exp(-0.005 * x);
            fht = (1.0 - w) * fht + w * (17.372 * std::log(x) - 117.0);
        }
    }
    return fht;
}

// Frequency-gain function of the scatter region.
double frequency_gain_db(double r, double et) {
    static constexpr std::array<double, 5> a = {25.0, 80.0, 177.0, 395.0, 705.0};
    static constexpr std::array<double, 5> b = {24.0, 45.0, 68.0, 80.0, 105.0};
    int it = static_cast<int>(et);
    double q = 0.0;
    if (it <= 0) {
        it = 1;
    } else if (it >= 5) {
        it = 5;
    } else {
        q = et - it;
    }
    const double x = 1.0 / (r * r);
    double h = 4.343 * std::log((a[it - 1] * x + b[it - 1]) * x + 1.0);
    if (q != 0.0) h = (1.0 - q) * h + q * 4.343 * std::log((a[it] * x + b[it]) * x + 1.0);
    return h;
}

// Attenuation term of the scatter region as a function of theta * d.
double scatter_distance_db(double td) {
    static constexpr std::array<double, 3> a = {133.4, 104.6, 71.8};
    static constexpr std::array<double, 3> b = {0.332e-3, 0.212e-3, 0.157e-3};
    static constexpr std::array<double, 3> c = {-4.343, -1.086, 2.171};
    const int i = td <= 10e3 ? 0 : (td <= 70e3 ? 1 : 2);
    return a[i] + b[i] * td + c[i] * std::log(td);
}

// Quantities derived once per parameter set and shared by the diffraction,
// scatter and line-of-sight routines.
struct Path {
    double wn = 0.0;   // wavenumber, 1/m
    double gme = 0.0;  // effective earth curvature
    double dh = 0.0;
    std::array<double, 2> hg{};
    std::array<double, 2> he{};   // effective heights (random siting: structural)
    std::array<double, 2> dl{};   // horizon distances
    std::array<double, 2> the{};  // horizon elevation angles
    std::complex<double> zgnd;
    double dlsa = 0.0;  // smooth-earth line-of-sight distance
    double dla = 0.0;   // sum of horizon distances
    double tha = 0.0;   // total bending angle

    explicit Path(const ItmParams& p) {
        wn = p.f_mhz / 47.7;
        gme = p.gamma_e;
        dh = p.delta_h_m;
        hg = {p.h_g1_m, p.h_g2_m};
        he = hg;
        const std::complex<double> zq(kGroundPermittivity, 376.62 * kGroundConductivity / wn);
        zgnd = std::sqrt(zq - 1.0);
        if (p.polarization == Polarization::vertical) zgnd /= zq;
        for (int j = 0; j < 2; ++j) {
            const double q = std::sqrt(2.0 * he[j] / gme);
            dl[j] = q * std::exp(-0.07 * std::sqrt(dh / std::max(he[j], 5.0)));
            the[j] = (0.65 * dh * (q / dl[j] - 1.0) - 2.0 * he[j]) / q;
            dlsa += q;
        }
        dla = dl[0] + dl[1];
        tha = std::max(the[0] + the[1], -dla * gme);
    }
};

// Diffraction attenuation: weighted blend of double knife-edge and
// smooth-earth diffraction plus a clutter term.
class Diffraction {
public:
    explicit Diffraction(const Path& p) : p_(p) {
        const double q = p.hg[0] * p.hg[1];
        const double qk = p.he[0] * p.he[1] - q;
        wd1_ = std::sqrt(1.0 + qk / q);
        xd1_ = p.dla + p.tha / p.gme;
        double r = (1.0 - 0.8 * std::exp(-p.dlsa / 50e3)) * p.dh;
        r *= 0.78 * std::exp(-std::pow(r / 16.0, 0.25));
        afo_ = std::min(15.0, 2.171 * std::log(1.0 + 4.77e-4 * p.hg[0] * p.hg[1] * p.wn * r));
        qk_ = 1.0 / std::abs(p.zgnd);
        aht_ = 20.0;
        xht_ = 0.0;
        for (int j = 0; j < 2; ++j) {
            const double a = 0.5 * p.dl[j] * p.dl[j] / p.he[j];
            const double wa = std::cbrt(a * p.wn);
            const double pk = qk_ / wa;
            const double x = (1.607 - pk) * 151.0 * wa * p.dl[j] / a;
            xht_ += x;
            aht_ += height_gain_db(x, pk);
        }
    }

    double operator()(double d) const {
        const double th = p_.tha + d * p_.gme;
        const double ds = d - p_.dla;
        double q = 0.0795775 * p_.wn * ds * th * th;
        const double knife = knife_edge_db(q * p_.dl[0] / (ds + p_.dl[0])) + knife_edge_db(q * p_.dl[1] / (ds + p_.dl[1]));
        const double a = ds / th;
        const double wa = std::cbrt(a * p_.wn);
        const double pk = qk_ / wa;
        q = (1.607 - pk) * 151.0 * wa * th + xht_;
        const double rounded = 0.05751 * q - 4.343 * std::log(q) - aht_;
        q = (wd1_ + xd1_ / d) * std::min((1.0 - 0.8 * std::exp(-d / 50e3)) * p_.dh * p_.wn, 6283.2);
        const double wd = 25.1 / (25.1 + std::sqrt(q));
        return rounded * wd + (1.0 - wd) * knife + afo_;
    }

private:
    const Path& p_;
    double wd1_, xd1_, afo_, qk_, aht_, xht_;
};

// Troposcatter attenuation. The frequency-gain value found at one distance
// is reused at the next call when it is large, as the reference algorithm
// does; callers evaluate the far point first.
class Scatter {
public:
    explicit Scatter(const Path& p) : p_(p) {
        ad_ = p.dl[0] - p.dl[1];
        rr_ = p.he[1] / p.he[0];
        if (ad_ < 0.0) {
            ad_ = -ad_;
            rr_ = 1.0 / rr_;
        }
        etq_ = (5.67e-6 * kSurfaceRefractivity - 2.32e-3) * kSurfaceRefractivity + 0.031;
    }

    double operator()(double d) {
        double h0;
        if (h0s_ > 15.0) {
            h0 = h0s_;
        } else {
            const double th = p_.the[0] + p_.the[1] + d * p_.gme;
            double r2 = 2.0 * p_.wn * th;
            const double r1 = r2 * p_.he[0];
            r2 *= p_.he[1];
            if (r1 < 0.2 && r2 < 0.2) return kScatterInvalid;
            double ss = (d - ad_) / (d + ad_);
            double q = rr_ / ss;
            ss = std::max(0.1, ss);
            q = std::min(std::max(0.1, q), 10.0);
            const double z0 = (d - ad_) * (d + ad_) * th * 0.25 / d;
            const double et = (etq_ * std::exp(-std::pow(std::min(1.7, z0 / 8.0e3), 6.0)) + 1.0) * z0 / 1.7556e3;
            const double ett = std::max(et, 1.0);
            h0 = (frequency_gain_db(r1, ett) + frequency_gain_db(r2, ett)) * 0.5;
            h0 += std::min(h0, (1.38 - std::log(ett)) * std::log(ss) * std::log(q) * 0.49);
            h0 = std::max(h0, 0.0);
            if (et < 1.0) {
                const double g = (1.0 + 1.4142 / r1) * (1.0 + 1.4142 / r2);
                h0 = et * h0 + (1.0 - et) * 4.343 * std::log(g * g * (r1 + r2) / (r1 + r2 + 2.8284));
            }
            if (h0 > 15.0 && h0s_ >= 0.0) h0 = h0s_;
        }
        h0s_ = h0;
        const double th = p_.tha + d * p_.gme;
        return scatter_distance_db(th * d) + 4.343 * std::log(47.7 * p_.wn * std::pow(th, 4.0)) -
               0.1 * (kSurfaceRefractivity - 301.0) * std::exp(-th * d / 40e3) + h0;
    }

private:
    const Path& p_;
    double ad_, rr_, etq_;
    double h0s_ = -15.0;
};

// Line-of-sight attenuation: extended diffraction line blended with the
// two-ray (direct + ground reflected) loss; the blend weight depends on the
// roughness seen over the line-of-sight range.
double line_of_sight_db(const Path& p, double d, double aed, double emd) {
    const double wls = 0.021 / (0.021 + p.wn * p.dh / std::max(10e3, p.dlsa));
    double q = (1.0 - 0.8 * std::exp(-d / 50e3)) * p.dh;
    const double s = 0.78 * q * std::exp(-std::pow(q / 16.0, 0.25));
    q = p.he[0] + p.he[1];
    const double sps = q / std::sqrt(d * d + q * q);
    std::complex<double> r = (sps - p.zgnd) / (sps + p.zgnd) * std::exp(-std::min(10.0, p.wn * s * sps));
    q = std::norm(r);
    if (q < 0.25 || q < sps) r *= std::sqrt(sps / q);
    const double extended = emd * d + aed;
    q = p.wn * p.he[0] * p.he[1] * 2.0 / d;
    if (q > 1.57) q = 3.14 - 2.4649 / q;
    const double two_ray = -4.343 * std::log(std::norm(std::complex<double>(std::cos(q), -std::sin(q)) + r));
    return (two_ray - extended) * wls + extended;
}

}  // namespace

void check_domain(const ItmParams& p) {
    auto fail = [](const std::string& what) { throw DomainError("ITM parameter out of range: " + what); };
    if (!(p.f_mhz >= 20.0 && p.f_mhz <= 20000.0)) fail("f_mhz must be within 20..20000");
    if (!(p.h_g1_m >= 0.5 && p.h_g1_m <= 3000.0)) fail("h_g1_m must be within 0.5..3000");
    if (!(p.h_g2_m >= 0.5 && p.h_g2_m <= 3000.0)) fail("h_g2_m must be within 0.5..3000");
    if (!(p.delta_h_m >= 0.0) || !std::isfinite(p.delta_h_m)) fail("delta_h_m must be >= 0");
    if (!(p.gamma_e > 0.0) || !std::isfinite(p.gamma_e)) fail("gamma_e must be > 0");
}

ItmCoefficients itm_coefficients(const ItmParams& params) {
    check_domain(params);
    const Path p(params);
    ItmCoefficients c;
    c.d_ls_m = p.dlsa;
    c.d_l_m = p.dla;

    // Diffraction line through two points beyond the horizon.
    const Diffraction diffraction(p);
    c.x_ae_m = std::pow(p.wn * p.gme * p.gme, -1.0 / 3.0);
    const double d3 = std::max(p.dlsa, 1.3787 * c.x_ae_m + p.dla);
    const double d4 = d3 + 2.7574 * c.x_ae_m;
    const double a3 = diffraction(d3);
    const double a4 = diffraction(d4);
    c.m_d = (a4 - a3) / (d4 - d3);
    c.a_ed = a3 - c.m_d * d3;

    // Scatter line; the break d_x is where it overtakes the diffraction line.
    Scatter scatter(p);
    const double d5 = p.dla + 200e3;
    const double d6 = d5 + 200e3;
    const double a6 = scatter(d6);
    const double a5 = scatter(d5);
    const double ems = (a6 - a5) / 200e3;
    if (a5 < kScatterInvalid - 1.0 && a6 < kScatterInvalid - 1.0 && ems > 0.0 && ems < c.m_d) {
        c.m_s = ems;
        c.d_x_m = std::max({p.dlsa, p.dla + 0.3 * c.x_ae_m * std::log(47.7 * p.wn),
                            (a5 - c.a_ed - c.m_s * d5) / (c.m_d - c.m_s)});
        c.a_es = (c.m_d - c.m_s) * c.d_x_m + c.a_ed;
    } else {
        c.m_s = c.m_d;
        c.a_es = c.a_ed;
        c.d_x_m = INFINITY;
    }

    // Line-of-sight: straight line (k2 = 0) from a reference distance inside
    // the horizon to the diffraction line at d_ls.
    const double d2 = p.dlsa;
    const double a2 = c.a_ed + c.m_d * d2;
    double d_ref;
    if (c.a_ed >= 0.0) {
        d_ref = std::min(1.908 * p.wn * p.he[0] * p.he[1], 0.5 * p.dla);
    } else {
        d_ref = std::max(-c.a_ed / c.m_d, 0.25 * p.dla);
    }
    c.k2 = 0.0;
    c.k1 = 0.0;
    if (d_ref < d2) c.k1 = (a2 - line_of_sight_db(p, d_ref, c.a_ed, c.m_d)) / (d2 - d_ref);
    if (!(c.k1 > 0.0)) c.k1 = std::max(c.m_d, 0.0);
    c.a_el = a2 - c.k1 * d2;
    return c;
}

double itm_aref(const ItmCoefficients& c, double d_m) {
    if (!(d_m >= kItmMinDistanceM && d_m <= kItmMaxDistanceM))
        throw DomainError("ITM distance must be within 1 km..2000 km, got " + text::format_double(d_m) + " m");
    if (d_m <= c.d_ls_m) {
        double a = c.a_el + c.k1 * d_m;
        if (c.k2 != 0.0) a += c.k2 * std::log(d_m / c.d_ls_m);
        return std::max(0.0, a);
    }
    if (d_m <= c.d_x_m) return c.a_ed + c.m_d * d_m;
    return c.a_es + c.m_s * d_m;
}

double free_space_loss_db(double f_mhz, double d_m) {
    return 20.0 * std::log10(4.0 * std::numbers::pi * d_m * f_mhz * 1e6 / kSpeedOfLight);
}

double total_loss(const ItmCoefficients& c, const ItmParams& p, double d_m) {
    return itm_aref(c, d_m) + free_space_loss_db(p.f_mhz, d_m);
}

std::string coefficients_csv_header() { return "d_ls_m,d_x_m,a_el,k1,a_ed,m_d,a_es,m_s"; }

std::string coefficients_csv_row(const ItmCoefficients& c) {
    using text::format_double;
    return format_double(c.d_ls_m) + "," + format_double(c.d_x_m) + "," + format_double(c.a_el) + "," +
           format_double(c.k1) + "," + format_double(c.a_ed) + "," + format_double(c.m_d) + "," +
           format_double(c.a_es) + "," + format_double(c.m_s);
}

HataEnvironment parse_environment(const std::string& s) {
    const std::string v = text::to_lower(s);
    if (v == "urban") return HataEnvironment::urban;
    if (v == "suburban") return HataEnvironment::suburban;
    if (v == "rural" || v == "open") return HataEnvironment::rural;
    throw Error("unknown HATA environment '" + s + "'");
}

std::string to_string(HataEnvironment e) {
    switch (e) {
        case HataEnvironment::urban: return "urban";
        case HataEnvironment::suburban: return "suburban";
        case HataEnvironment::rural: return "rural";
    }
    return "urban";
}

HataResult hata_loss(double f_mhz, double h_b_m, double h_m_m, double d_km, HataEnvironment env,
                     bool extrapolate_distance) {
    HataResult out;
    auto clamp = [&](double v, double lo, double hi) {
        const double c = std::clamp(v, lo, hi);
        if (c != v) out.clamped = true;
        return c;
    };
    const double f = clamp(f_mhz, 150.0, 1500.0);
    const double hb = clamp(h_b_m, 30.0, 200.0);
    const double hm = clamp(h_m_m, 1.0, 10.0);
    if (extrapolate_distance && !(d_km > 0.0)) throw DomainError("hata distance must be positive");
    const double d = extrapolate_distance ? d_km : clamp(d_km, 1.0, 20.0);

    const double lf = std::log10(f);
    const double lhb = std::log10(hb);
    const double a_hm = (1.1 * lf - 0.7) * hm - (1.56 * lf - 0.8);
    double loss = 69.55 + 26.16 * lf - 13.82 * lhb - a_hm + (44.9 - 6.55 * lhb) * std::log10(d);
    if (env == HataEnvironment::suburban) {
        const double t = std::log10(f / 28.0);
        loss -= 2.0 * t * t + 5.4;
    } else if (env == HataEnvironment::rural) {
        loss -= 4.78 * lf * lf - 18.33 * lf + 40.94;
    }
    out.loss_db = loss;
    return out;
}

LossCurve itm_curve(const ItmParams& p) {
    const ItmCoefficients c = itm_coefficients(p);
    return {[c, p](double d) { return total_loss(c, p, d); }, kItmMinDistanceM, kItmMaxDistanceM};
}

LossCurve free_space_curve(double f_mhz, double d_min_m, double d_max_m) {
    return {[f_mhz](double d) { return free_space_loss_db(f_mhz, d); }, d_min_m, d_max_m};
}

LossCurve hata_curve(double f_mhz, double h_b_m, double h_m_m, HataEnvironment env) {
    return {[=](double d) { return hata_loss(f_mhz, h_b_m, h_m_m, d / 1000.0, env).loss_db; }, 1000.0, 20000.0};
}

InverseResult inverse_loss(const LossCurve& curve, double target_db) {
    constexpr int kProbe = 48;
    const double lo_d = curve.d_min_m;
    const double hi_d = curve.d_max_m;
    if (!(hi_d > lo_d)) throw DomainError("loss curve has an empty distance domain");

    const double lo_loss = curve.loss_db(lo_d);
    const double hi_loss = curve.loss_db(hi_d);
    double prev = lo_loss;
    const double ratio = std::log(hi_d / lo_d);
    for (int i = 1; i <= kProbe; ++i) {
        const double d = i == kProbe ? hi_d : lo_d * std::exp(ratio * i / kProbe);
        const double v = i == kProbe ? hi_loss : curve.loss_db(d);
        if (v < prev - 1e-9) {
            std::ostringstream msg;
            msg << "loss curve decreases near d = " << d << " m (" << prev << " -> " << v << " dB)";
            throw NonMonotone(msg.str());
        }
        prev = v;
    }

    if (lo_loss > target_db) return {lo_d, InverseStatus::clamped_min};
    if (hi_loss <= target_db) return {hi_d, InverseStatus::clamped_max};
    double lo = lo_d;
    double hi = hi_d;
    while (hi - lo > 1.0) {
        const double mid = 0.5 * (lo + hi);
        if (curve.loss_db(mid) <= target_db)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, InverseStatus::inside};
}

}  // namespace tvws

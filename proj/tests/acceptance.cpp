// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tvws/availability.hpp"
#include "tvws/capacity.hpp"
#include "tvws/interference.hpp"
#include "tvws/propagation.hpp"
#include "tvws/protection.hpp"
#include "tvws/regulatory.hpp"
#include "tvws/scenario.hpp"

using namespace tvws;

namespace {

// Collects failed checks with a short reason each.
struct Report {
    std::vector<std::string> failures;
    std::ostringstream note;

    void check(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

bool within_rel(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

std::string num(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

void leakage(Report& r) {
    const double fs1 = leakage_factor(EmissionMask::full_service(), 1);
    const double lp1 = leakage_factor(EmissionMask::lptv(), 1);
    const double lp2 = leakage_factor(EmissionMask::lptv(), 2);
    r.check(within_rel(fs1, 1.75e-5, 0.01), "full-service eta1 = " + num(fs1));
    r.check(within_rel(lp1, 1.76e-5, 0.01), "LPTV eta1 = " + num(lp1));
    r.check(within_rel(lp2, 1.51e-7, 0.02), "LPTV eta2 = " + num(lp2));
    r.note << "eta: " << num(fs1) << " " << num(lp1) << " " << num(lp2);
}

void itm_calibration(Report& r) {
    ItmParams p;
    p.f_mhz = 695.0;
    p.h_g1_m = 300.0;
    p.h_g2_m = 30.0;
    p.delta_h_m = 90.0;
    const auto c = itm_coefficients(p);
    const double published = 42.0 + 150000.0 * 6.56e-5;
    const double a150 = itm_aref(c, 150000.0);
    r.check(within_rel(c.d_ls_m, 94000.0, 0.15), "d_Ls = " + num(c.d_ls_m));
    r.check(within_rel(c.d_x_m, 136000.0, 0.15), "d_x = " + num(c.d_x_m));
    r.check(std::abs(a150 - published) <= 3.0, "A_ref(150 km) = " + num(a150));
    r.note << "d_Ls " << num(c.d_ls_m / 1000) << " km, d_x " << num(c.d_x_m / 1000) << " km, A_ref(150 km) "
           << num(a150) << " dB vs " << num(published);
}

void itm_structure(Report& r) {
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_jump = 0.0, worst_inverse = 0.0;
    int non_monotone = 0;
    for (int k = 0; k < 1000; ++k) {
        ItmParams p;
        p.f_mhz = 40.0 + 960.0 * u(rng);
        p.h_g1_m = 1.0 + 499.0 * u(rng);
        p.h_g2_m = 1.0 + 29.0 * u(rng);
        p.delta_h_m = 500.0 * u(rng);
        p.polarization = u(rng) < 0.5 ? Polarization::horizontal : Polarization::vertical;
        const auto c = itm_coefficients(p);
        for (double brk : {c.d_ls_m, c.d_x_m}) {
            if (!std::isfinite(brk) || brk <= 1000.0 * (1 + 1e-6) || brk >= 2e6 * (1 - 1e-6)) continue;
            worst_jump = std::max(worst_jump, std::abs(itm_aref(c, brk * (1 + 1e-9)) - itm_aref(c, brk * (1 - 1e-9))));
        }
        double prev = -INFINITY;
        for (double d = std::max(1000.0, c.d_ls_m); d <= 2e6; d *= 1.02) {
            const double a = itm_aref(c, d);
            if (a < prev - 1e-9) ++non_monotone;
            prev = a;
        }
        const auto curve = itm_curve(p);
        const double d0 = 1000.0 * std::pow(1999.0, u(rng));
        worst_inverse = std::max(worst_inverse, std::abs(inverse_loss(curve, curve.loss_db(d0)).distance_m - d0));
    }
    r.check(worst_jump <= 0.5, "break discontinuity " + num(worst_jump) + " dB");
    r.check(non_monotone == 0, std::to_string(non_monotone) + " monotonicity violations");
    r.check(worst_inverse <= 1.0, "inverse error " + num(worst_inverse) + " m");
    r.note << "max jump " << num(worst_jump) << " dB, max inverse error " << num(worst_inverse) << " m";
}

void availability_oracle(Report& r) {
    const GeoPoint c{40, -100};
    StudyArea area;
    const double dlat = 100.0 / 111.19492664455873;
    const double dlon = dlat / std::cos(oracle::rad(c.lat_deg));
    area.south_west = {c.lat_deg - dlat, c.lon_deg - dlon};
    area.north_east = {c.lat_deg + dlat, c.lon_deg + dlon};
    area.rows = area.cols = 500;

    ChannelContext ctx;
    ctx.channel = 30;
    ctx.permissible = true;
    const auto tx = fixture::tower("c", 30, c);
    ctx.co.push_back(make_region(tx, RadialContour::circle(c, 40.0), 0.0, Relationship::co));
    const double R = 6371.0;
    const double cap = 2 * oracle::kPi * R * R * (1 - std::cos(40.0 / R));
    const double box = R * R * oracle::rad(2 * dlon) * (std::sin(oracle::rad(c.lat_deg + dlat)) - std::sin(oracle::rad(c.lat_deg - dlat)));
    const double expect = 1 - cap / box;
    const auto one = availability_probability(ctx, area);
    ctx.co.push_back(ctx.co.front());
    const auto twice = availability_probability(ctx, area);
    r.check(within_rel(one.p, expect, 0.01), "p = " + num(one.p) + " vs " + num(expect));
    r.check(twice.p == one.p && twice.available == one.available, "duplicated region changed p");
    r.note << "p " << num(one.p) << " vs analytic " << num(expect);
}

std::vector<double> column(const std::vector<SweepRow>& rows, double SweepRow::*field) {
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(row.*field);
    return out;
}

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

bool non_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) return false;
    return true;
}

std::string span(const std::vector<double>& v) { return num(v.front()) + " -> " + num(v.back()); }

void monotonicity(Report& r) {
    const Scenario s = standard_scenario();
    const int ch = s.channel;
    const auto eirp = column(sweep(SweepParam::eirp, linspace(0, 36, 21), ch, s), &SweepRow::p);
    const auto height = column(sweep(SweepParam::antenna_height, linspace(1, 30, 8), ch, s), &SweepRow::p);
    const auto dh = column(sweep(SweepParam::delta_h, linspace(0, 500, 6), ch, s), &SweepRow::p);
    r.check(eirp.size() == 21 && non_increasing(eirp) && eirp.back() < eirp.front(), "p vs EIRP " + span(eirp));
    r.check(non_increasing(height), "p vs height " + span(height));
    r.check(non_decreasing(dh) && dh.back() > dh.front(), "p vs delta_h " + span(dh));
    r.note << "p: EIRP " << span(eirp) << ", height " << span(height) << ", delta_h " << span(dh);
}

void capacity_shapes(Report& r) {
    const Scenario s = standard_scenario();
    const int ch = s.channel;

    const auto cap = column(sweep(SweepParam::eirp, linspace(0, 60, 21), ch, s, true), &SweepRow::capacity_bps);
    const auto peak = static_cast<std::size_t>(std::max_element(cap.begin(), cap.end()) - cap.begin());
    const bool unimodal = peak > 0 && peak + 1 < cap.size() &&
                          non_decreasing({cap.begin(), cap.begin() + static_cast<long>(peak) + 1}) &&
                          non_increasing({cap.begin() + static_cast<long>(peak), cap.end()});
    r.check(unimodal, "capacity vs EIRP not unimodal, peak index " + std::to_string(peak));

    Scenario loud = s;
    loud.device.eirp_dbm = 40.0;
    loud.device.hypothetical = true;
    const auto hcap = column(sweep(SweepParam::antenna_height, linspace(30, 200, 8), ch, loud, true), &SweepRow::capacity_bps);
    r.check(non_increasing(hcap) && hcap.back() < hcap.front(), "capacity vs height " + span(hcap));

    const auto radii = linspace(0.01, 2.0, 12);
    const auto rows = sweep(SweepParam::r_cell, radii, ch, s);
    const auto cpa = column(rows, &SweepRow::cpa_bps_m2);
    r.check(non_increasing(cpa) && cpa.front() > cpa.back(), "CPA does not grow as r_cell shrinks");

    const CellModel cell = cell_model(s);
    const double r0_km = cell.handover.alpha_ho * cell.handover.tau_s * cell.handover.speed_mps / 1000.0;
    bool crossing = true;
    for (const auto& row : rows) {
        if (row.value <= r0_km) crossing = crossing && row.mobile_bps == 0.0;
        else crossing = crossing && (row.capacity_bps == 0.0 || row.mobile_bps > 0.0);
    }
    const auto at = sweep(SweepParam::r_cell, {r0_km, 2 * r0_km}, ch, s);
    crossing = crossing && at[0].mobile_bps == 0.0 && at[1].mobile_bps > 0.0;
    r.check(crossing, "mobile capacity does not vanish at r_cell = " + num(r0_km * 1000) + " m");
    r.note << "EIRP peak at " << num(linspace(0, 60, 21)[peak]) << " dBm, height capacity " << span(hcap)
           << ", mobile zero at " << num(r0_km * 1000) << " m";
}

void tables(Report& r) {
    const auto& t = ProtectionTables::fcc();
    const std::pair<int, double> analog[] = {{2, 47}, {6, 47}, {7, 56}, {13, 56}, {14, 64}, {51, 64}};
    const std::pair<int, double> digital[] = {{2, 28}, {6, 28}, {7, 36}, {13, 36}, {14, 41}, {51, 41}};
    for (auto [ch, v] : analog) r.check(contour_threshold_dbu(Modulation::analog, ch, t) == v, "analog contour ch " + std::to_string(ch));
    for (auto [ch, v] : digital) r.check(contour_threshold_dbu(Modulation::digital, ch, t) == v, "digital contour ch " + std::to_string(ch));
    r.check(du_ratio_db(Modulation::analog, Relationship::co, t) == 34, "analog co D/U");
    r.check(du_ratio_db(Modulation::analog, Relationship::upper_adj, t) == -17, "analog upper D/U");
    r.check(du_ratio_db(Modulation::analog, Relationship::lower_adj, t) == -14, "analog lower D/U");
    r.check(du_ratio_db(Modulation::digital, Relationship::co, t) == 23, "digital co D/U");
    r.check(du_ratio_db(Modulation::digital, Relationship::upper_adj, t) == -26, "digital upper D/U");
    r.check(du_ratio_db(Modulation::digital, Relationship::lower_adj, t) == -28, "digital lower D/U");
    for (int ch = 2; ch <= 6; ++ch) r.check(analog_modified_field_dbu(ch) == 47, "modified field ch " + std::to_string(ch));
    for (int ch = 7; ch <= 13; ++ch) r.check(analog_modified_field_dbu(ch) == 56, "modified field ch " + std::to_string(ch));
    const double f14 = analog_modified_field_dbu(14), f38 = analog_modified_field_dbu(38);
    r.check(std::abs(f14 - 61.72) <= 0.01, "ch14 field " + num(f14));
    r.check(std::abs(f38 - 64.03) <= 0.01, "ch38 field " + num(f38));
    r.note << "ch14 " << num(f14) << " dBu, ch38 " << num(f38) << " dBu";
}

void statistics_pipeline(Report& r) {
    {
        Scenario empty = standard_scenario();
        empty.registry.clear();
        const Engine e(empty);
        const auto st = statistics(e, empty.area, 100, 1000, 1);
        r.check(st.all.bands[kBands].fixed == 45.0, "empty-registry fixed " + num(st.all.bands[kBands].fixed));
        r.check(st.all.bands[kBands].portable == 28.0, "empty-registry portable " + num(st.all.bands[kBands].portable));
        r.check(st.all.bands[kBands].busy == 0.0, "empty-registry busy");
    }

    SyntheticParams p;
    p.terrain = TerrainKind::hills;
    p.tower_count = 50;
    p.area_step_km = 3.0;
    p.channels = {2, 4, 6, 8, 11, 13, 15, 21, 22, 27, 30, 31, 36, 38, 44, 51};
    const Scenario s = generate_synthetic(SyntheticKind::standard, p, 50);
    const Engine e(s);
    const auto points = sample_points(s.area, 150, 9);
    const auto counts = point_counts(e, points, 1000);
    const auto summary = summarize(counts);

    // Brute-force recount: every band channel at every point through the public rule check.
    const DeviceParams fixed = reference_device(DeviceClass::fixed);
    const DeviceParams portable = reference_device(DeviceClass::portable);
    const ProtectionSettings settings = protection_settings(s);
    std::vector<RadialContour> contours;
    for (const auto& tx : s.registry) contours.push_back(protected_contour(tx, s.terrain, settings));
    std::size_t mismatches = 0;
    std::array<double, kBands> mean_fixed{}, mean_portable{}, mean_busy{};
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (int b = 0; b < kBands; ++b) {
            int nf = 0, np = 0, na = 0, nb = 0;
            for (int ch : band_channels(static_cast<Band>(b))) {
                const bool f = channel_available(points[i], ch, fixed, e).available;
                const bool q = channel_available(points[i], ch, portable, e).available;
                nf += f;
                np += q;
                na += f || q;
                bool busy = false;
                for (std::size_t k = 0; k < s.registry.size(); ++k)
                    busy = busy || (s.registry[k].channel == ch && in_region(points[i], contours[k]));
                nb += busy;
            }
            if (nf != counts[i].fixed[b] || np != counts[i].portable[b] || na != counts[i].available[b] ||
                nb != counts[i].busy[b])
                ++mismatches;
            mean_fixed[b] += nf;
            mean_portable[b] += np;
            mean_busy[b] += nb;
        }
    }
    r.check(mismatches == 0, std::to_string(mismatches) + " point/band count mismatches");
    for (int b = 0; b < kBands; ++b) {
        const double n = static_cast<double>(points.size());
        r.check(std::abs(summary.bands[b].fixed - mean_fixed[b] / n) <= 1e-12, "band mean fixed");
        r.check(std::abs(summary.bands[b].portable - mean_portable[b] / n) <= 1e-12, "band mean portable");
        r.check(std::abs(summary.bands[b].busy - mean_busy[b] / n) <= 1e-12, "band mean busy");
    }
    for (const auto* cdf : {&summary.cdf_available, &summary.cdf_fixed, &summary.cdf_portable}) {
        bool ok = (*cdf)[kMaxChannelCount] == 1.0 && (*cdf)[0] >= 0.0;
        for (int x = 1; x <= kMaxChannelCount; ++x) ok = ok && (*cdf)[x] >= (*cdf)[x - 1];
        r.check(ok, "CDF axioms");
    }
    r.note << s.registry.size() << " towers, " << points.size() << " points, mean available "
           << num(summary.bands[kBands].available) << ", busy " << num(summary.bands[kBands].busy);
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<void(Report&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "mask leakage", 1.0, leakage},
        {2, "ITM calibration", 0.0, itm_calibration},
        {3, "ITM structure", 10.0, itm_structure},
        {4, "availability oracle", 5.0, availability_oracle},
        {5, "monotonicity", 120.0, monotonicity},
        {6, "capacity trade-offs", 300.0, capacity_shapes},
        {7, "regulatory tables", 0.0, tables},
        {8, "statistics pipeline", 0.0, statistics_pipeline},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Report r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(r);
        } catch (const std::exception& e) {
            r.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs > c.limit_s) r.failures.push_back("took " + num(secs) + " s, limit " + num(c.limit_s) + " s");
        const bool ok = r.failures.empty();
        failed += !ok;
        std::printf("criterion %d %-22s %s  %7.2f s  %s\n", c.id, c.name, ok ? "PASS" : "FAIL", secs,
                    ok ? r.note.str().c_str() : r.failures.front().c_str());
        for (std::size_t k = 1; k < r.failures.size(); ++k) std::printf("    also: %s\n", r.failures[k].c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}

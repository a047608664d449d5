#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "tvws/capacity.hpp"
#include "tvws/error.hpp"

using namespace tvws;

namespace {

const GeoPoint kC{40, -100};

Scenario one_tower(double half_km = 60.0, double step_km = 4.0) {
    SyntheticParams p;
    p.center = kC;
    p.area_half_km = half_km;
    p.margin_km = 60.0;
    p.area_step_km = step_km;
    p.eirp_dbm = 70.0;
    p.height_m = 150.0;
    return generate_synthetic(SyntheticKind::single_tower, p, 5);
}

double mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Hand link budget for a fixed device at its caps (36 dBm, 30 m, 0 dBi).
struct Budget {
    double signal_mw;
    double noise_mw;
    double s2s_mw;
};

Budget hand_budget(int channel, double r_km) {
    const double f = 470.0 + 6.0 * (channel - 14) + 3.0;
    Budget b;
    b.signal_mw = mw(36.0 - oracle::hata_urban_db(f, 30, 1.5, r_km));
    b.noise_mw = mw(-174.0 + 6.0 + 10 * std::log10(6e6));
    b.s2s_mw = 0;
    const double reuse = std::sqrt(3.0 * 3.0) * r_km;
    for (int i = 0; i <= 2; ++i)
        for (int j = i; j <= 2; ++j)
            if (i || j) b.s2s_mw += 6 * mw(36.0 - oracle::hata_urban_db(f, 30, 1.5, std::sqrt(i * i + i * j + j * j) * reuse));
    return b;
}

}  // namespace

TEST_CASE("sinr examples") {
    CHECK(sinr(2.5, 2.5, 0, 0) == 1.0);
    CHECK(sinr(4, 1, 0.5, 0.5) == 2.0);
    CHECK(sinr(2 * 3.0, 1.5, 0.25, 0) == doctest::Approx(2 * sinr(3.0, 1.5, 0.25, 0)));
}

TEST_CASE("sinr at a point equals the hand link budget") {
    const Scenario s = one_tower();
    const Engine e(s);
    const CellModel cell = cell_model(s);
    // Channel 32 sees the channel-30 tower only through the second adjacent mask.
    const GeoPoint q = destination(kC, 60, 25);
    const Budget b = hand_budget(32, 1.0);
    ItmParams p;
    p.f_mhz = 581.0;
    p.h_g1_m = 150.0;
    p.h_g2_m = 30.0;
    p.delta_h_m = 0.0;
    const double p2s = leakage_factor(EmissionMask::full_service(), 2) *
                       mw(70.0 - total_loss(itm_coefficients(p), p, distance_km(kC, q) * 1000));
    const double expect = b.signal_mw / (b.noise_mw + p2s + b.s2s_mw);
    CHECK(sinr_at(q, 32, cell, e) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(cell_signal_dbm(32, cell) == doctest::Approx(10 * std::log10(b.signal_mw)).epsilon(1e-12));
    CHECK(cell_s2s_dbm(32, cell) == doctest::Approx(10 * std::log10(b.s2s_mw)).epsilon(1e-12));
    CHECK_THROWS_AS(sinr_at(kC, 30, cell, e), ChannelUnavailable);
}

TEST_CASE("average capacity closed forms") {
    CHECK(average_capacity_bps(1, 1, 6e6, std::log2(2.0)) == 6e6);
    CHECK(average_capacity_bps(0, 3, 6e6, 5) == 0.0);
    CHECK(average_capacity_bps(0.5, 3, 12e6, 2) == doctest::Approx(2 * average_capacity_bps(0.5, 3, 6e6, 2)));
    double prev = INFINITY;
    for (int k : {1, 3, 4, 7, 9}) {
        const double c = average_capacity_bps(0.7, k, 6e6, 2);
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("constant field over a three-cell lattice") {
    Scenario s = one_tower();
    s.registry.clear();
    s.area.rows = 1;
    s.area.cols = 3;
    const Engine e(s);
    const CellModel cell = cell_model(s);
    const auto c = cell_capacity(30, cell, e, s.area);
    const Budget b = hand_budget(30, 1.0);
    const double expect = 1.0 / 3 * 6e6 * std::log2(1 + b.signal_mw / (b.noise_mw + b.s2s_mw));
    CHECK(c.p == 1.0);
    CHECK(c.cells == 3);
    CHECK(c.receivers == 3 * 64);
    CHECK(c.capacity_bps == doctest::Approx(expect).epsilon(1e-12));

    const auto none = cell_capacity(37, cell, e, s.area);
    CHECK(none.p == 0.0);
    CHECK(none.capacity_bps == 0.0);
}

TEST_CASE("per-channel capacities add up") {
    const Scenario s = one_tower(40.0, 8.0);
    const Engine e(s);
    const CellModel cell = cell_model(s);
    std::vector<CellCapacity> parts;
    double sum = 0;
    for (int ch : {21, 29, 30, 32, 44}) {
        parts.push_back(cell_capacity(ch, cell, e, s.area));
        CHECK(parts.back().capacity_bps >= 0.0);
        sum += parts.back().capacity_bps;
    }
    CHECK(total_capacity_bps(parts) == doctest::Approx(sum).epsilon(1e-15));
    CHECK(parts[2].capacity_bps < parts[0].capacity_bps);
}

TEST_CASE("per-user capacity and CPA") {
    CellModel cell;
    const auto base = per_user_capacity(1e7, cell);
    cell.population_density *= 2;
    const auto dense = per_user_capacity(1e7, cell);
    CHECK(dense.c_user_bps == doctest::Approx(base.c_user_bps / 2));

    CellModel small = cell;
    small.r_cell_km = 0.5;
    CHECK(per_user_capacity(1e7, small).cpa_bps_m2 == doctest::Approx(4 * per_user_capacity(1e7, cell).cpa_bps_m2));

    CellModel unit;
    unit.population_density = 2.589988110336 / (oracle::kPi * unit.r_cell_km * unit.r_cell_km);
    const auto u = per_user_capacity(5e6, unit);
    CHECK(u.users == doctest::Approx(1.0));
    CHECK(u.c_user_bps == doctest::Approx(5e6));

    unit.population_density /= 10;
    unit.mac_efficiency = 0.8;
    const auto d = per_user_capacity(5e6, unit);
    CHECK(d.degenerate);
    CHECK(d.c_user_bps == doctest::Approx(4e6));

    unit.population_density = 0;
    CHECK_THROWS_AS(per_user_capacity(5e6, unit), DomainError);
}

TEST_CASE("mobile capacity") {
    CellModel cell;
    cell.handover.speed_mps = 0;
    CHECK(mobile_capacity_bps(1e6, cell) == 1e6);

    cell = CellModel{};
    const double vt = cell.handover.alpha_ho * cell.handover.tau_s * cell.handover.speed_mps;
    cell.r_cell_km = vt / 1000;
    CHECK(mobile_capacity_bps(1e6, cell) == doctest::Approx(0.0).epsilon(1e-12));
    cell.r_cell_km = 0.5 * vt / 1000;
    CHECK(mobile_capacity_bps(1e6, cell) == 0.0);
    cell.r_cell_km = 0.0278;
    CHECK(mobile_capacity_bps(1e6, cell) == doctest::Approx(0.5e6).epsilon(0.01));

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 500; ++k) {
        CellModel m;
        m.r_cell_km = 0.005 + 5 * u(rng);
        m.handover.speed_mps = 40 * u(rng);
        m.handover.tau_s = 3 * u(rng);
        const double c = 1e6 * u(rng) + 1;
        const double mob = mobile_capacity_bps(c, m);
        CHECK(mob <= c);
        CHECK(mob >= 0);
        if (m.handover.speed_mps > 0 && m.handover.tau_s > 0) CHECK(mob < c);
    }
}

TEST_CASE("receiver offsets are an equal-area polar lattice") {
    const auto o = receiver_offsets(2.0, 8, 8);
    REQUIRE(o.size() == 64);
    double r2 = 0;
    for (const auto& [r, az] : o) {
        CHECK(r < 2.0);
        CHECK(az > 0);
        CHECK(az < 360);
        r2 += r * r;
    }
    // The mean of r^2 over a uniform disk is R^2 / 2.
    CHECK(r2 / 64 == doctest::Approx(2.0));
}

TEST_CASE("linspace and sweep plumbing") {
    const auto v = linspace(1, 2, 3);
    CHECK(v == std::vector<double>{1, 1.5, 2});
    CHECK(linspace(0, 0.3, 4).back() == 0.3);
    CHECK_THROWS_AS(linspace(2, 1, 3), DomainError);
    CHECK_THROWS_AS(linspace(1, 2, 1), DomainError);
    CHECK(parse_sweep_param("deltah") == SweepParam::delta_h);
    CHECK(parse_sweep_param("HEIGHT") == SweepParam::antenna_height);
    CHECK_THROWS_AS(parse_sweep_param("gain"), Error);

    const Scenario s = one_tower(30.0, 10.0);
    CHECK_THROWS_AS(sweep(SweepParam::eirp, {30, 40}, 30, s), DomainError);
    const auto a = sweep(SweepParam::eirp, {30, 40}, 30, s, true);
    const auto b = sweep(SweepParam::eirp, {30, 40}, 30, s, true);
    REQUIRE(a.size() == 2);
    CHECK(sweep_csv(a) == sweep_csv(b));
    CHECK(sweep_csv(a).rfind("param,value,channel,p,capacity_bps,cpa_bps_m2,mobile_bps\n", 0) == 0);
    CHECK(a[1].p <= a[0].p);
}

TEST_CASE("cell model validation") {
    CellModel m;
    CHECK(m.violations().empty());
    m.mac_efficiency = 1.5;
    m.r_cell_km = 0;
    CHECK(m.violations().size() == 2);
}

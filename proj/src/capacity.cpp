#include "tvws/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tvws/error.hpp"
#include "tvws/parallel.hpp"
#include "tvws/text.hpp"

namespace tvws {

namespace {

constexpr double kKm2PerSqMile = 2.589988110336;

// Pairwise summation keeps the mean independent of how work was split.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace

double LinkBudget::noise_mw() const { return dbm_to_mw(noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz)); }

std::vector<std::string> CellModel::violations() const {
    std::vector<std::string> out = reuse.violations();
    if (!(r_cell_km > 0.0) || !std::isfinite(r_cell_km)) out.push_back("r_cell_km must be positive");
    if (!(mac_efficiency > 0.0 && mac_efficiency <= 1.0)) out.push_back("mac_efficiency must be in (0, 1]");
    if (!(link.bandwidth_hz > 0.0)) out.push_back("bandwidth_hz must be positive");
    if (!(population_density > 0.0)) out.push_back("population density must be positive");
    if (!(alpha_users > 0.0)) out.push_back("alpha_users must be positive");
    if (handover.tau_s < 0.0 || handover.speed_mps < 0.0 || handover.alpha_ho < 0.0)
        out.push_back("handover parameters must be non-negative");
    if (receiver_rings < 1 || receiver_angles < 1) out.push_back("receiver lattice needs at least one point");
    if (max_cells < 1) out.push_back("max_cells must be >= 1");
    if (tier_max < 1) out.push_back("tier_max must be >= 1");
    return out;
}

CellModel cell_model(const Scenario& s) {
    const auto& c = s.config;
    CellModel m;
    m.r_cell_km = c.r_cell_km;
    m.reuse = {c.reuse_i, c.reuse_j, c.r_cell_km, c.k_i};
    m.dev = s.device;
    m.mac_efficiency = c.mac_efficiency;
    m.alpha_users = c.alpha_users;
    m.population_density = c.population_density_per_sq_mi;
    m.handover = {c.handover_s, c.speed_mps, c.alpha_ho};
    m.link = {-174.0 + c.noise_figure_db, c.bandwidth_hz};
    m.environment = c.environment;
    m.rx_height_m = c.secondary_rx_height_m;
    m.tier_max = c.tier_max;
    m.receiver_rings = c.receiver_rings;
    m.receiver_angles = c.receiver_angles;
    m.max_cells = c.max_cells;
    return m;
}

double sinr(double signal_mw, double noise_mw, double p2s_mw, double s2s_mw) {
    return signal_mw / (noise_mw + p2s_mw + s2s_mw);
}

namespace {

double signal_dbm(int channel, const CellModel& cell, double eirp_dbm) {
    const double f = channel_frequency_mhz(channel).mid_mhz;
    const double loss = hata_loss(f, cell.dev.antenna_height_m, cell.rx_height_m, cell.r_cell_km, cell.environment, true).loss_db;
    return eirp_dbm - loss + cell.dev.rx_gain_dbi;
}

double s2s_dbm(int channel, const CellModel& cell, double eirp_dbm) {
    const double f = channel_frequency_mhz(channel).mid_mhz;
    DeviceParams dev = cell.dev;
    dev.eirp_dbm = eirp_dbm;
    ReusePlan plan = cell.reuse;
    plan.r_cell_km = cell.r_cell_km;
    return s2s_interference_dbm(
        plan, dev,
        [&](double d_km) { return hata_loss(f, dev.antenna_height_m, cell.rx_height_m, d_km, cell.environment, true).loss_db; },
        tier_shifts(cell.tier_max));
}

double effective_eirp(const CellModel& cell, bool reduced) {
    return reduced ? std::min(cell.dev.eirp_dbm, max_eirp_dbm(cell.dev.device_class, true)) : cell.dev.eirp_dbm;
}

}  // namespace

double cell_signal_dbm(int channel, const CellModel& cell) { return signal_dbm(channel, cell, cell.dev.eirp_dbm); }

double cell_s2s_dbm(int channel, const CellModel& cell) { return s2s_dbm(channel, cell, cell.dev.eirp_dbm); }

double sinr_at(const GeoPoint& q, int channel, const CellModel& cell, const Engine& engine) {
    const Availability a = channel_available(q, channel, cell.dev, engine);
    if (!a.available) throw ChannelUnavailable(channel);
    const double eirp = effective_eirp(cell, a.reduced_power);
    const P2SField field = engine.p2s_field(channel, cell.dev);
    return sinr(dbm_to_mw(signal_dbm(channel, cell, eirp)), cell.link.noise_mw(), field.interference_mw(q),
                dbm_to_mw(s2s_dbm(channel, cell, eirp)));
}

double average_capacity_bps(double p, int cluster_size, double bandwidth_hz, double mean_log2) {
    return p / cluster_size * bandwidth_hz * mean_log2;
}

std::vector<std::pair<double, double>> receiver_offsets(double r_cell_km, int rings, int angles) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(rings) * angles);
    for (int k = 0; k < rings; ++k) {
        const double r = r_cell_km * std::sqrt((k + 0.5) / rings);
        for (int m = 0; m < angles; ++m) out.emplace_back(r, (m + 0.5) * 360.0 / angles);
    }
    return out;
}

CellCapacity cell_capacity(int channel, const CellModel& cell, const Engine& engine, const StudyArea& area) {
    const auto bad = cell.violations();
    if (!bad.empty()) throw DomainError(bad.front());
    CellCapacity out;
    out.channel = channel;
    const ChannelContext ctx = engine.channel_context(channel, cell.dev);
    const AvailabilityResult avail = availability_probability(ctx, area, engine.scenario().sites);
    out.p = avail.p;
    if (avail.n_available == 0) return out;

    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < avail.available.size(); ++i)
        if (avail.available[i]) open.push_back(i);
    const std::size_t m = std::min<std::size_t>(open.size(), static_cast<std::size_t>(cell.max_cells));
    std::vector<std::size_t> cells(m);
    for (std::size_t k = 0; k < m; ++k) cells[k] = open[k * open.size() / m];

    const P2SField field = engine.p2s_field(channel, cell.dev);
    const double noise = cell.link.noise_mw();
    const auto offsets = receiver_offsets(cell.r_cell_km, cell.receiver_rings, cell.receiver_angles);
    // Two budgets: full power and the reduced adjacent-channel cap.
    const std::array<double, 2> eirp = {effective_eirp(cell, false), effective_eirp(cell, true)};
    std::array<double, 2> signal{}, s2s{};
    for (int k = 0; k < 2; ++k) {
        signal[k] = dbm_to_mw(signal_dbm(channel, cell, eirp[k]));
        s2s[k] = dbm_to_mw(s2s_dbm(channel, cell, eirp[k]));
    }

    std::vector<double> values(m * offsets.size());
    parallel_for(m, [&](std::size_t c) {
        const std::size_t idx = cells[c];
        const int k = avail.reduced_power[idx] ? 1 : 0;
        const GeoPoint center = area.point(idx);
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            const GeoPoint q = destination(center, offsets[j].second, offsets[j].first);
            values[c * offsets.size() + j] = std::log2(1.0 + sinr(signal[k], noise, field.interference_mw(q), s2s[k]));
        }
    });
    out.cells = m;
    out.receivers = values.size();
    out.mean_log2 = pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
    out.capacity_bps = average_capacity_bps(out.p, cell.reuse.cluster_size(), cell.link.bandwidth_hz, out.mean_log2);
    return out;
}

double total_capacity_bps(const std::vector<CellCapacity>& per_channel) {
    double total = 0.0;
    for (const auto& c : per_channel) total += c.capacity_bps;
    return total;
}

UserCapacity per_user_capacity(double cell_capacity_bps, const CellModel& cell) {
    if (!(cell.population_density > 0.0)) throw DomainError("population density must be positive");
    UserCapacity u;
    u.users = cell.alpha_users * cell.population_density * std::numbers::pi * cell.r_cell_km * cell.r_cell_km /
              kKm2PerSqMile;
    u.degenerate = u.users < 1.0;
    u.c_user_bps = cell.mac_efficiency * cell_capacity_bps / (u.degenerate ? 1.0 : u.users);
    const double r_m = cell.r_cell_km * 1000.0;
    u.cpa_bps_m2 = cell_capacity_bps / (r_m * r_m);
    return u;
}

double mobile_capacity_bps(double c_user_bps, const CellModel& cell) {
    const double r_m = cell.r_cell_km * 1000.0;
    const auto& h = cell.handover;
    return std::max(0.0, 1.0 - h.alpha_ho * h.tau_s * h.speed_mps / r_m) * c_user_bps;
}

SweepParam parse_sweep_param(const std::string& s) {
    const std::string v = text::to_lower(s);
    if (v == "eirp") return SweepParam::eirp;
    if (v == "height" || v == "antenna_height") return SweepParam::antenna_height;
    if (v == "deltah" || v == "delta_h") return SweepParam::delta_h;
    if (v == "rcell" || v == "r_cell") return SweepParam::r_cell;
    throw Error("unknown sweep parameter '" + s + "'");
}

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::eirp: return "eirp";
        case SweepParam::antenna_height: return "height";
        case SweepParam::delta_h: return "deltah";
        case SweepParam::r_cell: return "rcell";
    }
    return "";
}

std::vector<double> linspace(double from, double to, int steps) {
    if (steps < 2 || !(from < to)) throw DomainError("sweep range needs from < to and at least 2 steps");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) out[i] = i == steps - 1 ? to : from + (to - from) * i / (steps - 1);
    return out;
}

std::vector<SweepRow> sweep(SweepParam param, const std::vector<double>& values, int channel, const Scenario& scenario,
                            bool allow_hypothetical) {
    std::vector<SweepRow> rows;
    std::optional<Engine> base;
    if (param != SweepParam::delta_h) base.emplace(scenario);
    for (const double v : values) {
        CellModel cell = cell_model(scenario);
        Scenario local;
        std::optional<Engine> own;
        switch (param) {
            case SweepParam::eirp: cell.dev.eirp_dbm = v; break;
            case SweepParam::antenna_height: cell.dev.antenna_height_m = v; break;
            case SweepParam::r_cell:
                cell.r_cell_km = v;
                cell.reuse.r_cell_km = v;
                break;
            case SweepParam::delta_h:
                if (!(v >= 0.0)) throw DomainError("delta_h must be >= 0");
                local = scenario;
                local.config.delta_h_override = v;
                own.emplace(local);
                break;
        }
        if (allow_hypothetical) cell.dev.hypothetical = true;
        const auto bad = violations(cell.dev);
        if (!bad.empty()) throw DomainError(bad.front() + " (pass the hypothetical flag to allow it)");
        const Engine& engine = own ? *own : *base;
        const CellCapacity cap = cell_capacity(channel, cell, engine, scenario.area);
        const UserCapacity user = per_user_capacity(cap.capacity_bps, cell);
        rows.push_back({param, v, channel, cap.p, cap.capacity_bps, user.cpa_bps_m2,
                        mobile_capacity_bps(user.c_user_bps, cell)});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "param,value,channel,p,capacity_bps,cpa_bps_m2,mobile_bps\n";
    for (const auto& r : rows)
        out += to_string(r.param) + "," + text::format_double(r.value) + "," + std::to_string(r.channel) + "," +
               text::format_double(r.p) + "," + text::format_double(r.capacity_bps) + "," +
               text::format_double(r.cpa_bps_m2) + "," + text::format_double(r.mobile_bps) + "\n";
    return out;
}

}  // namespace tvws

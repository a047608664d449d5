#pragma once

#include <string>
#include <vector>

#include "tvws/availability.hpp"
#include "tvws/engine.hpp"
#include "tvws/interference.hpp"

namespace tvws {

struct LinkBudget {
    double noise_density_dbm_hz = -174.0 + 6.0;
    double bandwidth_hz = 6.0e6;

    double noise_mw() const;
};

struct HandoverParams {
    double tau_s = 1.0;
    double speed_mps = 50.0 / 3.6;
    double alpha_ho = 1.0;
};

struct CellModel {
    double r_cell_km = 1.0;
    ReusePlan reuse;
    DeviceParams dev;
    double mac_efficiency = 1.0;
    double alpha_users = 1.0;
    double population_density = 1000.0;  ///< persons per square mile
    HandoverParams handover;
    LinkBudget link;
    HataEnvironment environment = HataEnvironment::urban;
    double rx_height_m = 1.5;  ///< secondary receiver (mobile) height
    int tier_max = 2;
    int receiver_rings = 8;
    int receiver_angles = 8;
    int max_cells = 256;

    std::vector<std::string> violations() const;
};

CellModel cell_model(const Scenario& s);

/// Linear SINR from a received signal and interference powers in mW.
double sinr(double signal_mw, double noise_mw, double p2s_mw, double s2s_mw);

/// Desired signal at the cell edge: EIRP - HATA(r_cell) + G_r.
double cell_signal_dbm(int channel, const CellModel& cell);
/// Secondary-to-secondary interference for the cell's reuse plan.
double cell_s2s_dbm(int channel, const CellModel& cell);

/// SINR at q; throws ChannelUnavailable when the channel is not available there.
double sinr_at(const GeoPoint& q, int channel, const CellModel& cell, const Engine& engine);

/// (p / K) W0 mean_log2, where mean_log2 is the average of log2(1 + SINR).
double average_capacity_bps(double p, int cluster_size, double bandwidth_hz, double mean_log2);

/// Receiver offsets (km, azimuth deg) of the polar quadrature inside a cell:
/// equal-area rings times equally spaced angles.
std::vector<std::pair<double, double>> receiver_offsets(double r_cell_km, int rings, int angles);

struct CellCapacity {
    int channel = 0;
    double p = 0.0;
    double mean_log2 = 0.0;
    double capacity_bps = 0.0;
    std::size_t cells = 0;
    std::size_t receivers = 0;
};

CellCapacity cell_capacity(int channel, const CellModel& cell, const Engine& engine, const StudyArea& area);

/// Sum of per-channel capacities over the given channel set.
double total_capacity_bps(const std::vector<CellCapacity>& per_channel);

struct UserCapacity {
    double users = 0.0;        ///< U_R
    double c_user_bps = 0.0;
    double cpa_bps_m2 = 0.0;
    bool degenerate = false;   ///< U_R < 1: the cell holds less than one user
};

UserCapacity per_user_capacity(double cell_capacity_bps, const CellModel& cell);
double mobile_capacity_bps(double c_user_bps, const CellModel& cell);

enum class SweepParam { eirp, antenna_height, delta_h, r_cell };
SweepParam parse_sweep_param(const std::string& s);
std::string to_string(SweepParam p);

struct SweepRow {
    SweepParam param = SweepParam::eirp;
    double value = 0.0;
    int channel = 0;
    double p = 0.0;
    double capacity_bps = 0.0;
    double cpa_bps_m2 = 0.0;
    double mobile_bps = 0.0;
};

std::vector<double> linspace(double from, double to, int steps);

/// Re-runs regions, availability, interference and capacity at each value.
/// Values beyond the device caps need allow_hypothetical.
std::vector<SweepRow> sweep(SweepParam param, const std::vector<double>& values, int channel, const Scenario& scenario,
                            bool allow_hypothetical = false);

/// CSV `param,value,channel,p,capacity_bps,cpa_bps_m2,mobile_bps`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace tvws

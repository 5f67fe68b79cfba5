#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flownet/routing.hpp"

namespace flownet {

struct IntegrationConfig {
    double t0 = 0;
    double t_max = 200;
    double dt_init = 1e-3;
    double tol_step = 1e-8;            // local error target (mixed abs/rel)
    double tol_buffer_trigger = 1e-6;  // buffer gap at which the hit event fires
    double tol_buffer_report = 1e-4;   // gap within which a link counts as hit at the end
    double tol_equilibrium = 0;        // 0 -> 1e-8 * max(1, total inflow)
    int equilibrium_window = 10;       // consecutive quiet steps required
    bool detect_equilibrium = true;
    double sample_stride = 0.25;       // <= 0 records every accepted step
    long max_steps = 20'000'000;
};

struct Termination {
    bool reached_t_max = false;
    bool equilibrium_detected = false;
    bool buffer_hit = false;
    std::string detail;
};

struct Trajectory {
    std::shared_ptr<const AugmentedNetwork> net;
    std::vector<double> times;
    std::vector<std::vector<double>> rho;      // per sample
    std::vector<std::vector<double>> inflow;   // f^in_e per sample
    std::vector<std::vector<double>> outflow;  // f^out_e per sample
    Termination termination;
    std::vector<int> hit_links;        // links within the report band at the end
    double kappa_lo = 0, kappa_hi = 0; // bracket of the first buffer hit

    double t_end() const { return times.empty() ? 0.0 : times.back(); }
    const std::vector<double>& final_rho() const { return rho.back(); }
};

struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// one policy sweep: per-link arrival and departure rates
void flow_balance(const RoutingPolicy& policy, std::span<const double> rho,
                  std::span<double> inflow, std::span<double> outflow);

// rho' = f^in - f^out
void rhs(const RoutingPolicy& policy, std::span<const double> rho, std::span<double> drho);

// Adaptive Dormand-Prince integration of the density dynamics from rho0.
// Stops at t_max, at a detected equilibrium, or at the first buffer hit
// (bracketed to [kappa_lo, kappa_hi]). States stay inside the box
// [0, B]; irrecoverable excursions raise NumericalAbort.
Trajectory integrate(const RoutingPolicy& policy, std::vector<double> rho0,
                     const IntegrationConfig& cfg = {});

// trailing-window average arrival rate at the destinations
double throughput(const Trajectory& traj, double window_fraction = 0.25);

}  // namespace flownet

#include "flownet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flownet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void flow_balance(const RoutingPolicy& policy, std::span<const double> rho,
                  std::span<double> inflow, std::span<double> outflow) {
    const AugmentedNetwork& net = policy.net();
    int m = net.real_link_count();
    std::fill(inflow.begin(), inflow.end(), 0.0);
    std::fill(outflow.begin(), outflow.end(), 0.0);
    double parts[24];
    std::vector<double> parts_dyn;
    for (int ae = 0; ae < net.routed_link_count(); ++ae) {
        const auto& down = net.downstream(ae);
        double* f = parts;
        if (down.size() > std::size(parts)) {
            parts_dyn.resize(down.size());
            f = parts_dyn.data();
        }
        policy.evaluate(ae, rho, {f, down.size()});
        double total = 0;
        for (size_t i = 0; i < down.size(); ++i) {
            total += f[i];
            if (down[i] < m) inflow[down[i]] += f[i];
        }
        if (ae < m) outflow[ae] = total;
    }
}

void rhs(const RoutingPolicy& policy, std::span<const double> rho, std::span<double> drho) {
    int m = policy.net().real_link_count();
    std::vector<double> in(m), out(m);
    flow_balance(policy, rho, in, out);
    for (int e = 0; e < m; ++e) drho[e] = in[e] - out[e];
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

struct Stepper {
    const RoutingPolicy& policy;
    const AugmentedNetwork& net;
    int m;
    std::vector<double> bmax;  // buffer per link (inf when unbounded)
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, in, out;

    explicit Stepper(const RoutingPolicy& p)
        : policy(p), net(p.net()), m(net.real_link_count()) {
        bmax.resize(m);
        for (int e = 0; e < m; ++e) bmax[e] = net.base().buffer(e).value_or(kInf);
        for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &in, &out}) v->assign(m, 0.0);
    }

    // stage states may poke slightly out of the box; evaluate a clamped copy
    void deriv(const std::vector<double>& y, std::vector<double>& dy) {
        for (int e = 0; e < m; ++e) {
            double v = std::clamp(y[e], 0.0, bmax[e] * (1.0 - 1e-12));
            ytmp[e] = v;
        }
        flow_balance(policy, ytmp, in, out);
        for (int e = 0; e < m; ++e) dy[e] = in[e] - out[e];
    }

    // one RK step of size h from y (k1 = f(y) already filled); writes ynew
    // and k7 = f(ynew); returns the mixed abs/rel error estimate
    double step(const std::vector<double>& y, double h, std::vector<double>& ynew,
                std::vector<double>& stage) {
        auto axpy = [&](auto&&... terms) {
            for (int e = 0; e < m; ++e) {
                double acc = y[e];
                ((acc += h * terms.first * terms.second[e]), ...);
                stage[e] = acc;
            }
        };
        using P = std::pair<double, const std::vector<double>&>;
        axpy(P{A21, k1});
        deriv(stage, k2);
        axpy(P{A31, k1}, P{A32, k2});
        deriv(stage, k3);
        axpy(P{A41, k1}, P{A42, k2}, P{A43, k3});
        deriv(stage, k4);
        axpy(P{A51, k1}, P{A52, k2}, P{A53, k3}, P{A54, k4});
        deriv(stage, k5);
        axpy(P{A61, k1}, P{A62, k2}, P{A63, k3}, P{A64, k4}, P{A65, k5});
        deriv(stage, k6);
        for (int e = 0; e < m; ++e)
            ynew[e] = y[e] + h * (B1 * k1[e] + B3 * k3[e] + B4 * k4[e] + B5 * k5[e] + B6 * k6[e]);
        deriv(ynew, k7);
        double err = 0;
        for (int e = 0; e < m; ++e) {
            double ee = h * (E1 * k1[e] + E3 * k3[e] + E4 * k4[e] + E5 * k5[e] + E6 * k6[e] +
                             E7 * k7[e]);
            double scale = 1.0 + std::max(std::abs(y[e]), std::abs(ynew[e]));
            err = std::max(err, std::abs(ee) / scale);
        }
        return err;
    }
};

}  // namespace

Trajectory integrate(const RoutingPolicy& policy, std::vector<double> rho0,
                     const IntegrationConfig& cfg) {
    const AugmentedNetwork& net = policy.net();
    const Network& base = net.base();
    int m = net.real_link_count();
    if (static_cast<int>(rho0.size()) != m)
        throw std::invalid_argument("integrate: initial state has wrong length");
    for (int e = 0; e < m; ++e)
        if (rho0[e] < 0 || ExtReal::finite(rho0[e]) > base.buffer(e))
            throw std::invalid_argument("integrate: initial state outside [0, B] on link '" +
                                        base.link_id(e) + "'");

    Trajectory traj;
    traj.net = policy.net_ptr();

    Stepper st(policy);
    double tol_eq = cfg.tol_equilibrium > 0
                        ? cfg.tol_equilibrium
                        : 1e-8 * std::max(1.0, base.total_inflow());

    auto gap_hit = [&](const std::vector<double>& y, double band) {
        for (int e = 0; e < m; ++e)
            if (std::isfinite(st.bmax[e]) &&
                st.bmax[e] - y[e] <= band * std::max(1.0, st.bmax[e]))
                return true;
        return false;
    };

    std::vector<double> y = std::move(rho0), ynew(m), stage(m), ycand(m);
    double t = cfg.t0;
    double h = cfg.dt_init;

    auto record = [&](double tt, const std::vector<double>& yy) {
        traj.times.push_back(tt);
        traj.rho.push_back(yy);
        std::vector<double> fin(m), fout(m);
        flow_balance(policy, yy, fin, fout);
        traj.inflow.push_back(std::move(fin));
        traj.outflow.push_back(std::move(fout));
    };

    record(t, y);
    if (gap_hit(y, cfg.tol_buffer_trigger)) {
        traj.termination.buffer_hit = true;
        traj.termination.detail = "initial state already at a buffer";
        traj.kappa_lo = traj.kappa_hi = t;
    }

    st.deriv(y, st.k1);
    double err_prev = 1.0;
    int quiet = 0;
    double next_sample = cfg.sample_stride > 0 ? t + cfg.sample_stride : t;

    long steps = 0;
    double t_done = cfg.t_max - 1e-12 * std::max(1.0, std::abs(cfg.t_max));
    while (!traj.termination.buffer_hit && t < t_done) {
        if (++steps > cfg.max_steps) throw NumericalAbort("integrate: step budget exhausted");

        bool clipped = false;
        double h_try = std::min(h, cfg.t_max - t);
        if (cfg.sample_stride > 0 && t + h_try > next_sample) {
            h_try = next_sample - t;
            clipped = true;
        }
        if (h_try < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalAbort("integrate: step size underflow at t=" + std::to_string(t));

        double err = st.step(y, h_try, ynew, stage) / cfg.tol_step;

        // keep the state inside the box: small negative overshoot is snapped,
        // anything larger (or a buffer overshoot) retries with a shorter step
        bool reject = err > 1.0;
        if (!reject) {
            for (int e = 0; e < m; ++e) {
                if (ynew[e] < 0) {
                    if (ynew[e] < -1e-12) { reject = true; break; }
                    ynew[e] = 0;
                }
                if (ynew[e] > st.bmax[e]) { reject = true; break; }
            }
        }
        if (reject) {
            double fac = err > 1.0
                             ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0)
                             : 0.5;
            h = h_try * fac;
            if (h < 1e-14 * std::max(1.0, std::abs(t)))
                throw NumericalAbort("integrate: cannot satisfy tolerances at t=" +
                                     std::to_string(t));
            continue;
        }

        bool hit = gap_hit(ynew, cfg.tol_buffer_trigger);
        if (hit) {
            // bisect the sub-step from y for the first entry into the band
            double lo = 0, hi = h_try;
            // step() leaves k1 = f(y) alone, so repeated sub-steps from y are cheap
            for (int it = 0; it < 80 && hi - lo > 1e-9 * std::max(1.0, t + hi); ++it) {
                double mid = 0.5 * (lo + hi);
                st.step(y, mid, ycand, stage);
                if (gap_hit(ycand, cfg.tol_buffer_trigger)) {
                    hi = mid;
                    ynew = ycand;
                } else {
                    lo = mid;
                }
            }
            t += hi;
            for (int e = 0; e < m; ++e)
                y[e] = std::clamp(ynew[e], 0.0, st.bmax[e] * (1.0 - 1e-12));
            traj.kappa_lo = t - (hi - lo);
            traj.kappa_hi = t;
            traj.termination.buffer_hit = true;
            traj.termination.detail = "buffer hit";
            break;
        }

        // accept
        t += h_try;
        std::swap(y, ynew);
        std::swap(st.k1, st.k7);  // first-same-as-last

        double dmax = 0;
        for (int e = 0; e < m; ++e) dmax = std::max(dmax, std::abs(st.k1[e]));
        quiet = dmax < tol_eq ? quiet + 1 : 0;

        if (cfg.sample_stride > 0) {
            if (clipped || t >= next_sample - 1e-12 * std::max(1.0, t)) {
                record(t, y);
                while (next_sample <= t + 1e-12 * std::max(1.0, t))
                    next_sample += cfg.sample_stride;
            }
        } else {
            record(t, y);
        }

        if (cfg.detect_equilibrium && quiet >= cfg.equilibrium_window) {
            traj.termination.equilibrium_detected = true;
            traj.termination.detail = "equilibrium";
            break;
        }

        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                     std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
        h = h_try * std::clamp(fac, 0.2, 5.0);
        err_prev = std::max(err, 1e-10);
    }

    if (!traj.termination.buffer_hit && !traj.termination.equilibrium_detected) {
        traj.termination.reached_t_max = true;
        traj.termination.detail = "reached t_max";
    }
    if (traj.times.back() != t) record(t, y);

    if (traj.termination.buffer_hit) {
        const auto& yf = traj.rho.back();
        for (int e = 0; e < m; ++e)
            if (std::isfinite(st.bmax[e]) &&
                st.bmax[e] - yf[e] <= cfg.tol_buffer_report * std::max(1.0, st.bmax[e]))
                traj.hit_links.push_back(e);
    }
    return traj;
}

double throughput(const Trajectory& traj, double window_fraction) {
    const AugmentedNetwork& net = *traj.net;
    int m = net.real_link_count();
    std::vector<int> sinks;
    for (int e = 0; e < m; ++e)
        if (net.is_destination_link(net.downstream(e)[0])) sinks.push_back(e);

    auto arrivals = [&](size_t i) {
        double s = 0;
        for (int e : sinks) s += traj.outflow[i][e];
        return s;
    };

    double t1 = traj.times.back();
    double t0 = traj.times.front() + (1.0 - window_fraction) * (t1 - traj.times.front());
    double area = 0, span = 0;
    for (size_t i = 1; i < traj.times.size(); ++i) {
        double a = std::max(traj.times[i - 1], t0), b = traj.times[i];
        if (b <= a) continue;
        // linear in-between is as good as the sampling allows
        double fa = arrivals(i - 1), fb = arrivals(i);
        if (a > traj.times[i - 1]) {
            double w = (a - traj.times[i - 1]) / (traj.times[i] - traj.times[i - 1]);
            fa = fa + w * (fb - fa);
        }
        area += 0.5 * (fa + fb) * (b - a);
        span += b - a;
    }
    return span > 0 ? area / span : arrivals(traj.times.size() - 1);
}

}  // namespace flownet

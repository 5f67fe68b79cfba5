#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flownet/cuts.hpp"
#include "flownet/dynamics.hpp"

namespace flownet {

struct ClassificationThresholds {
    double tol_buffer = 1e-4;      // relative gap that counts as saturated
    double drift_tol_scale = 1e-4; // |slope| below scale*max(1, inflow) is flat
    double slope_tol_scale = 1e-4; // growth needs slope above the same scaling
    double r2_linear = 0.999;      // fit quality required for a linear tag
    double diverge_min = 0.25;     // net trailing rise that still counts as unbounded
    double window_fraction = 0.5;  // trailing window used for fits
};

enum class DensityTag { saturated, grows_linearly, grows_unbounded, bounded, inconclusive };
std::string to_string(DensityTag t);

struct LinkClassification {
    DensityTag tag = DensityTag::inconclusive;
    double slope = 0;  // trailing-window least squares
    double r2 = 0;
    double final_value = 0;
};

std::vector<LinkClassification> classify_links(const Trajectory& traj,
                                               const ClassificationThresholds& th = {});

// least-squares slope and R^2 of one link's density over the trailing window
std::pair<double, double> growth_rate(const Trajectory& traj, int link,
                                      double window_fraction = 0.5);

// Where congestion pools: links tagged saturated/growing, the nodes whose
// every outgoing link is such, and how that compares with the worst cuts of
// the network itself.
struct OverloadCut {
    std::vector<int> blocked_links;
    std::vector<int> spillback_nodes;
    std::vector<int> expected_nodes;  // union of the maximum-violation cuts
    bool matches_expected = false;
    double s_inflow = 0;    // exact cut arithmetic on the spillback set:
    double s_capacity = 0;  // a genuine overload set must satisfy inflow >= capacity
};
OverloadCut overload_cut(const Trajectory& traj, const ClassificationThresholds& th = {});

// least-squares slope (and relative deviation from `expected`, when nonzero)
// of the summed density over all out-links of `nodes`, trailing window
struct CutGrowth {
    double slope = 0;
    double r2 = 0;
    double relative_error = 0;  // |slope - expected| / max(|expected|, 1e-12)
    std::vector<int> out_links;
};
CutGrowth cut_growth(const Trajectory& traj, const std::vector<int>& nodes,
                     double expected = 0, double window_fraction = 0.5);

// Worst-case time to the first buffer hit from rho0: over every cut taking in
// more than it can pass, total boundary headroom divided by the excess; +inf
// when no such cut has finite headroom.
double kappa_upper_bound(const Network& net, const std::vector<double>& rho0);

enum class Verdict {
    transfers_all,           // every cut has spare capacity
    overloaded,              // some cut takes in more than it can pass
    critical_stable,         // tight cut, but strict monotonicity still carries it
    critical_indeterminate,  // tight cut and only weak monotonicity
    preconditions_failed,    // policy axioms or monotonicity do not hold
};
std::string to_string(Verdict v);

struct ThroughputReport {
    Verdict verdict = Verdict::preconditions_failed;
    double best_violation = 0;
    double predicted_throughput = 0;  // total inflow minus max(0, best violation)
    std::vector<int> critical_nodes;  // union of worst cuts when overloaded
    std::string monotonicity;
    bool axioms_ok = false;
    std::string detail;
};

ThroughputReport throughput_verdict(const Network& net, const RoutingPolicy& policy);

// ---- resilience ----

using PolicyFactory = std::function<PolicyPtr(std::shared_ptr<const AugmentedNetwork>)>;

struct ResilienceConfig {
    std::vector<std::string> channel;  // links drained in order by the attack family
    double detect_margin = 0.02;       // throughput must fall this far under the target
    double bisect_tol = 1e-3;
    double t_max = 150;
    double window_fraction = 0.25;
    double sample_stride = 0.25;
};

struct ResiliencePoint {
    double delta = 0;
    double nu_hat = 0;     // least total capacity removed that breaks the target
    double nu_theory = 0;  // upper bound from cut arithmetic: min-cut capacity - inflow + delta
    double param = 0;      // attack-family parameter at the threshold
    double throughput = 0; // measured throughput there
};

// Empirical resilience: for each delta, the least total capacity reduction
// along the staged channel family that drives measured throughput below
// (inflow - delta). +inf when even draining the whole channel does not.
std::vector<ResiliencePoint> resilience_curve(const Network& net, const PolicyFactory& make_policy,
                                              const std::vector<double>& deltas,
                                              const ResilienceConfig& cfg);

}  // namespace flownet

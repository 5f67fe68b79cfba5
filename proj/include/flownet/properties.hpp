#pragma once

#include <random>

#include "flownet/dynamics.hpp"

namespace flownet {

// ---- randomized generators for the property suites ----

struct RandomNetworkOptions {
    int min_nodes = 6;
    int max_nodes = 12;
    double p_skip = 0.35;  // chance of extra forward shortcuts per node pair
    bool dyadic = true;    // capacities and inflows on a 1/8 grid (exact sums)
    double finite_buffer_fraction = 0;
};

// Layered feed-forward network: first layer takes the inflow, last layer is
// the destination set, every node lies on an origin-destination path.
Network random_network(std::mt19937_64& rng, const RandomNetworkOptions& opt = {});

// densities uniform in [0, min(B_e, cap)]
std::vector<double> random_state(const AugmentedNetwork& net, std::mt19937_64& rng, double cap);

// ---- trajectory pair properties ----

struct PairCheckConfig {
    int pairs = 100;
    unsigned long long seed = 20240903;
    double t_max = 30;
    double sample_stride = 0.5;
    double tol = 1e-7;   // scaled by (1 + initial separation)
    double ic_cap = 3;   // initial densities in [0, min(B, ic_cap)]
    // when > 0: while the distance still exceeds this, each sampled step must
    // strictly decrease it (contraction check only)
    double strict_below = 0;
};

struct PairCheckReport {
    int pairs = 0;
    int violations = 0;
    double worst = 0;  // largest distance increase / order breach observed
    std::vector<std::string> notes;
    bool pass() const { return violations == 0; }
};

// the l1 distance between two solutions never increases along time
PairCheckReport check_l1_contraction(const RoutingPolicy& policy, const PairCheckConfig& cfg = {});

// componentwise ordered starts stay ordered along time
PairCheckReport check_order_preservation(const RoutingPolicy& policy,
                                         const PairCheckConfig& cfg = {});

// ---- pointwise dissipation property ----

struct SignCheckConfig {
    int points = 1000;
    unsigned long long seed = 20240904;
    double tie_tol = 1e-12;  // |difference| below this contributes sign 0
    double tol = 1e-9;
    double ic_cap = 5;
};

// sum_e sgn(rho1_e - rho2_e) * (F_e(rho1) - F_e(rho2)) <= 0, the inequality
// that makes the l1 distance non-expansive for monotone routing
PairCheckReport check_sign_inequality(const RoutingPolicy& policy, const SignCheckConfig& cfg = {});

}  // namespace flownet

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flownet/analysis.hpp"
#include "flownet/dynamics.hpp"

namespace flownet {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolicySpec {
    std::string type = "softmax";          // "softmax" | "section2"
    std::map<std::string, double> beta;    // softmax: per-link sensitivities
    std::string variant = "R1";            // section2: "R1" | "R2" | "R3"
};

struct InitialSpec {
    enum class Kind { zero, random, values } kind = Kind::zero;
    unsigned long long seed = 0;             // random
    std::map<std::string, double> values;    // explicit
};

struct Perturbation {
    double time = 0;
    std::map<std::string, double> capacities;  // link -> new capacity (<= original)
};

struct Scenario {
    NetworkSpec network;
    PolicySpec policy;
    InitialSpec initial;
    IntegrationConfig integration;
    ClassificationThresholds analysis;
    std::vector<Perturbation> perturbations;  // sorted by time
    ResilienceConfig resilience;              // channel may be empty
    std::vector<double> resilience_deltas{0.0};
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
// canonical form; parse -> serialize -> parse is a fixed point
std::string serialize_scenario(const Scenario& sc);

// policy from a spec; reference-policy split weights always come from
// base_for_weights so capacity perturbations leave the routing matrix alone
PolicyPtr build_policy(const PolicySpec& spec, std::shared_ptr<const AugmentedNetwork> net,
                       const Network& base_for_weights);

std::vector<double> initial_state(const Scenario& sc, const Network& net);

struct SimulationResult {
    std::vector<Trajectory> stages;  // one per capacity regime
    Trajectory merged;               // stitched samples over the whole protocol
    double throughput_final = 0;     // trailing window of the last stage
};

// run the staged protocol: integrate, switch capacities at each perturbation
// time, continue from the current state
SimulationResult run_simulation(const Scenario& sc,
                                std::optional<double> t_max_override = std::nullopt);

// ---- artifact writers ----

// header t,rho_<id>...,fin_<id>...,fout_<id>...; floats at 17 significant digits
std::string trajectory_csv(const Trajectory& traj);
std::string termination_json(const SimulationResult& sim);
std::string analysis_json(const Scenario& sc, const SimulationResult& sim);
std::string classification_json(const Scenario& sc, const SimulationResult& sim);
std::string mincut_json(const Network& net);
std::string mincut_csv(const Network& net);
std::string resilience_csv(const std::vector<ResiliencePoint>& pts);
std::string resilience_json(const std::vector<ResiliencePoint>& pts);

}  // namespace flownet

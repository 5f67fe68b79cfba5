#pragma once

#include "flownet/graph.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>

namespace flownet {

// Evaluation at the excluded saturation point (every density a routing map can
// see is at its buffer) or otherwise outside the state box. Never clamped
// silently; the offending link travels with the error.
struct RoutingDomainError : std::runtime_error {
    RoutingDomainError(std::string msg, int aug_link)
        : std::runtime_error(std::move(msg)), aug_link(aug_link) {}
    int aug_link;
};

// One local routing map per routed link (real links and origin links): reads
// only the densities in local_links(e), writes one nonnegative flow per entry
// of downstream(e), total at most the link's capacity (exactly lambda_v for an
// origin link).
class RoutingPolicy {
public:
    virtual ~RoutingPolicy() = default;

    const AugmentedNetwork& net() const { return *net_; }
    std::shared_ptr<const AugmentedNetwork> net_ptr() const { return net_; }

    // rho: densities for all real links. flows: one entry per downstream(ae).
    virtual void evaluate(int ae, std::span<const double> rho, std::span<double> flows) const = 0;

    double outflow(int ae, std::span<const double> rho) const;
    std::vector<double> split(int ae, std::span<const double> rho) const;

protected:
    explicit RoutingPolicy(std::shared_ptr<const AugmentedNetwork> net) : net_(std::move(net)) {}
    std::shared_ptr<const AugmentedNetwork> net_;
};

using PolicyPtr = std::shared_ptr<const RoutingPolicy>;

// Softmax policy: each link weighs itself and its downstream neighbours by
// gamma_j = exp(-phi_j(rho_j)) with phi_j(rho) = beta_j * rho / (B_j - rho)
// for finite buffers and beta_j * rho otherwise; flow to j is
// C_e (1 - gamma_e) gamma_j / sum_k gamma_k (origin links: lambda_v gamma_j /
// sum over downstream). Strictly increasing congestion costs give a strongly
// monotone policy.
PolicyPtr make_softmax_policy(std::shared_ptr<const AugmentedNetwork> net,
                              const std::map<std::string, double>& beta = {});

// Reference routing family on the five-link diamond network (single origin
// feeding two branch nodes, one destination, a chord between the branches).
// R1 is a fixed split; R2 reroutes across the two branch outlets by relative
// congestion; R3 additionally throttles total outflow under downstream
// congestion (backpressure). Outflow magnitude is C_e * (1 - exp(-rho_e)).
// Defined on that topology only; the network is matched structurally, so node
// and link ids are free. Scenario files select it with policy type "section2".
enum class RefVariant { R1, R2, R3 };
PolicyPtr make_reference_policy(std::shared_ptr<const AugmentedNetwork> net, RefVariant variant);
// Split ratios are part of the routing matrix: by default they are derived
// from the capacities at construction, but a capacity-perturbed copy must keep
// the originals, passed here ordered by role (origin outlets, chord, sinks).
PolicyPtr make_reference_policy(std::shared_ptr<const AugmentedNetwork> net, RefVariant variant,
                                std::vector<double> routing_weights);
// Role-ordered capacities of a diamond network, in the order the overload
// above expects. Throws std::invalid_argument when the topology doesn't match.
std::vector<double> reference_routing_weights(const Network& net);

// ---- policy property checks ----

struct AxiomCheckConfig {
    int samples = 1000;
    std::uint64_t seed = 20240901;
    double tol = 1e-9;             // exact-boundary axioms and feasibility
    double lambda_big = 50.0;      // stand-in for "density large" on unbounded buffers
    double eps_limit = 1e-3;       // limit-form tolerance, scaled by C_e
    double interior_cap = 5.0;     // sampling box edge for unbounded buffers
};

struct AxiomViolation {
    std::string axiom;   // "origin" | "empty-link" | "congested-self" |
                         // "congested-downstream" | "capacity" | "negative-flow"
    std::string link;    // offending routed link (augmented id)
    double magnitude;
    bool limit_form;     // true when tested as a large-density limit
};

struct AxiomReport {
    std::vector<AxiomViolation> violations;
    double worst_exact = 0.0;
    double worst_limit = 0.0;
    int samples = 0;
    // Exact-boundary axioms (the ones Definition-style policies must satisfy;
    // congested-link axioms are vacuous on unbounded buffers and only their
    // advisory limit forms can fail there).
    bool exact_pass() const;
    bool limit_pass() const;
};

AxiomReport check_axioms(const RoutingPolicy& policy, const AxiomCheckConfig& cfg = {});

enum class MonotonicityClass { not_monotone, monotone, strongly_monotone_sampled };
std::string to_string(MonotonicityClass c);

struct MonotonicityConfig {
    int samples = 200;
    std::uint64_t seed = 20240902;
    double fd_step = 0.0;        // 0 -> 1e-5 * min(smallest finite buffer, 1)
    double tol = 1e-8;           // violation threshold and strictness threshold
    double interior_cap = 5.0;
};

struct MonotonicityReport {
    MonotonicityClass classification = MonotonicityClass::monotone;
    double worst_violation = 0.0;        // most positive wrong-signed derivative
    double weakest_strict = 0.0;         // smallest |derivative| that had to be strict
    int samples = 0;
    std::vector<std::string> notes;      // offending partials, if any
};

// Central finite differences of the routing maps at sampled interior points.
// Checked inequalities: d f_{e->j} / d rho_k >= 0 for k in E_e \ {j}, and
// d f^out_e / d rho_k <= 0 for downstream k. Strictness is required wherever
// the derivative is not structurally pinned (origin links have f^out =
// lambda_v identically, so their outflow partials are exactly zero by design
// and do not count against strictness).
MonotonicityReport check_monotonicity(const RoutingPolicy& policy,
                                      const MonotonicityConfig& cfg = {});

}  // namespace flownet

#pragma once

#include "flownet/ext_real.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace flownet {

// Name reserved for the world node introduced by augmentation. Base networks
// may not use it, which is what makes double augmentation detectable.
inline constexpr const char* kWorldNodeId = "@world";

struct LinkSpec {
    std::string id;
    std::string tail;  // sigma_e: the link leaves this node
    std::string head;  // tau_e: the link enters this node
    ExtReal capacity = ExtReal::unbounded();
    ExtReal buffer = ExtReal::unbounded();
};

struct NetworkSpec {
    std::vector<std::string> nodes;
    std::vector<LinkSpec> links;
    std::map<std::string, double> inflows;  // node id -> exogenous rate; absent = 0
};

struct ValidationIssue {
    std::string code;     // stable machine-readable kind, e.g. "self-loop"
    std::string subject;  // offending node/link id
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

// Structural and semantic checks on raw network data: id uniqueness, endpoint
// resolution, no self-loops, capacity/buffer positivity, inflow sanity,
// nonempty destination set, and strong connectivity of the augmentation.
// Every failure is a report entry; nothing throws on bad data.
ValidationReport validate(const NetworkSpec& spec);

struct ValidationError : std::runtime_error {
    explicit ValidationError(ValidationReport r);
    ValidationReport report;
};

// A validated, index-mapped network. Construction runs validate() and throws
// ValidationError if the spec is rejected. Node/link order follows the spec.
class Network {
public:
    explicit Network(NetworkSpec spec);

    int node_count() const { return static_cast<int>(node_ids_.size()); }
    int link_count() const { return static_cast<int>(link_ids_.size()); }

    int tail(int e) const { return tail_[e]; }
    int head(int e) const { return head_[e]; }
    const ExtReal& capacity(int e) const { return capacity_[e]; }
    const ExtReal& buffer(int e) const { return buffer_[e]; }
    double inflow(int v) const { return inflow_[v]; }
    double total_inflow() const { return total_inflow_; }

    const std::vector<int>& out_links(int v) const { return out_[v]; }  // E_v^+
    const std::vector<int>& in_links(int v) const { return in_[v]; }    // E_v^-
    const std::vector<int>& destinations() const { return destinations_; }
    const std::vector<int>& origins() const { return origins_; }  // nodes listed in inflows
    bool is_destination(int v) const { return is_destination_[v]; }
    const std::vector<int>& non_destinations() const { return non_destinations_; }

    const std::string& node_id(int v) const { return node_ids_[v]; }
    const std::string& link_id(int e) const { return link_ids_[e]; }
    int node_index(const std::string& id) const;  // throws std::out_of_range
    int link_index(const std::string& id) const;

    // Perturbed copy: same topology and routing-relevant structure, capacities
    // overridden by link id. Unlike base construction, zero capacity is legal
    // here (a perturbation may sever a link).
    Network with_capacities(const std::map<std::string, double>& overrides) const;

    const NetworkSpec& spec() const { return spec_; }

private:
    struct Perturbed {};
    Network(NetworkSpec spec, Perturbed);
    void build_index();

    NetworkSpec spec_;
    std::vector<std::string> node_ids_, link_ids_;
    std::map<std::string, int> node_index_, link_index_;
    std::vector<int> tail_, head_;
    std::vector<ExtReal> capacity_, buffer_;
    std::vector<double> inflow_;
    std::vector<std::vector<int>> out_, in_;
    std::vector<int> destinations_, origins_, non_destinations_;
    std::vector<bool> is_destination_;
    double total_inflow_ = 0.0;
};

// Augmented network: adds the world node, one origin link per origin (world ->
// origin) and one destination link per destination (destination -> world), all
// of unbounded capacity. Augmented link indexing: [0, m) the real links in
// base order, then origin links in origins() order, then destination links in
// destinations() order. Real and origin links are the "routed" links (those
// carrying a routing map); destination links only absorb flow.
class AugmentedNetwork {
public:
    explicit AugmentedNetwork(Network base);

    const Network& base() const { return base_; }
    int real_link_count() const { return m_; }
    int routed_link_count() const { return m_ + norigin_; }  // real + origin links
    int aug_link_count() const { return m_ + norigin_ + ndest_; }
    int world_node() const { return base_.node_count(); }

    bool is_real(int ae) const { return ae < m_; }
    bool is_origin_link(int ae) const { return ae >= m_ && ae < m_ + norigin_; }
    bool is_destination_link(int ae) const { return ae >= m_ + norigin_; }

    int aug_tail(int ae) const { return aug_tail_[ae]; }
    int aug_head(int ae) const { return aug_head_[ae]; }
    // for origin/destination links: the origin v / destination d they attach to
    int attached_node(int ae) const { return attached_[ae]; }
    int origin_link_of(int v) const;  // aug index of e_v; throws if v not an origin
    int dest_link_of(int d) const;

    // E_e^+ as augmented link ids. Empty exactly for destination links.
    const std::vector<int>& downstream(int ae) const { return downstream_[ae]; }
    // Real links whose densities f^e may read: for a real link {e} then its
    // real downstream; for an origin link just its downstream. Order matters:
    // policies and checkers index it.
    const std::vector<int>& local_links(int ae) const { return local_[ae]; }

    std::string aug_link_id(int ae) const;

private:
    Network base_;
    int m_ = 0, norigin_ = 0, ndest_ = 0;
    std::vector<int> aug_tail_, aug_head_, attached_;
    std::vector<std::vector<int>> downstream_, local_;
    std::map<int, int> origin_link_, dest_link_;
};

// Cut bookkeeping for a nonempty U subseteq V \ D (indices into the base
// network). Out-of-range or destination members and empty U throw
// std::invalid_argument.
struct CutSets {
    std::vector<int> boundary_out;  // links leaving U (tail in U, head outside)
    std::vector<int> boundary_in;   // links entering U
    std::vector<int> out_links;     // E_U^+: all links with tail in U
    std::vector<int> in_links;      // E_U^-: all links with head in U
};

CutSets cut_sets(const Network& net, std::span<const int> cut_nodes);
ExtReal cut_capacity(const Network& net, std::span<const int> cut_nodes);
double cut_inflow(const Network& net, std::span<const int> cut_nodes);
// lambda_U - C_U; -inf when the boundary capacity is unbounded
double cut_violation(const Network& net, std::span<const int> cut_nodes);
// total capacity of links going directly from `from` into `to` (disjoint sets)
ExtReal directed_capacity(const Network& net, std::span<const int> from, std::span<const int> to);

}  // namespace flownet

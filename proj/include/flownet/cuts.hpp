#pragma once

#include <vector>

#include "flownet/graph.hpp"

namespace flownet {

// exhaustive subset scan is limited to this many non-destination nodes
inline constexpr int kEnumerationLimit = 22;

struct CutRecord {
    std::vector<int> nodes;  // sorted node indices
    double inflow = 0;       // total exogenous inflow collected by the cut
    double capacity = 0;     // total capacity leaving it (+inf possible)
    double violation = 0;    // inflow - capacity (-inf when capacity is unbounded)
};

struct CutSearchResult {
    double best = 0;                    // max violation over nonempty cuts
    std::vector<CutRecord> maximizers;  // cuts attaining it (within the tie tolerance)
    std::vector<int> union_nodes;       // union of the maximizers; for best >= 0 this
                                        // is itself a maximizer (violation is supermodular)
    long cuts_examined = 0;
};

// Scan every nonempty subset of the non-destination nodes. tie_tol <= 0 picks
// 1e-9 * (1 + |best|).
CutSearchResult enumerate_violations(const Network& net, double tie_tol = 0);

// Same maximum via a max-flow reduction (augmenting shortest paths), usable far
// beyond the enumeration limit. Exact when capacities and inflows add without
// rounding (e.g. dyadic rationals). Returns -inf when every nonempty cut has
// unbounded capacity.
double max_violation_maxflow(const Network& net);

// Max-flow search that also recovers cuts: maximizers holds the inclusion-wise
// maximal best cut forced through each qualifying node (deduplicated), and
// union_nodes their union, which equals the union of *all* maximizers.
CutSearchResult max_violation_cut(const Network& net);

// enumeration when small, max-flow otherwise
CutSearchResult cut_search(const Network& net, double tie_tol = 0);

// Capacity of the smallest cut separating every inflow node from the
// destinations; +inf when all such cuts cross an unbounded link.
double min_cut_capacity(const Network& net);

}  // namespace flownet

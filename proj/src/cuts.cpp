#include "flownet/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace flownet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> candidates(const Network& net) {
    std::vector<int> c;
    for (int v = 0; v < net.node_count(); ++v)
        if (!net.is_destination(v)) c.push_back(v);
    return c;
}

}  // namespace

CutSearchResult enumerate_violations(const Network& net, double tie_tol) {
    auto cand = candidates(net);
    int n = static_cast<int>(cand.size());
    if (n > kEnumerationLimit)
        throw std::invalid_argument("enumerate_violations: " + std::to_string(n) +
                                    " non-destination nodes exceed the enumeration limit; "
                                    "use the max-flow search");

    int m = net.link_count();
    std::vector<int> pos(net.node_count(), -1);  // node -> candidate bit
    for (int i = 0; i < n; ++i) pos[cand[i]] = i;

    auto violation_of = [&](unsigned mask, double& lam, double& cap) {
        lam = 0;
        cap = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) lam += net.inflow(cand[i]);
        for (int e = 0; e < m; ++e) {
            int ti = pos[net.tail(e)];
            int hi = pos[net.head(e)];
            bool tail_in = ti >= 0 && (mask & (1u << ti));
            bool head_in = hi >= 0 && (mask & (1u << hi));
            if (tail_in && !head_in) {
                if (!net.capacity(e).is_finite()) {
                    cap = kInf;
                    return -kInf;
                }
                cap += net.capacity(e).value();
            }
        }
        return lam - cap;
    };

    CutSearchResult res;
    res.best = -kInf;
    unsigned total = 1u << n;
    for (unsigned mask = 1; mask < total; ++mask) {
        double lam, cap;
        res.best = std::max(res.best, violation_of(mask, lam, cap));
        ++res.cuts_examined;
    }

    double tol = tie_tol > 0 ? tie_tol : 1e-9 * (1.0 + std::abs(res.best));
    std::set<int> uni;
    for (unsigned mask = 1; mask < total; ++mask) {
        double lam, cap;
        double v = violation_of(mask, lam, cap);
        if (v >= res.best - tol) {
            CutRecord rec;
            rec.inflow = lam;
            rec.capacity = cap;
            rec.violation = v;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) {
                    rec.nodes.push_back(cand[i]);
                    uni.insert(cand[i]);
                }
            res.maximizers.push_back(std::move(rec));
        }
    }
    res.union_nodes.assign(uni.begin(), uni.end());
    return res;
}

// ---------------------------------------------------------------------------
// max-flow reduction

namespace {

struct FlowGraph {
    struct Arc {
        int to;
        double cap;
        int rev;
    };
    std::vector<std::vector<Arc>> adj;

    explicit FlowGraph(int n) : adj(n) {}

    void add(int u, int v, double cap) {
        adj[u].push_back({v, cap, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0.0, static_cast<int>(adj[u].size()) - 1});
    }

    // shortest augmenting paths; capacities here are modest sums, so the
    // arithmetic is exact for rational inputs without rounding
    double max_flow(int s, int t) {
        double total = 0;
        int n = static_cast<int>(adj.size());
        std::vector<int> pv(n), pe(n);
        for (;;) {
            std::fill(pv.begin(), pv.end(), -1);
            pv[s] = s;
            std::queue<int> q;
            q.push(s);
            while (!q.empty() && pv[t] < 0) {
                int u = q.front();
                q.pop();
                for (int i = 0; i < static_cast<int>(adj[u].size()); ++i) {
                    const Arc& a = adj[u][i];
                    if (a.cap > 0 && pv[a.to] < 0) {
                        pv[a.to] = u;
                        pe[a.to] = i;
                        q.push(a.to);
                    }
                }
            }
            if (pv[t] < 0) return total;
            double push = kInf;
            for (int v = t; v != s; v = pv[v]) push = std::min(push, adj[pv[v]][pe[v]].cap);
            for (int v = t; v != s; v = pv[v]) {
                Arc& a = adj[pv[v]][pe[v]];
                a.cap -= push;
                adj[a.to][a.rev].cap += push;
            }
            total += push;
        }
    }

    // nodes that cannot reach t through residual arcs: the source side of the
    // inclusion-wise largest minimum cut
    std::vector<bool> cant_reach_sink(int t) const {
        int n = static_cast<int>(adj.size());
        std::vector<bool> reach(n, false);
        reach[t] = true;
        std::queue<int> q;
        q.push(t);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Arc& a : adj[u]) {
                // w -> u has residual iff the reverse of (u -> w) has cap > 0
                if (!reach[a.to] && adj[a.to][a.rev].cap > 0) {
                    reach[a.to] = true;
                    q.push(a.to);
                }
            }
        }
        for (int i = 0; i < n; ++i) reach[i] = !reach[i];
        return reach;
    }
};

struct Reduction {
    const Network& net;
    std::vector<int> cand;
    std::vector<int> node_of;  // network node -> flow-graph node (or t for destinations)
    double big;
    int s = 0, t = 1;

    explicit Reduction(const Network& n) : net(n), cand(candidates(n)) {
        node_of.assign(net.node_count(), t);
        for (size_t i = 0; i < cand.size(); ++i) node_of[cand[i]] = 2 + static_cast<int>(i);
        double cap_sum = 0;
        for (int e = 0; e < net.link_count(); ++e) cap_sum += net.capacity(e).value_or(0.0);
        big = net.total_inflow() + cap_sum + 1.0;
    }

    // forced >= 0 pins that node to the source side
    FlowGraph build(int forced) const {
        FlowGraph g(2 + static_cast<int>(cand.size()));
        for (int v : cand) {
            double c = net.inflow(v);
            if (v == forced) c += big;
            if (c > 0) g.add(s, node_of[v], c);
        }
        for (int e = 0; e < net.link_count(); ++e)
            g.add(node_of[net.tail(e)], node_of[net.head(e)], net.capacity(e).value_or(big));
        return g;
    }

    double lambda_all() const {
        double s_ = 0;
        for (int v : cand) s_ += net.inflow(v);
        return s_;
    }
};

}  // namespace

double max_violation_maxflow(const Network& net) {
    Reduction red(net);
    double lam = red.lambda_all();
    double best = -kInf;
    {
        FlowGraph g = red.build(-1);
        double v = lam - g.max_flow(red.s, red.t);
        // v == 0 can mean the empty cut, and float residue can fake a hair
        // above zero; anything inside the tolerance falls through to the
        // forced runs, which compute the nonempty maximum directly
        if (v > 1e-9 * (1.0 + std::abs(lam))) return v;
    }
    for (int v : red.cand) {
        FlowGraph g = red.build(v);
        double mf = g.max_flow(red.s, red.t);
        // every nonempty cut has value below big; hitting big means every cut
        // through the forced node crossed an unbounded link
        if (mf >= red.big - 0.5) continue;
        best = std::max(best, lam - mf);
    }
    return best;  // still -inf if no node admits a finite cut
}

CutSearchResult max_violation_cut(const Network& net) {
    Reduction red(net);
    double lam = red.lambda_all();
    CutSearchResult res;
    res.best = max_violation_maxflow(net);
    res.cuts_examined = static_cast<long>(red.cand.size()) + 1;
    if (std::isinf(res.best)) return res;

    std::set<std::vector<int>> seen;
    std::set<int> uni;
    double tol = 1e-9 * (1.0 + std::abs(res.best));
    for (int v : red.cand) {
        FlowGraph g = red.build(v);
        double mf = g.max_flow(red.s, red.t);
        if (mf >= red.big - 0.5) continue;
        double val = lam - mf;
        if (val < res.best - tol) continue;
        auto side = g.cant_reach_sink(red.t);
        CutRecord rec;
        for (int u : red.cand)
            if (side[red.node_of[u]]) rec.nodes.push_back(u);
        std::sort(rec.nodes.begin(), rec.nodes.end());
        for (int u : rec.nodes) uni.insert(u);
        if (!seen.insert(rec.nodes).second) continue;
        rec.inflow = 0;
        for (int u : rec.nodes) rec.inflow += net.inflow(u);
        rec.capacity = rec.inflow - val;
        rec.violation = val;
        res.maximizers.push_back(std::move(rec));
    }
    res.union_nodes.assign(uni.begin(), uni.end());
    return res;
}

CutSearchResult cut_search(const Network& net, double tie_tol) {
    if (static_cast<int>(candidates(net).size()) <= kEnumerationLimit)
        return enumerate_violations(net, tie_tol);
    return max_violation_cut(net);
}

double min_cut_capacity(const Network& net) {
    auto cand = candidates(net);
    double cap_sum = 0;
    for (int e = 0; e < net.link_count(); ++e) cap_sum += net.capacity(e).value_or(0.0);
    double big = cap_sum + 1.0;

    FlowGraph g(2 + static_cast<int>(cand.size()));
    int s = 0, t = 1;
    std::vector<int> node_of(net.node_count(), t);
    for (size_t i = 0; i < cand.size(); ++i) node_of[cand[i]] = 2 + static_cast<int>(i);
    // source arcs dwarf every finite cut so the min cut keeps all inflow nodes
    // on the source side; unbounded links cost `big`, putting any cut through
    // them above the finite range too
    for (int v : cand)
        if (net.inflow(v) > 0) g.add(s, node_of[v], 2.0 * big);
    for (int e = 0; e < net.link_count(); ++e)
        g.add(node_of[net.tail(e)], node_of[net.head(e)], net.capacity(e).value_or(big));

    double mf = g.max_flow(s, t);
    return mf >= big - 0.5 ? kInf : mf;
}

}  // namespace flownet

#include "flownet/properties.hpp"

#include <algorithm>
#include <cmath>

namespace flownet {

namespace {

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double dyadic(std::mt19937_64& rng, double lo, double hi) {
    // multiples of 1/8 in [lo, hi]
    int steps = static_cast<int>((hi - lo) * 8);
    return lo + static_cast<double>(rng() % (steps + 1)) / 8.0;
}

}  // namespace

Network random_network(std::mt19937_64& rng, const RandomNetworkOptions& opt) {
    int n = opt.min_nodes + static_cast<int>(rng() % (opt.max_nodes - opt.min_nodes + 1));
    // split into 3..4 layers, at least one node each
    int nlayers = 3 + static_cast<int>(rng() % 2);
    nlayers = std::min(nlayers, n);
    std::vector<std::vector<int>> layer(nlayers);
    for (int v = 0; v < n; ++v) layer[v < nlayers ? v : rng() % nlayers].push_back(v);
    std::sort(layer.begin(), layer.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    NetworkSpec spec;
    for (int v = 0; v < n; ++v) spec.nodes.push_back("n" + std::to_string(v));

    auto cap = [&] { return opt.dyadic ? dyadic(rng, 0.5, 4.0) : 0.5 + 3.5 * u01(rng); };
    int eid = 0;
    auto add_link = [&](int u, int v) {
        LinkSpec l;
        l.id = "e" + std::to_string(eid++);
        l.tail = spec.nodes[u];
        l.head = spec.nodes[v];
        l.capacity = ExtReal::finite(cap());
        if (u01(rng) < opt.finite_buffer_fraction)
            l.buffer = ExtReal::finite(opt.dyadic ? dyadic(rng, 1.0, 4.0) : 1.0 + 3.0 * u01(rng));
        spec.links.push_back(std::move(l));
    };

    // every node: >= 1 link to the next layer; layer > 0 nodes: >= 1 link in
    for (int l = 0; l + 1 < nlayers; ++l) {
        for (int u : layer[l]) add_link(u, layer[l + 1][rng() % layer[l + 1].size()]);
    }
    for (int l = 1; l < nlayers; ++l) {
        for (int v : layer[l]) {
            bool has_in = false;
            for (const auto& lk : spec.links)
                if (lk.head == spec.nodes[v]) { has_in = true; break; }
            if (!has_in) add_link(layer[l - 1][rng() % layer[l - 1].size()], v);
        }
    }
    // forward shortcuts
    for (int l = 0; l + 1 < nlayers; ++l)
        for (int u : layer[l])
            for (int l2 = l + 1; l2 < nlayers; ++l2)
                for (int v : layer[l2])
                    if (u01(rng) < opt.p_skip / (1 + l2 - l - 1)) {
                        bool dup = false;
                        for (const auto& lk : spec.links)
                            if (lk.tail == spec.nodes[u] && lk.head == spec.nodes[v]) dup = true;
                        if (!dup) add_link(u, v);
                    }

    for (int u : layer[0])
        spec.inflows[spec.nodes[u]] = opt.dyadic ? dyadic(rng, 0.25, 2.0) : 0.25 + 1.75 * u01(rng);
    return Network(spec);
}

std::vector<double> random_state(const AugmentedNetwork& net, std::mt19937_64& rng, double cap) {
    const Network& base = net.base();
    std::vector<double> rho(net.real_link_count());
    for (int e = 0; e < net.real_link_count(); ++e) {
        double hi = std::min(cap, base.buffer(e).value_or(cap));
        rho[e] = u01(rng) * hi * 0.98;
    }
    return rho;
}

namespace {

Trajectory run_pair_leg(const RoutingPolicy& policy, std::vector<double> rho0,
                        const PairCheckConfig& cfg) {
    IntegrationConfig ic;
    ic.t_max = cfg.t_max;
    ic.sample_stride = cfg.sample_stride;
    ic.detect_equilibrium = false;  // keep the sample grids of a pair aligned
    return integrate(policy, std::move(rho0), ic);
}

}  // namespace

PairCheckReport check_l1_contraction(const RoutingPolicy& policy, const PairCheckConfig& cfg) {
    PairCheckReport rep;
    std::mt19937_64 rng(cfg.seed);
    const AugmentedNetwork& net = policy.net();
    for (int p = 0; p < cfg.pairs; ++p) {
        auto a = random_state(net, rng, cfg.ic_cap);
        auto b = random_state(net, rng, cfg.ic_cap);
        auto ta = run_pair_leg(policy, a, cfg);
        auto tb = run_pair_leg(policy, b, cfg);
        ++rep.pairs;

        size_t nsh = std::min(ta.times.size(), tb.times.size());
        double d0 = 0;
        for (size_t e = 0; e < a.size(); ++e) d0 += std::abs(a[e] - b[e]);
        double tol = cfg.tol * (1.0 + d0);

        double prev = d0;
        for (size_t i = 1; i < nsh; ++i) {
            double d = 0;
            for (size_t e = 0; e < a.size(); ++e)
                d += std::abs(ta.rho[i][e] - tb.rho[i][e]);
            if (d - prev > tol) {
                ++rep.violations;
                rep.worst = std::max(rep.worst, d - prev);
                rep.notes.push_back("pair " + std::to_string(p) + ": distance grew by " +
                                    std::to_string(d - prev) + " at t=" +
                                    std::to_string(ta.times[i]));
                break;
            }
            if (cfg.strict_below > 0 && prev > cfg.strict_below && d >= prev) {
                ++rep.violations;
                rep.worst = std::max(rep.worst, d - prev);
                rep.notes.push_back("pair " + std::to_string(p) + ": no strict decrease (d=" +
                                    std::to_string(d) + ") at t=" + std::to_string(ta.times[i]));
                break;
            }
            prev = d;
        }
    }
    return rep;
}

PairCheckReport check_order_preservation(const RoutingPolicy& policy, const PairCheckConfig& cfg) {
    PairCheckReport rep;
    std::mt19937_64 rng(cfg.seed);
    const AugmentedNetwork& net = policy.net();
    const Network& base = net.base();
    for (int p = 0; p < cfg.pairs; ++p) {
        auto lo = random_state(net, rng, cfg.ic_cap);
        auto hi = lo;
        for (int e = 0; e < net.real_link_count(); ++e) {
            double edge = std::min(cfg.ic_cap, base.buffer(e).value_or(cfg.ic_cap)) * 0.98;
            hi[e] = lo[e] + u01(rng) * (edge - lo[e]);
        }
        auto tl = run_pair_leg(policy, lo, cfg);
        auto th = run_pair_leg(policy, hi, cfg);
        ++rep.pairs;

        double d0 = 0;
        for (size_t e = 0; e < lo.size(); ++e) d0 += hi[e] - lo[e];
        double tol = cfg.tol * (1.0 + d0);

        size_t nsh = std::min(tl.times.size(), th.times.size());
        double breach = 0;
        for (size_t i = 0; i < nsh && breach <= tol; ++i)
            for (size_t e = 0; e < lo.size(); ++e)
                breach = std::max(breach, tl.rho[i][e] - th.rho[i][e]);
        if (breach > tol) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, breach);
            rep.notes.push_back("pair " + std::to_string(p) + ": order broke by " +
                                std::to_string(breach));
        }
    }
    return rep;
}

PairCheckReport check_sign_inequality(const RoutingPolicy& policy, const SignCheckConfig& cfg) {
    PairCheckReport rep;
    std::mt19937_64 rng(cfg.seed);
    const AugmentedNetwork& net = policy.net();
    int m = net.real_link_count();
    std::vector<double> fa(m), fb(m);
    for (int p = 0; p < cfg.points; ++p) {
        auto a = random_state(net, rng, cfg.ic_cap);
        auto b = random_state(net, rng, cfg.ic_cap);
        rhs(policy, a, fa);
        rhs(policy, b, fb);
        ++rep.pairs;
        double s = 0;
        for (int e = 0; e < m; ++e) {
            double diff = a[e] - b[e];
            if (std::abs(diff) < cfg.tie_tol) continue;
            s += (diff > 0 ? 1.0 : -1.0) * (fa[e] - fb[e]);
        }
        if (s > cfg.tol) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, s);
            rep.notes.push_back("point " + std::to_string(p) + ": signed dissipation " +
                                std::to_string(s));
        }
    }
    return rep;
}

}  // namespace flownet

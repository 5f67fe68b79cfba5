#include "flownet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace flownet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(DensityTag t) {
    switch (t) {
        case DensityTag::saturated: return "saturated";
        case DensityTag::grows_linearly: return "grows-linearly";
        case DensityTag::grows_unbounded: return "grows-unbounded";
        case DensityTag::bounded: return "bounded";
        case DensityTag::inconclusive: return "inconclusive";
    }
    return "?";
}

std::pair<double, double> growth_rate(const Trajectory& traj, int link, double window_fraction) {
    const auto& ts = traj.times;
    double t1 = ts.back();
    double t0 = ts.front() + (1.0 - window_fraction) * (t1 - ts.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    long n = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t0) continue;
        double x = ts[i], y = traj.rho[i][link];
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++n;
    }
    if (n < 2) return {0.0, 0.0};
    double vxx = sxx - sx * sx / n;
    double vyy = syy - sy * sy / n;
    double vxy = sxy - sx * sy / n;
    if (vxx <= 0) return {0.0, 0.0};
    double slope = vxy / vxx;
    double r2 = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;  // flat series fits exactly
    return {slope, r2};
}

std::vector<LinkClassification> classify_links(const Trajectory& traj,
                                               const ClassificationThresholds& th) {
    const AugmentedNetwork& net = *traj.net;
    const Network& base = net.base();
    int m = net.real_link_count();
    double scale = std::max(1.0, base.total_inflow());

    const auto& ts = traj.times;
    double t1 = ts.back();
    double t0 = ts.front() + (1.0 - th.window_fraction) * (t1 - ts.front());
    size_t w0 = 0;
    while (w0 + 1 < ts.size() && ts[w0] < t0) ++w0;

    std::vector<LinkClassification> out(m);
    for (int e = 0; e < m; ++e) {
        LinkClassification& c = out[e];
        c.final_value = traj.rho.back()[e];
        std::tie(c.slope, c.r2) = growth_rate(traj, e, th.window_fraction);

        const ExtReal& B = base.buffer(e);
        if (B.is_finite() &&
            B.value() - c.final_value <= th.tol_buffer * std::max(1.0, B.value())) {
            c.tag = DensityTag::saturated;
            continue;
        }
        if (c.slope > th.slope_tol_scale * scale) {
            if (c.r2 >= th.r2_linear)
                c.tag = DensityTag::grows_linearly;
            else if (c.final_value - traj.rho[w0][e] >= th.diverge_min)
                c.tag = DensityTag::grows_unbounded;
            else
                c.tag = DensityTag::inconclusive;
        } else {
            c.tag = DensityTag::bounded;
        }
    }
    return out;
}

OverloadCut overload_cut(const Trajectory& traj, const ClassificationThresholds& th) {
    const AugmentedNetwork& net = *traj.net;
    const Network& base = net.base();
    auto tags = classify_links(traj, th);

    OverloadCut oc;
    std::vector<bool> blocked(tags.size(), false);
    for (size_t e = 0; e < tags.size(); ++e) {
        if (tags[e].tag == DensityTag::saturated || tags[e].tag == DensityTag::grows_linearly ||
            tags[e].tag == DensityTag::grows_unbounded) {
            blocked[e] = true;
            oc.blocked_links.push_back(static_cast<int>(e));
        }
    }
    for (int v = 0; v < base.node_count(); ++v) {
        if (base.is_destination(v)) continue;
        const auto& outs = base.out_links(v);
        bool all = !outs.empty();
        for (int e : outs)
            if (!blocked[e]) { all = false; break; }
        if (all) oc.spillback_nodes.push_back(v);
    }
    auto cs = cut_search(base);
    if (cs.best > 0) oc.expected_nodes = cs.union_nodes;
    oc.matches_expected = oc.spillback_nodes == oc.expected_nodes;
    if (!oc.spillback_nodes.empty()) {
        oc.s_inflow = cut_inflow(base, oc.spillback_nodes);
        oc.s_capacity = cut_capacity(base, oc.spillback_nodes)
                            .value_or(std::numeric_limits<double>::infinity());
    }
    return oc;
}

CutGrowth cut_growth(const Trajectory& traj, const std::vector<int>& nodes, double expected,
                     double window_fraction) {
    const Network& base = traj.net->base();
    CutGrowth g;
    std::vector<bool> in(base.node_count(), false);
    for (int v : nodes) in[v] = true;
    for (int e = 0; e < base.link_count(); ++e)
        if (in[base.tail(e)]) g.out_links.push_back(e);

    size_t n = traj.times.size();
    if (n < 3) return g;
    double t_lo = traj.times.back() - window_fraction * (traj.times.back() - traj.times.front());
    size_t i0 = 0;
    while (i0 + 2 < n && traj.times[i0] < t_lo) ++i0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    size_t cnt = n - i0;
    for (size_t i = i0; i < n; ++i) {
        double y = 0;
        for (int e : g.out_links) y += traj.rho[i][e];
        double x = traj.times[i];
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double den = cnt * sxx - sx * sx;
    if (den <= 0) return g;
    g.slope = (cnt * sxy - sx * sy) / den;
    double ss_tot = syy - sy * sy / cnt;
    double ss_res = ss_tot - g.slope * (sxy - sx * sy / cnt);
    g.r2 = ss_tot <= 1e-18 ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
    if (expected != 0)
        g.relative_error = std::abs(g.slope - expected) / std::max(std::abs(expected), 1e-12);
    return g;
}

double kappa_upper_bound(const Network& net, const std::vector<double>& rho0) {
    std::vector<int> cand;
    for (int v = 0; v < net.node_count(); ++v)
        if (!net.is_destination(v)) cand.push_back(v);
    int n = static_cast<int>(cand.size());
    int m = net.link_count();

    // headroom of a set of out-links, +inf as soon as one buffer is unbounded
    auto headroom = [&](const std::vector<char>& in_cut) {
        double s = 0;
        for (int e = 0; e < m; ++e) {
            if (!in_cut[net.tail(e)]) continue;
            if (!net.buffer(e).is_finite()) return kInf;
            s += net.buffer(e).value() - rho0[e];
        }
        return s;
    };

    double bound = kInf;
    if (n <= kEnumerationLimit) {
        std::vector<char> in_cut(net.node_count(), 0);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::fill(in_cut.begin(), in_cut.end(), 0);
            double lam = 0;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) {
                    in_cut[cand[i]] = 1;
                    lam += net.inflow(cand[i]);
                }
            double cap = 0;
            for (int e = 0; e < m; ++e)
                if (in_cut[net.tail(e)] && !in_cut[net.head(e)])
                    cap += net.capacity(e).value_or(kInf);
            if (lam <= cap) continue;
            bound = std::min(bound, headroom(in_cut) / (lam - cap));
        }
    } else {
        // beyond the enumeration limit only the worst cuts are examined
        auto cs = max_violation_cut(net);
        for (const auto& rec : cs.maximizers) {
            if (rec.violation <= 0) continue;
            std::vector<char> in_cut(net.node_count(), 0);
            for (int v : rec.nodes) in_cut[v] = 1;
            bound = std::min(bound, headroom(in_cut) / rec.violation);
        }
    }
    return bound;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::transfers_all: return "transfers-all";
        case Verdict::overloaded: return "overloaded";
        case Verdict::critical_stable: return "critical-stable";
        case Verdict::critical_indeterminate: return "critical-indeterminate";
        case Verdict::preconditions_failed: return "preconditions-failed";
    }
    return "?";
}

ThroughputReport throughput_verdict(const Network& net, const RoutingPolicy& policy) {
    ThroughputReport rep;
    double lam = net.total_inflow();

    auto ax = check_axioms(policy);
    rep.axioms_ok = ax.exact_pass();
    auto mono = check_monotonicity(policy);
    rep.monotonicity = to_string(mono.classification);

    auto cs = cut_search(net);
    rep.best_violation = cs.best;
    rep.predicted_throughput = lam - std::max(0.0, cs.best);

    if (!rep.axioms_ok || mono.classification == MonotonicityClass::not_monotone) {
        rep.verdict = Verdict::preconditions_failed;
        rep.detail = !rep.axioms_ok ? "policy violates the routing axioms"
                                    : "policy is not monotone";
        return rep;
    }

    double tie = 1e-9 * (1.0 + std::abs(lam));
    if (cs.best > tie) {
        rep.verdict = Verdict::overloaded;
        rep.critical_nodes = cs.union_nodes;
        rep.detail = "some cut takes in more than its outgoing capacity";
    } else if (cs.best < -tie) {
        rep.verdict = Verdict::transfers_all;
        rep.detail = "every cut has spare outgoing capacity";
    } else if (mono.classification == MonotonicityClass::strongly_monotone_sampled) {
        rep.verdict = Verdict::critical_stable;
        rep.detail = "a cut is exactly tight; strict monotonicity still transfers the demand";
    } else {
        rep.verdict = Verdict::critical_indeterminate;
        rep.detail = "a cut is exactly tight and monotonicity is not strict";
    }
    return rep;
}

std::vector<ResiliencePoint> resilience_curve(const Network& net, const PolicyFactory& make_policy,
                                              const std::vector<double>& deltas,
                                              const ResilienceConfig& cfg) {
    if (cfg.channel.empty())
        throw std::invalid_argument("resilience_curve: empty disruption channel");
    std::vector<double> caps;
    double t_top = 0;
    for (const auto& id : cfg.channel) {
        const ExtReal& c = net.capacity(net.link_index(id));
        if (!c.is_finite())
            throw std::invalid_argument("resilience_curve: channel link '" + id +
                                        "' must have finite capacity");
        caps.push_back(c.value());
        t_top += c.value();
    }

    double lam = net.total_inflow();
    double cg = min_cut_capacity(net);
    std::map<double, double> memo;  // parameter -> measured throughput

    auto measure = [&](double param) {
        auto it = memo.find(param);
        if (it != memo.end()) return it->second;
        std::map<std::string, double> reduced;
        double left = param;
        for (size_t i = 0; i < caps.size(); ++i) {
            double cut = std::min(left, caps[i]);
            reduced[cfg.channel[i]] = caps[i] - cut;
            left -= cut;
        }
        Network pert = net.with_capacities(reduced);
        auto aug = std::make_shared<AugmentedNetwork>(pert);
        auto policy = make_policy(aug);
        IntegrationConfig ic;
        ic.t_max = cfg.t_max;
        ic.sample_stride = cfg.sample_stride;
        ic.detect_equilibrium = true;
        auto traj = integrate(*policy, std::vector<double>(net.link_count(), 0.0), ic);
        double mu = throughput(traj, cfg.window_fraction);
        memo[param] = mu;
        return mu;
    };

    std::vector<ResiliencePoint> out;
    for (double delta : deltas) {
        double target = lam - delta - cfg.detect_margin;
        auto broken = [&](double param) { return measure(param) < target; };

        ResiliencePoint pt;
        pt.delta = delta;
        pt.nu_theory = std::isfinite(cg) ? std::max(0.0, cg - lam + delta) : kInf;
        if (broken(0.0)) {
            pt.nu_hat = 0.0;
            pt.param = 0.0;
            pt.throughput = measure(0.0);
        } else if (!broken(t_top)) {
            pt.nu_hat = kInf;
            pt.param = t_top;
            pt.throughput = measure(t_top);
        } else {
            double lo = 0, hi = t_top;
            while (hi - lo > cfg.bisect_tol) {
                double mid = 0.5 * (lo + hi);
                (broken(mid) ? hi : lo) = mid;
            }
            pt.nu_hat = hi;
            pt.param = hi;
            pt.throughput = measure(hi);
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace flownet

#include "flownet/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace flownet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double RoutingPolicy::outflow(int ae, std::span<const double> rho) const {
    std::vector<double> buf(net_->downstream(ae).size());
    evaluate(ae, rho, buf);
    double s = 0;
    for (double f : buf) s += f;
    return s;
}

std::vector<double> RoutingPolicy::split(int ae, std::span<const double> rho) const {
    std::vector<double> buf(net_->downstream(ae).size());
    evaluate(ae, rho, buf);
    return buf;
}

// ---------------------------------------------------------------------------
// softmax policy

namespace {

class SoftmaxPolicy final : public RoutingPolicy {
public:
    SoftmaxPolicy(std::shared_ptr<const AugmentedNetwork> net,
                  const std::map<std::string, double>& beta)
        : RoutingPolicy(std::move(net)) {
        const Network& base = net_->base();
        int m = base.link_count();
        beta_.assign(m, 1.0);
        for (const auto& [id, b] : beta) {
            if (b <= 0) throw std::invalid_argument("softmax: beta must be positive on '" + id + "'");
            beta_[base.link_index(id)] = b;
        }
        for (int e = 0; e < m; ++e)
            if (!base.capacity(e).is_finite())
                throw std::invalid_argument("softmax: link '" + base.link_id(e) +
                                            "' needs a finite capacity");
    }

    void evaluate(int ae, std::span<const double> rho, std::span<double> flows) const override {
        const AugmentedNetwork& net = *net_;
        const Network& base = net.base();
        const auto& down = net.downstream(ae);

        if (net.is_origin_link(ae)) {
            double lambda = base.inflow(net.attached_node(ae));
            softmax_over(ae, down, /*own=*/-1, rho, lambda, flows);
            return;
        }

        int e = ae;
        double cap = base.capacity(e).value();
        double phi_e = congestion_cost(ae, e, rho[e]);
        double lead = cap * (-std::expm1(-phi_e));  // C_e (1 - gamma_e)

        if (net.is_destination_link(down[0])) {
            // single virtual outlet; own buffer saturation is this link's
            // excluded point
            if (std::isinf(phi_e))
                throw RoutingDomainError(
                    "softmax: link '" + base.link_id(e) + "' evaluated at its saturation point",
                    ae);
            flows[0] = lead;
            return;
        }
        softmax_over(ae, down, e, rho, lead, flows);
    }

private:
    // flows[i] = scale * s_{down[i]} / sum_k s_k, the sum running over the
    // downstream links plus (when own >= 0) the link itself. Exponentials are
    // shifted by the smallest cost so saturated neighbours underflow to zero
    // instead of poisoning the ratio.
    void softmax_over(int ae, const std::vector<int>& down, int own, std::span<const double> rho,
                      double scale, std::span<double> flows) const {
        double phis[2 + 16];
        std::vector<double> phis_dyn;
        size_t n = down.size() + (own >= 0 ? 1 : 0);
        double* ph = phis;
        if (n > std::size(phis)) {
            phis_dyn.resize(n);
            ph = phis_dyn.data();
        }
        double m = kInf;
        for (size_t i = 0; i < down.size(); ++i) {
            ph[i] = congestion_cost(ae, down[i], rho[down[i]]);
            m = std::min(m, ph[i]);
        }
        if (own >= 0) {
            ph[down.size()] = congestion_cost(ae, own, rho[own]);
            m = std::min(m, ph[down.size()]);
        }
        if (std::isinf(m))
            throw RoutingDomainError("softmax: link '" + net_->aug_link_id(ae) +
                                         "' evaluated with every visible buffer saturated",
                                     ae);
        double z = 0;
        for (size_t i = 0; i < n; ++i) z += std::exp(-(ph[i] - m));
        for (size_t i = 0; i < down.size(); ++i)
            flows[i] = scale * std::exp(-(ph[i] - m)) / z;
    }

    // phi_e(rho): beta * rho / (B - rho) on finite buffers, beta * rho
    // otherwise; +inf at the buffer. Tiny excursions from integrator stages
    // are clamped, real ones are domain errors.
    double congestion_cost(int ae, int e, double r) const {
        const Network& base = net_->base();
        if (r < 0) {
            if (r < -1e-9) throw RoutingDomainError("softmax: negative density on link '" +
                                                        base.link_id(e) + "'", ae);
            r = 0;
        }
        const ExtReal& B = base.buffer(e);
        if (!B.is_finite()) return beta_[e] * r;
        double b = B.value();
        if (r >= b) {
            if (r > b + 1e-9 * std::max(1.0, b))
                throw RoutingDomainError("softmax: density above buffer on link '" +
                                             base.link_id(e) + "'", ae);
            return kInf;
        }
        return beta_[e] * r / (b - r);
    }

    std::vector<double> beta_;
};

}  // namespace

PolicyPtr make_softmax_policy(std::shared_ptr<const AugmentedNetwork> net,
                              const std::map<std::string, double>& beta) {
    return std::make_shared<SoftmaxPolicy>(std::move(net), beta);
}

// ---------------------------------------------------------------------------
// reference diamond family

namespace {

// Roles in the diamond: origin o with outlets L1 (to the branch node with two
// outlets) and L2; chord L3 from that branch node to the other; sinks L4, L5
// into the destination.
struct DiamondRoles {
    int l1, l2, l3, l4, l5;
    int origin_link;
};

DiamondRoles match_diamond(const AugmentedNetwork& net) {
    const Network& b = net.base();
    auto fail = [](const std::string& why) {
        throw std::invalid_argument("reference policy: network is not the diamond (" + why + ")");
    };
    if (b.node_count() != 4) fail("needs 4 nodes");
    if (b.link_count() != 5) fail("needs 5 links");
    if (b.origins().size() != 1) fail("needs exactly one origin");
    if (b.destinations().size() != 1) fail("needs exactly one destination");
    int o = b.origins()[0];
    int d = b.destinations()[0];
    if (b.out_links(o).size() != 2) fail("origin needs 2 outgoing links");

    int n1 = b.head(b.out_links(o)[0]);
    int n2 = b.head(b.out_links(o)[1]);
    if (n1 == n2 || n1 == d || n2 == d || n1 == o || n2 == o) fail("origin outlets must reach the two branch nodes");
    // branch node with two outlets first
    if (b.out_links(n1).size() == 1 && b.out_links(n2).size() == 2) std::swap(n1, n2);
    if (b.out_links(n1).size() != 2 || b.out_links(n2).size() != 1) fail("branch outlet counts");

    DiamondRoles r{};
    for (int e : b.out_links(o)) (b.head(e) == n1 ? r.l1 : r.l2) = e;
    for (int e : b.out_links(n1)) {
        if (b.head(e) == n2)
            r.l3 = e;
        else if (b.head(e) == d)
            r.l4 = e;
        else
            fail("first branch node must feed the second branch node and the destination");
    }
    int e5 = b.out_links(n2)[0];
    if (b.head(e5) != d) fail("second branch node must feed the destination");
    r.l5 = e5;
    r.origin_link = net.origin_link_of(o);
    return r;
}

class DiamondPolicy final : public RoutingPolicy {
public:
    DiamondPolicy(std::shared_ptr<const AugmentedNetwork> net, RefVariant variant,
                  std::vector<double> weights)
        : RoutingPolicy(std::move(net)), variant_(variant), roles_(match_diamond(*net_)) {
        const Network& b = net_->base();
        if (weights.empty()) {
            weights.resize(5);
            int idx[5] = {roles_.l1, roles_.l2, roles_.l3, roles_.l4, roles_.l5};
            for (int i = 0; i < 5; ++i) {
                if (!b.capacity(idx[i]).is_finite())
                    throw std::invalid_argument("reference policy: routing weights need finite capacities");
                weights[i] = b.capacity(idx[i]).value();
            }
        }
        if (weights.size() != 5) throw std::invalid_argument("reference policy: need 5 routing weights");
        w_ = {weights[0], weights[1], weights[2], weights[3], weights[4]};
        lambda_ = b.inflow(b.origins()[0]);
    }

    // Routing weights, ordered by role (origin outlets, chord, sinks). The
    // split ratios belong to the routing matrix and deliberately stay fixed
    // when capacities are perturbed.
    const std::array<double, 5>& weights() const { return w_; }

    void evaluate(int ae, std::span<const double> rho, std::span<double> flows) const override {
        const Network& b = net_->base();
        guard_domain(ae, rho);
        auto magnitude = [&](int e) {
            double c = b.capacity(e).value_or(kInf);
            return c * (-std::expm1(-rho[e]));  // C_e (1 - exp(-rho_e))
        };

        if (net_->is_origin_link(ae)) {
            double p1 = origin_share(rho);
            split_to(ae, {{roles_.l1, lambda_ * p1}, {roles_.l2, lambda_ * (1.0 - p1)}}, flows);
            return;
        }
        if (ae == roles_.l1) {
            auto [p3, p4] = chord_shares(rho);
            double out = magnitude(roles_.l1);
            split_to(ae, {{roles_.l3, out * p3}, {roles_.l4, out * p4}}, flows);
            return;
        }
        // single-outlet rows: all of the magnitude goes to the unique target
        flows[0] = magnitude(ae);
    }

private:
    // share of the origin flow sent to L1
    double origin_share(std::span<const double> rho) const {
        if (variant_ == RefVariant::R1) return w_[0] / (w_[0] + w_[1]);
        double r1 = rho[roles_.l1], r2 = rho[roles_.l2];
        double mn = std::min(r1, r2);
        double a = w_[0] * std::exp(-(r1 - mn)), c = w_[1] * std::exp(-(r2 - mn));
        return a / (a + c);
    }

    // Shares of L1's outflow sent to the chord L3 and the sink L4. R1 and R2
    // rows sum to one; under R3 the pair sums to the flow-control factor
    // (x3+x4)/(x1+x3+x4) < 1, holding the rest back in the queue, which is
    // what propagates downstream congestion toward the origin.
    std::pair<double, double> chord_shares(std::span<const double> rho) const {
        if (variant_ == RefVariant::R1) {
            double s = w_[2] + w_[3];
            return {w_[2] / s, w_[3] / s};
        }
        double r1 = rho[roles_.l1], r3 = rho[roles_.l3], r4 = rho[roles_.l4];
        if (variant_ == RefVariant::R2) {
            double mn = std::min(r3, r4);
            double a = w_[2] * std::exp(-(r3 - mn)), c = w_[3] * std::exp(-(r4 - mn));
            return {a / (a + c), c / (a + c)};
        }
        double mn = std::min({r1, r3, r4});
        // own-congestion weight: mean of the downstream weights, which reduces
        // to the reference coefficient 1 at the standard weights (1, 1)
        double wown = 0.5 * (w_[2] + w_[3]);
        double a1 = wown * std::exp(-(r1 - mn));
        double a3 = w_[2] * std::exp(-(r3 - mn));
        double a4 = w_[3] * std::exp(-(r4 - mn));
        return {a3 / (a1 + a3 + a4), a4 / (a1 + a3 + a4)};
    }

    void split_to(int ae, std::initializer_list<std::pair<int, double>> parts,
                  std::span<double> flows) const {
        const auto& down = net_->downstream(ae);
        for (auto [link, f] : parts) {
            auto it = std::find(down.begin(), down.end(), link);
            flows[it - down.begin()] = f;
        }
    }

    void guard_domain(int ae, std::span<const double> rho) const {
        const Network& b = net_->base();
        for (int e : net_->local_links(ae)) {
            double r = rho[e];
            if (r < -1e-9 || (b.buffer(e).is_finite() &&
                              r > b.buffer(e).value() * (1 + 1e-9) + 1e-12))
                throw RoutingDomainError("reference policy: density out of range on link '" +
                                             b.link_id(e) + "'", ae);
        }
    }

    RefVariant variant_;
    DiamondRoles roles_;
    std::array<double, 5> w_{};
    double lambda_ = 0;
};

}  // namespace

PolicyPtr make_reference_policy(std::shared_ptr<const AugmentedNetwork> net, RefVariant variant) {
    return std::make_shared<DiamondPolicy>(std::move(net), variant, std::vector<double>{});
}

PolicyPtr make_reference_policy(std::shared_ptr<const AugmentedNetwork> net, RefVariant variant,
                                std::vector<double> routing_weights) {
    return std::make_shared<DiamondPolicy>(std::move(net), variant, std::move(routing_weights));
}

std::vector<double> reference_routing_weights(const Network& net) {
    AugmentedNetwork aug(net);
    DiamondRoles roles = match_diamond(aug);
    std::vector<double> w(5);
    int idx[5] = {roles.l1, roles.l2, roles.l3, roles.l4, roles.l5};
    for (int i = 0; i < 5; ++i) {
        if (!net.capacity(idx[i]).is_finite())
            throw std::invalid_argument("reference policy: capacities must be finite");
        w[i] = net.capacity(idx[i]).value();
    }
    return w;
}

// ---------------------------------------------------------------------------
// axiom checks

namespace {

struct Sampler {
    const AugmentedNetwork& net;
    std::mt19937_64 rng;
    double interior_cap;

    double box_edge(int e) const {
        const ExtReal& B = net.base().buffer(e);
        return B.is_finite() ? B.value() : interior_cap;
    }
    // generic point in the local state box of ae
    std::vector<double> local_point(int ae) {
        std::vector<double> rho(net.real_link_count(), 0.0);
        for (int e : net.local_links(ae)) rho[e] = u01(rng) * box_edge(e);
        return rho;
    }
};

}  // namespace

bool AxiomReport::exact_pass() const {
    for (const auto& v : violations)
        if (!v.limit_form) return false;
    return true;
}

bool AxiomReport::limit_pass() const {
    for (const auto& v : violations)
        if (v.limit_form) return false;
    return true;
}

AxiomReport check_axioms(const RoutingPolicy& policy, const AxiomCheckConfig& cfg) {
    const AugmentedNetwork& net = policy.net();
    const Network& base = net.base();
    AxiomReport rep;
    Sampler smp{net, std::mt19937_64(cfg.seed), cfg.interior_cap};

    auto record = [&](const std::string& axiom, int ae, double mag, double thresh, bool limit) {
        auto& worst = limit ? rep.worst_limit : rep.worst_exact;
        worst = std::max(worst, mag);
        if (mag > thresh) rep.violations.push_back({axiom, net.aug_link_id(ae), mag, limit});
    };

    int routed = net.routed_link_count();
    int rounds = std::max(1, (cfg.samples + routed - 1) / routed);

    std::vector<double> flows;
    auto eval = [&](int ae, const std::vector<double>& rho) -> const std::vector<double>& {
        flows.assign(net.downstream(ae).size(), 0.0);
        policy.evaluate(ae, rho, flows);
        ++rep.samples;
        return flows;
    };

    for (int round = 0; round < rounds; ++round) {
        for (int ae = 0; ae < routed; ++ae) {
            const auto& down = net.downstream(ae);
            bool origin = net.is_origin_link(ae);
            double cap_scale =
                origin ? base.inflow(net.attached_node(ae)) : base.capacity(ae).value_or(1.0);

            // feasibility at a generic point: nonnegative parts, total within
            // capacity (exactly lambda_v for origin links)
            {
                auto rho = smp.local_point(ae);
                const auto& f = eval(ae, rho);
                double total = 0;
                for (size_t i = 0; i < f.size(); ++i) {
                    total += f[i];
                    record("negative-flow", ae, -f[i], cfg.tol, false);
                }
                if (origin)
                    record("origin", ae, std::abs(total - cap_scale),
                           cfg.tol * std::max(1.0, cap_scale), false);
                else if (base.capacity(ae).is_finite())
                    record("capacity", ae, total - base.capacity(ae).value(),
                           cfg.tol * std::max(1.0, cap_scale), false);
            }

            if (!origin) {
                int e = ae;
                // empty link sends nothing
                {
                    auto rho = smp.local_point(ae);
                    rho[e] = 0.0;
                    const auto& f = eval(ae, rho);
                    double total = 0;
                    for (double x : f) total += x;
                    record("empty-link", ae, std::abs(total), cfg.tol * std::max(1.0, cap_scale),
                           false);
                }
                // saturated link spills at full capacity; on unbounded buffers
                // this is only a limit statement, checked far out and reported
                // separately
                {
                    auto rho = smp.local_point(ae);
                    const ExtReal& B = base.buffer(e);
                    bool limit = !B.is_finite();
                    bool excluded_at_buffer = net.is_destination_link(down[0]);
                    if (limit)
                        rho[e] = cfg.lambda_big;
                    else
                        // the sink-link state box is open at the buffer
                        rho[e] = excluded_at_buffer ? B.value() * (1.0 - 1e-12) : B.value();
                    const auto& f = eval(ae, rho);
                    double total = 0;
                    for (double x : f) total += x;
                    double cap = base.capacity(e).value();
                    if (limit)
                        record("congested-self", ae, cap - total,
                               cfg.eps_limit * std::max(1.0, cap), true);
                    else
                        record("congested-self", ae, std::abs(total - cap),
                               cfg.tol * std::max(1.0, cap), false);
                }
            }

            // saturated downstream neighbours receive nothing
            for (size_t i = 0; i < down.size(); ++i) {
                int k = down[i];
                if (!net.is_real(k)) continue;
                auto rho = smp.local_point(ae);
                const ExtReal& Bk = base.buffer(k);
                bool limit = !Bk.is_finite();
                rho[k] = limit ? cfg.lambda_big : Bk.value();
                const auto& f = eval(ae, rho);
                if (limit)
                    record("congested-downstream", ae, f[i],
                           cfg.eps_limit * std::max(1.0, cap_scale), true);
                else
                    record("congested-downstream", ae, f[i], cfg.tol * std::max(1.0, cap_scale),
                           false);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// monotonicity

std::string to_string(MonotonicityClass c) {
    switch (c) {
        case MonotonicityClass::not_monotone: return "not monotone";
        case MonotonicityClass::monotone: return "monotone";
        case MonotonicityClass::strongly_monotone_sampled: return "strongly monotone (sampled)";
    }
    return "?";
}

MonotonicityReport check_monotonicity(const RoutingPolicy& policy, const MonotonicityConfig& cfg) {
    const AugmentedNetwork& net = policy.net();
    const Network& base = net.base();
    MonotonicityReport rep;
    rep.weakest_strict = kInf;
    Sampler smp{net, std::mt19937_64(cfg.seed), cfg.interior_cap};

    double h = cfg.fd_step;
    if (h <= 0) {
        double scale = 1.0;
        for (int e = 0; e < base.link_count(); ++e)
            if (base.buffer(e).is_finite()) scale = std::min(scale, base.buffer(e).value());
        h = 1e-5 * scale;
    }

    bool violation = false, all_strict = true;
    std::vector<double> fp, fmn;
    auto eval_into = [&](int ae, const std::vector<double>& rho, std::vector<double>& out) {
        out.assign(net.downstream(ae).size(), 0.0);
        policy.evaluate(ae, rho, out);
    };

    int routed = net.routed_link_count();
    int rounds = std::max(1, (cfg.samples + routed - 1) / routed);
    for (int round = 0; round < rounds; ++round) {
        for (int ae = 0; ae < routed; ++ae) {
            const auto& down = net.downstream(ae);
            const auto& local = net.local_links(ae);
            bool origin = net.is_origin_link(ae);

            // interior point, margins so central differences stay in the box
            auto rho = smp.local_point(ae);
            for (int e : local) {
                double edge = smp.box_edge(e);
                rho[e] = 2 * h + rho[e] / edge * (edge - 4 * h);
            }
            ++rep.samples;

            for (int k : local) {
                auto rp = rho, rm = rho;
                rp[k] += h;
                rm[k] -= h;
                eval_into(ae, rp, fp);
                eval_into(ae, rm, fmn);

                double dout = 0;
                for (size_t i = 0; i < down.size(); ++i) {
                    double d = (fp[i] - fmn[i]) / (2 * h);
                    dout += d;
                    if (down[i] == k) continue;  // own column of the split, no sign constraint here
                    // flow towards j responds non-negatively to every other
                    // visible density
                    if (d < -cfg.tol) {
                        violation = true;
                        rep.worst_violation = std::max(rep.worst_violation, -d);
                        rep.notes.push_back("d f(" + net.aug_link_id(ae) + "->" +
                                            net.aug_link_id(down[i]) + ") / d rho[" +
                                            base.link_id(k) + "] = " + std::to_string(d));
                    } else if (d < cfg.tol) {
                        all_strict = false;
                    } else {
                        rep.weakest_strict = std::min(rep.weakest_strict, d);
                    }
                }

                bool k_downstream = (!net.is_real(ae) || k != ae);
                if (k_downstream) {
                    // total outflow responds non-positively to downstream congestion
                    if (dout > cfg.tol) {
                        violation = true;
                        rep.worst_violation = std::max(rep.worst_violation, dout);
                        rep.notes.push_back("d outflow(" + net.aug_link_id(ae) + ") / d rho[" +
                                            base.link_id(k) + "] = " + std::to_string(dout));
                    } else if (!origin) {
                        // origin outflow is pinned to lambda_v, so strictness
                        // is only meaningful elsewhere
                        if (dout > -cfg.tol)
                            all_strict = false;
                        else
                            rep.weakest_strict = std::min(rep.weakest_strict, -dout);
                    }
                }
            }
        }
    }

    if (violation)
        rep.classification = MonotonicityClass::not_monotone;
    else if (all_strict)
        rep.classification = MonotonicityClass::strongly_monotone_sampled;
    else
        rep.classification = MonotonicityClass::monotone;
    if (!std::isfinite(rep.weakest_strict)) rep.weakest_strict = 0.0;
    return rep;
}

}  // namespace flownet

#include "doctest.h"
#include "helpers.hpp"

#include "flownet/dynamics.hpp"
#include "flownet/routing.hpp"

#include <cmath>
#include <random>

using namespace flownet;
using testutil::diamond_aug;
using testutil::diamond_spec;
using testutil::link;

namespace {

std::shared_ptr<const AugmentedNetwork> single_link(double cap, double buffer = -1) {
    NetworkSpec s;
    s.nodes = {"o", "d"};
    s.links = {link("e", "o", "d", cap, buffer)};
    s.inflows = {{"o", 1.0}};
    return std::make_shared<AugmentedNetwork>(Network(s));
}

// deliberately broken wrapper: scales every flow, so it overshoots both the
// origin rate and the capacity bound
class OverflowPolicy final : public RoutingPolicy {
public:
    OverflowPolicy(PolicyPtr inner, double scale)
        : RoutingPolicy(inner->net_ptr()), inner_(std::move(inner)), scale_(scale) {}
    void evaluate(int ae, std::span<const double> rho, std::span<double> flows) const override {
        inner_->evaluate(ae, rho, flows);
        for (auto& f : flows) f *= scale_;
    }

private:
    PolicyPtr inner_;
    double scale_;
};

// anti-monotone: routes proportionally MORE flow to the fuller downstream link
class GreedyWrongPolicy final : public RoutingPolicy {
public:
    explicit GreedyWrongPolicy(std::shared_ptr<const AugmentedNetwork> net)
        : RoutingPolicy(std::move(net)) {}
    void evaluate(int ae, std::span<const double> rho, std::span<double> flows) const override {
        const auto& down = net_->downstream(ae);
        double scale;
        if (net_->is_origin_link(ae)) {
            scale = net_->base().inflow(net_->attached_node(ae));
        } else {
            scale = net_->base().capacity(ae).value() * (-std::expm1(-rho[ae]));
        }
        if (down.size() == 1 && net_->is_destination_link(down[0])) {
            flows[0] = scale;
            return;
        }
        double total = 0;
        for (int j : down) total += 1.0 + rho[j];
        for (size_t i = 0; i < down.size(); ++i)
            flows[i] = scale * (1.0 + rho[down[i]]) / total;
    }
};

}  // namespace

TEST_CASE("softmax flows on a single link") {
    auto net = single_link(1.5);
    auto pol = make_softmax_policy(net);
    std::vector<double> rho = {1.0};
    // lone real outlet: C (1 - e^{-rho}) with the default unit sensitivity
    CHECK(pol->outflow(0, rho) == doctest::Approx(1.5 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    // the origin link forwards the exogenous rate exactly, at any density
    int eo = net->origin_link_of(net->base().node_index("o"));
    CHECK(pol->outflow(eo, rho) == doctest::Approx(1.0).epsilon(1e-14));
    rho[0] = 3.7;
    CHECK(pol->outflow(eo, rho) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("softmax refuses unbounded capacities and saturated states") {
    auto s = diamond_spec();
    s.links[0].capacity = ExtReal::unbounded();
    auto aug = std::make_shared<AugmentedNetwork>(Network(s));
    CHECK_THROWS_AS(make_softmax_policy(aug), std::invalid_argument);

    auto net = single_link(1.0, /*buffer=*/1.0);
    auto pol = make_softmax_policy(net);
    std::vector<double> at_buffer = {1.0};
    CHECK_THROWS_AS(pol->outflow(0, at_buffer), RoutingDomainError);

    CHECK_THROWS_AS(make_softmax_policy(single_link(1.0), {{"e", -1.0}}), std::invalid_argument);
}

TEST_CASE("reference policy splits") {
    auto aug = diamond_aug();
    const Network& b = aug->base();
    int l1 = b.link_index("l1");
    int eo = aug->origin_link_of(b.node_index("a"));
    double out1 = 2.0 * (1.0 - std::exp(-1.0));  // C_1 (1 - e^{-rho_1}) at rho_1 = 1

    SUBCASE("fixed split ignores congestion") {
        auto pol = make_reference_policy(aug, RefVariant::R1);
        std::vector<double> rho = {1.0, 0.7, 0.3, 0.2, 0.0};
        auto f = pol->split(l1, rho);
        REQUIRE(f.size() == 2);
        CHECK(f[0] == doctest::Approx(out1 / 2).epsilon(1e-14));
        CHECK(f[1] == doctest::Approx(out1 / 2).epsilon(1e-14));
        // origin split 2/3 : 1/3 of lambda = 2
        auto fo = pol->split(eo, rho);
        REQUIRE(fo.size() == 2);
        CHECK(fo[0] == doctest::Approx(4.0 / 3).epsilon(1e-14));
        CHECK(fo[1] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    }
    SUBCASE("responsive split reroutes by relative congestion, row-stochastic") {
        auto pol = make_reference_policy(aug, RefVariant::R2);
        std::vector<double> rho = {1.0, 0.0, 0.0, 0.0, 0.0};
        auto f = pol->split(l1, rho);
        CHECK(f[0] == doctest::Approx(out1 / 2).epsilon(1e-14));
        CHECK(f[1] == doctest::Approx(out1 / 2).epsilon(1e-14));
        // filling l3 pushes the split toward l4 but the row still sums to out1
        rho[2] = 2.0;
        f = pol->split(l1, rho);
        double p3 = std::exp(-2.0) / (std::exp(-2.0) + 1.0);
        CHECK(f[0] == doctest::Approx(out1 * p3).epsilon(1e-12));
        CHECK(f[0] + f[1] == doctest::Approx(out1).epsilon(1e-12));
        CHECK(f[0] < f[1]);
    }
    SUBCASE("throttled split holds flow back under downstream congestion") {
        auto pol = make_reference_policy(aug, RefVariant::R3);
        std::vector<double> rho = {1.0, 0.0, 0.0, 0.0, 0.0};
        auto f = pol->split(l1, rho);
        // shares x_j / (x_1 + x_3 + x_4) with x = e^{-rho}: substochastic row
        double share = 1.0 / (std::exp(-1.0) + 2.0);
        CHECK(f[0] == doctest::Approx(out1 * share).epsilon(1e-12));
        CHECK(f[1] == doctest::Approx(out1 * share).epsilon(1e-12));
        CHECK(f[0] + f[1] < out1);
        // the held-back fraction grows with downstream congestion
        rho[2] = rho[3] = 3.0;
        auto g = pol->split(l1, rho);
        CHECK((g[0] + g[1]) / out1 < (f[0] + f[1]) / out1);
    }
    SUBCASE("origin row of the responsive variants at rest") {
        for (auto v : {RefVariant::R2, RefVariant::R3}) {
            auto pol = make_reference_policy(aug, v);
            std::vector<double> rho(5, 0.0);
            auto fo = pol->split(eo, rho);
            // 2 e^{-rho_1} : e^{-rho_2} weighting gives 2/3 : 1/3 at zero
            CHECK(fo[0] == doctest::Approx(4.0 / 3).epsilon(1e-14));
            CHECK(fo[1] == doctest::Approx(2.0 / 3).epsilon(1e-14));
        }
    }
}

TEST_CASE("reference policy at rest gives the expected initial rates") {
    auto aug = diamond_aug();
    auto pol = make_reference_policy(aug, RefVariant::R1);
    std::vector<double> rho(5, 0.0), fin(5), fout(5);
    flow_balance(*pol, rho, fin, fout);
    CHECK(fin[0] == doctest::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(fin[1] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(fin[2] == 0.0);
    CHECK(fin[3] == 0.0);
    CHECK(fin[4] == 0.0);
    for (double f : fout) CHECK(f == 0.0);  // phi(0) = 0: nothing moves yet
}

TEST_CASE("reference policy requires the diamond topology") {
    NetworkSpec s;
    s.nodes = {"o", "d"};
    s.links = {link("e", "o", "d", 1)};
    s.inflows = {{"o", 1.0}};
    auto aug = std::make_shared<AugmentedNetwork>(Network(s));
    CHECK_THROWS_AS(make_reference_policy(aug, RefVariant::R1), std::invalid_argument);

    auto weights = reference_routing_weights(Network(diamond_spec()));
    CHECK(weights == std::vector<double>{2, 1, 1, 1, 3});
    CHECK_THROWS_AS(reference_routing_weights(Network(s)), std::invalid_argument);
}

TEST_CASE("perturbed copies keep the original routing weights") {
    Network base{diamond_spec()};
    auto weights = reference_routing_weights(base);
    // sever both chord outlets: deriving weights from these capacities would
    // leave the fixed split 0/0, so the originals must carry over
    auto cut = std::make_shared<AugmentedNetwork>(
        base.with_capacities({{"l3", 0.0}, {"l4", 0.0}}));
    auto pol = make_reference_policy(cut, RefVariant::R1, weights);
    std::vector<double> rho = {1.0, 0.0, 0.0, 0.0, 0.0};
    auto f = pol->split(cut->base().link_index("l1"), rho);
    REQUIRE(f.size() == 2);
    // split ratios unchanged (l1's own capacity was not perturbed)
    double out1 = 2.0 * (1.0 - std::exp(-1.0));
    CHECK(f[0] == doctest::Approx(out1 / 2).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(out1 / 2).epsilon(1e-14));
}

TEST_CASE("axioms hold for the shipped policies") {
    auto aug = diamond_aug();
    AxiomCheckConfig cfg;
    cfg.samples = 400;
    for (auto make : {+[](std::shared_ptr<const AugmentedNetwork> n) { return make_softmax_policy(n); },
                      +[](std::shared_ptr<const AugmentedNetwork> n) { return make_reference_policy(n, RefVariant::R1); },
                      +[](std::shared_ptr<const AugmentedNetwork> n) { return make_reference_policy(n, RefVariant::R2); },
                      +[](std::shared_ptr<const AugmentedNetwork> n) { return make_reference_policy(n, RefVariant::R3); }}) {
        auto rep = check_axioms(*make(aug), cfg);
        CHECK(rep.exact_pass());
        CHECK(rep.worst_exact <= 1e-12);
        CHECK(rep.samples > 0);
    }
}

TEST_CASE("axiom checker catches a policy that overdrives its links") {
    auto aug = diamond_aug();
    OverflowPolicy bad(make_softmax_policy(aug), 1.25);
    auto rep = check_axioms(bad, AxiomCheckConfig{.samples = 300});
    CHECK_FALSE(rep.exact_pass());
    CHECK(rep.worst_exact > 1e-6);
    bool saw_origin = false, saw_capacity = false;
    for (const auto& v : rep.violations) {
        if (v.axiom == "origin") saw_origin = true;
        if (v.axiom == "capacity") saw_capacity = true;
    }
    CHECK(saw_origin);
    CHECK(saw_capacity);
}

TEST_CASE("monotonicity classes of the shipped policies") {
    auto aug = diamond_aug();
    MonotonicityConfig cfg;
    cfg.samples = 120;

    auto soft = check_monotonicity(*make_softmax_policy(aug), cfg);
    CHECK(soft.classification == MonotonicityClass::strongly_monotone_sampled);
    CHECK(soft.worst_violation <= cfg.tol);

    // the reference family has hard-wired rows, so some partials are exactly
    // zero: monotone but not strictly
    for (auto v : {RefVariant::R1, RefVariant::R2, RefVariant::R3}) {
        auto rep = check_monotonicity(*make_reference_policy(aug, v), cfg);
        CHECK(rep.classification == MonotonicityClass::monotone);
        CHECK(rep.worst_violation <= cfg.tol);
    }

    GreedyWrongPolicy wrong(aug);
    auto rep = check_monotonicity(wrong, cfg);
    CHECK(rep.classification == MonotonicityClass::not_monotone);
    CHECK(rep.worst_violation > cfg.tol);
    CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("flows respect nonnegativity and the capacity bound everywhere sampled") {
    auto aug = diamond_aug();
    const Network& b = aug->base();
    std::mt19937_64 rng(99);
    auto u01 = [&] { return (rng() >> 11) * 0x1.0p-53; };
    for (auto v : {RefVariant::R1, RefVariant::R2, RefVariant::R3}) {
        auto pol = make_reference_policy(aug, v);
        for (int it = 0; it < 200; ++it) {
            std::vector<double> rho(5);
            for (auto& r : rho) r = 5.0 * u01();
            for (int ae = 0; ae < aug->routed_link_count(); ++ae) {
                auto f = pol->split(ae, rho);
                double total = 0;
                for (double x : f) {
                    CHECK(x >= 0.0);
                    total += x;
                }
                if (aug->is_origin_link(ae))
                    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
                else
                    CHECK(total <= b.capacity(ae).value() + 1e-12);
            }
        }
    }
}

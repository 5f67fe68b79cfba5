#include "doctest.h"
#include "helpers.hpp"

#include "flownet/cuts.hpp"
#include "flownet/properties.hpp"

#include <cmath>
#include <set>

using namespace flownet;
using testutil::diamond_spec;
using testutil::link;

namespace {

std::set<std::string> node_ids(const Network& net, const std::vector<int>& nodes) {
    std::set<std::string> out;
    for (int v : nodes) out.insert(net.node_id(v));
    return out;
}

}  // namespace

TEST_CASE("diamond enumeration finds both worst cuts") {
    Network net{diamond_spec()};
    auto res = enumerate_violations(net);
    CHECK(res.best == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(res.cuts_examined == 7);  // 2^3 - 1 subsets of {a,b,c}
    REQUIRE(res.maximizers.size() == 2);
    CHECK(node_ids(net, res.maximizers[0].nodes) == std::set<std::string>{"a"});
    CHECK(node_ids(net, res.maximizers[1].nodes) == std::set<std::string>{"a", "b"});
    CHECK(res.maximizers[0].inflow == doctest::Approx(2.0));
    CHECK(res.maximizers[0].capacity == doctest::Approx(3.0));
    CHECK(res.maximizers[1].capacity == doctest::Approx(3.0));
    CHECK(node_ids(net, res.union_nodes) == std::set<std::string>{"a", "b"});
}

TEST_CASE("max-flow agrees with enumeration and recovers the union") {
    Network net{diamond_spec()};
    CHECK(max_violation_maxflow(net) == doctest::Approx(-1.0).epsilon(1e-15));
    auto res = max_violation_cut(net);
    CHECK(res.best == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(node_ids(net, res.union_nodes) == std::set<std::string>{"a", "b"});
    // dispatcher picks enumeration at this size
    auto d = cut_search(net);
    CHECK(d.best == res.best);
    CHECK(d.maximizers.size() == 2);
}

TEST_CASE("a chain overloads at its joint cut") {
    NetworkSpec s;
    s.nodes = {"u", "v", "d"};
    s.links = {link("e1", "u", "v", 5), link("e2", "v", "d", 2)};
    s.inflows = {{"u", 1.0}};
    Network net(s);
    auto res = enumerate_violations(net);
    CHECK(res.best == doctest::Approx(-1.0));  // {u}: -4, {v}: -2, {u,v}: -1
    REQUIRE(res.maximizers.size() == 1);
    CHECK(node_ids(net, res.maximizers[0].nodes) == std::set<std::string>{"u", "v"});
    CHECK(max_violation_maxflow(net) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("ties at zero violation make the union a maximizer") {
    Network net{diamond_spec(/*lambda=*/3.0)};
    auto res = enumerate_violations(net);
    CHECK(res.best == doctest::Approx(0.0));
    REQUIRE(res.maximizers.size() == 2);
    CHECK(node_ids(net, res.union_nodes) == std::set<std::string>{"a", "b"});
    CHECK(cut_violation(net, res.union_nodes) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("min-cut capacity to the destinations") {
    Network net{diamond_spec()};
    CHECK(min_cut_capacity(net) == doctest::Approx(3.0).epsilon(1e-15));
    auto cut = net.with_capacities({{"l3", 0.0}, {"l4", 0.5}});
    CHECK(min_cut_capacity(cut) == doctest::Approx(1.5).epsilon(1e-15));

    NetworkSpec s;
    s.nodes = {"o", "d"};
    LinkSpec l;
    l.id = "e";
    l.tail = "o";
    l.head = "d";
    l.capacity = ExtReal::unbounded();
    s.links = {l};
    s.inflows = {{"o", 1.0}};
    CHECK(std::isinf(min_cut_capacity(Network(s))));

    NetworkSpec chain;
    chain.nodes = {"u", "v", "d"};
    chain.links = {link("e1", "u", "v", 5), link("e2", "v", "d", 2)};
    chain.inflows = {{"u", 1.0}};
    CHECK(min_cut_capacity(Network(chain)) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("unbounded boundaries never win") {
    auto s = diamond_spec();
    s.links[3].capacity = ExtReal::unbounded();  // l4 leaves {a,b}
    Network net(s);
    auto res = enumerate_violations(net);
    // {a} is untouched; {a,b} now has unbounded capacity and drops out
    CHECK(res.best == doctest::Approx(-1.0));
    REQUIRE(res.maximizers.size() == 1);
    CHECK(node_ids(net, res.maximizers[0].nodes) == std::set<std::string>{"a"});
    CHECK(max_violation_maxflow(net) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("enumeration and max-flow agree on random instances") {
    RandomNetworkOptions opt;
    opt.min_nodes = 4;
    opt.max_nodes = 9;

    SUBCASE("dyadic data agrees exactly") {
        for (int i = 0; i < 25; ++i) {
            std::mt19937_64 rng(500 + i);
            Network net = random_network(rng, opt);
            auto en = enumerate_violations(net);
            double mf = max_violation_maxflow(net);
            CHECK(en.best == mf);  // sums of 1/8-grid values add without rounding
            auto mc = max_violation_cut(net);
            CHECK(mc.best == en.best);
            CHECK(node_ids(net, mc.union_nodes) == node_ids(net, en.union_nodes));
        }
    }
    SUBCASE("continuous data agrees to rounding") {
        opt.dyadic = false;
        for (int i = 0; i < 25; ++i) {
            std::mt19937_64 rng(900 + i);
            Network net = random_network(rng, opt);
            auto en = enumerate_violations(net);
            CHECK(std::abs(en.best - max_violation_maxflow(net)) <= 1e-12);
        }
    }
}

#pragma once

#include "flownet/graph.hpp"

#include <memory>
#include <string>
#include <vector>

namespace testutil {

inline flownet::LinkSpec link(std::string id, std::string tail, std::string head, double cap,
                              double buffer = -1) {
    flownet::LinkSpec l;
    l.id = std::move(id);
    l.tail = std::move(tail);
    l.head = std::move(head);
    l.capacity = flownet::ExtReal::finite(cap);
    if (buffer > 0) l.buffer = flownet::ExtReal::finite(buffer);
    return l;
}

// Five-link diamond: a feeds b and c, b feeds c and d, c feeds d. The worst
// cuts are {a} and {a,b}, both with violation 2 - 3 = -1.
inline flownet::NetworkSpec diamond_spec(double lambda = 2.0) {
    flownet::NetworkSpec s;
    s.nodes = {"a", "b", "c", "d"};
    s.links = {link("l1", "a", "b", 2), link("l2", "a", "c", 1), link("l3", "b", "c", 1),
               link("l4", "b", "d", 1), link("l5", "c", "d", 3)};
    s.inflows = {{"a", lambda}};
    return s;
}

inline std::shared_ptr<const flownet::AugmentedNetwork> diamond_aug(double lambda = 2.0) {
    return std::make_shared<flownet::AugmentedNetwork>(flownet::Network(diamond_spec(lambda)));
}

inline std::vector<int> indices(const flownet::Network& net,
                                const std::vector<std::string>& node_ids) {
    std::vector<int> out;
    for (const auto& id : node_ids) out.push_back(net.node_index(id));
    return out;
}

}  // namespace testutil

#include "flownet/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace flownet {

std::string ValidationReport::summary() const {
    if (issues.empty()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << issues[i].code << "(" << issues[i].subject << "): " << issues[i].detail;
    }
    return os.str();
}

ValidationError::ValidationError(ValidationReport r)
    : std::runtime_error("invalid network: " + r.summary()), report(std::move(r)) {}

namespace {

// Strong connectivity of the augmentation == every node reaches the world node
// and is reached from it. One BFS forward from the world, one on reversed arcs.
bool augmentation_strongly_connected(const NetworkSpec& spec,
                                     const std::map<std::string, int>& node_of,
                                     const std::vector<char>& is_dest,
                                     const std::vector<char>& is_origin) {
    int n = static_cast<int>(spec.nodes.size());
    int world = n;
    std::vector<std::vector<int>> fwd(n + 1), rev(n + 1);
    auto add = [&](int a, int b) {
        fwd[a].push_back(b);
        rev[b].push_back(a);
    };
    for (const auto& l : spec.links) {
        auto it = node_of.find(l.tail);
        auto jt = node_of.find(l.head);
        if (it == node_of.end() || jt == node_of.end()) continue;  // reported separately
        add(it->second, jt->second);
    }
    for (int v = 0; v < n; ++v) {
        if (is_origin[v]) add(world, v);
        if (is_dest[v]) add(v, world);
    }
    auto bfs = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(n + 1, 0);
        std::queue<int> q;
        q.push(world);
        seen[world] = 1;
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    q.push(w);
                }
        }
        return count == n + 1;
    };
    return bfs(fwd) && bfs(rev);
}

ValidationReport validate_impl(const NetworkSpec& spec, bool allow_zero_capacity) {
    ValidationReport rep;
    auto issue = [&](std::string code, std::string subject, std::string detail) {
        rep.issues.push_back({std::move(code), std::move(subject), std::move(detail)});
    };

    if (spec.nodes.empty()) issue("empty-network", "", "no nodes");

    std::map<std::string, int> node_of;
    for (size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto& id = spec.nodes[i];
        if (id == kWorldNodeId)
            issue("reserved-node-id", id, "world node id is reserved for augmentation");
        if (!node_of.emplace(id, static_cast<int>(i)).second)
            issue("duplicate-node", id, "node id appears more than once");
    }

    std::set<std::string> link_ids;
    int n = static_cast<int>(spec.nodes.size());
    std::vector<char> has_out(std::max(n, 1), 0);
    for (const auto& l : spec.links) {
        if (!link_ids.insert(l.id).second)
            issue("duplicate-link", l.id, "link id appears more than once");
        auto t = node_of.find(l.tail);
        auto h = node_of.find(l.head);
        if (t == node_of.end()) issue("unknown-node", l.id, "tail '" + l.tail + "' is not a node");
        if (h == node_of.end()) issue("unknown-node", l.id, "head '" + l.head + "' is not a node");
        if (t != node_of.end() && h != node_of.end() && t->second == h->second)
            issue("self-loop", l.id, "tail equals head");
        if (l.capacity.is_finite()) {
            double c = l.capacity.value();
            if (c < 0.0 || (!allow_zero_capacity && c == 0.0))
                issue("nonpositive-capacity", l.id, "capacity must be positive or unbounded");
        }
        if (l.buffer.is_finite() && l.buffer.value() <= 0.0)
            issue("nonpositive-buffer", l.id, "buffer must be positive or unbounded");
        if (t != node_of.end()) has_out[t->second] = 1;
    }

    std::vector<char> is_dest(std::max(n, 1), 0), is_origin(std::max(n, 1), 0);
    bool any_dest = false;
    for (int v = 0; v < n; ++v) {
        is_dest[v] = !has_out[v];
        any_dest |= is_dest[v];
    }
    if (!any_dest && n > 0) issue("no-destination", "", "every node has outgoing links");

    // an inflow entry designates an origin even at rate zero; the origin set
    // is structure, the rates are data
    bool any_origin = false;
    for (const auto& [id, lam] : spec.inflows) {
        auto it = node_of.find(id);
        if (it == node_of.end()) {
            issue("unknown-node", id, "inflow keyed on unknown node");
            continue;
        }
        if (lam < 0) issue("negative-inflow", id, "inflow rates are nonnegative");
        if (is_dest[it->second])
            issue("inflow-on-destination", id, "inflow support must avoid destinations");
        is_origin[it->second] = 1;
        any_origin = true;
    }
    if (!any_origin) issue("no-origin", "", "no inflow entry designates an origin");

    if (rep.ok() && !augmentation_strongly_connected(spec, node_of, is_dest, is_origin))
        issue("not-strongly-connected", "",
              "augmented network is not strongly connected (some node misses a path to a "
              "destination or from an origin)");

    return rep;
}

}  // namespace

ValidationReport validate(const NetworkSpec& spec) { return validate_impl(spec, false); }

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    auto rep = validate_impl(spec_, false);
    if (!rep.ok()) throw ValidationError(std::move(rep));
    build_index();
}

Network::Network(NetworkSpec spec, Perturbed) : spec_(std::move(spec)) {
    auto rep = validate_impl(spec_, true);
    if (!rep.ok()) throw ValidationError(std::move(rep));
    build_index();
}

void Network::build_index() {
    int n = static_cast<int>(spec_.nodes.size());
    node_ids_ = spec_.nodes;
    for (int v = 0; v < n; ++v) node_index_[node_ids_[v]] = v;
    out_.assign(n, {});
    in_.assign(n, {});
    inflow_.assign(n, 0.0);
    is_destination_.assign(n, false);

    for (const auto& l : spec_.links) {
        int e = static_cast<int>(link_ids_.size());
        link_ids_.push_back(l.id);
        link_index_[l.id] = e;
        int t = node_index_.at(l.tail), h = node_index_.at(l.head);
        tail_.push_back(t);
        head_.push_back(h);
        capacity_.push_back(l.capacity);
        buffer_.push_back(l.buffer);
        out_[t].push_back(e);
        in_[h].push_back(e);
    }
    std::vector<char> listed(n, 0);
    for (const auto& [id, lam] : spec_.inflows) {
        inflow_[node_index_.at(id)] = lam;
        listed[node_index_.at(id)] = 1;
    }
    for (int v = 0; v < n; ++v) {
        total_inflow_ += inflow_[v];
        if (out_[v].empty()) {
            is_destination_[v] = true;
            destinations_.push_back(v);
        } else {
            non_destinations_.push_back(v);
        }
        if (listed[v]) origins_.push_back(v);
    }
}

int Network::node_index(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw std::out_of_range("unknown node id '" + id + "'");
    return it->second;
}

int Network::link_index(const std::string& id) const {
    auto it = link_index_.find(id);
    if (it == link_index_.end()) throw std::out_of_range("unknown link id '" + id + "'");
    return it->second;
}

Network Network::with_capacities(const std::map<std::string, double>& overrides) const {
    NetworkSpec s = spec_;
    for (const auto& [id, c] : overrides) {
        bool found = false;
        for (auto& l : s.links)
            if (l.id == id) {
                l.capacity = ExtReal::finite(c);
                found = true;
            }
        if (!found) throw std::out_of_range("capacity override for unknown link '" + id + "'");
    }
    return Network(std::move(s), Perturbed{});
}

AugmentedNetwork::AugmentedNetwork(Network base) : base_(std::move(base)) {
    m_ = base_.link_count();
    const auto& orig = base_.origins();
    const auto& dest = base_.destinations();
    norigin_ = static_cast<int>(orig.size());
    ndest_ = static_cast<int>(dest.size());

    int total = aug_link_count();
    aug_tail_.resize(total);
    aug_head_.resize(total);
    attached_.assign(total, -1);
    for (int e = 0; e < m_; ++e) {
        aug_tail_[e] = base_.tail(e);
        aug_head_[e] = base_.head(e);
    }
    for (int i = 0; i < norigin_; ++i) {
        int ae = m_ + i;
        aug_tail_[ae] = world_node();
        aug_head_[ae] = orig[i];
        attached_[ae] = orig[i];
        origin_link_[orig[i]] = ae;
    }
    for (int i = 0; i < ndest_; ++i) {
        int ae = m_ + norigin_ + i;
        aug_tail_[ae] = dest[i];
        aug_head_[ae] = world_node();
        attached_[ae] = dest[i];
        dest_link_[dest[i]] = ae;
    }

    downstream_.resize(total);
    local_.resize(total);
    for (int ae = 0; ae < routed_link_count(); ++ae) {
        int head = aug_head_[ae];
        if (base_.is_destination(head)) {
            downstream_[ae] = {dest_link_.at(head)};
        } else {
            downstream_[ae] = base_.out_links(head);
        }
        if (is_real(ae)) local_[ae].push_back(ae);
        for (int j : downstream_[ae])
            if (j < m_) local_[ae].push_back(j);
    }
}

int AugmentedNetwork::origin_link_of(int v) const {
    auto it = origin_link_.find(v);
    if (it == origin_link_.end())
        throw std::invalid_argument("node '" + base_.node_id(v) + "' is not an origin");
    return it->second;
}

int AugmentedNetwork::dest_link_of(int d) const {
    auto it = dest_link_.find(d);
    if (it == dest_link_.end())
        throw std::invalid_argument("node '" + base_.node_id(d) + "' is not a destination");
    return it->second;
}

std::string AugmentedNetwork::aug_link_id(int ae) const {
    if (is_real(ae)) return base_.link_id(ae);
    if (is_origin_link(ae)) return "@origin:" + base_.node_id(attached_[ae]);
    return "@dest:" + base_.node_id(attached_[ae]);
}

namespace {

std::vector<char> cut_mask(const Network& net, std::span<const int> cut_nodes) {
    if (cut_nodes.empty()) throw std::invalid_argument("cut must be a nonempty node set");
    std::vector<char> in_cut(net.node_count(), 0);
    for (int v : cut_nodes) {
        if (v < 0 || v >= net.node_count())
            throw std::invalid_argument("cut node index out of range");
        if (net.is_destination(v))
            throw std::invalid_argument("cut may not contain destination '" + net.node_id(v) +
                                        "'");
        in_cut[v] = 1;
    }
    return in_cut;
}

}  // namespace

CutSets cut_sets(const Network& net, std::span<const int> cut_nodes) {
    auto in_cut = cut_mask(net, cut_nodes);
    CutSets cs;
    for (int e = 0; e < net.link_count(); ++e) {
        bool t = in_cut[net.tail(e)], h = in_cut[net.head(e)];
        if (t) cs.out_links.push_back(e);
        if (h) cs.in_links.push_back(e);
        if (t && !h) cs.boundary_out.push_back(e);
        if (!t && h) cs.boundary_in.push_back(e);
    }
    return cs;
}

ExtReal cut_capacity(const Network& net, std::span<const int> cut_nodes) {
    auto in_cut = cut_mask(net, cut_nodes);
    ExtReal total = ExtReal::finite(0.0);
    for (int e = 0; e < net.link_count(); ++e)
        if (in_cut[net.tail(e)] && !in_cut[net.head(e)]) total += net.capacity(e);
    return total;
}

double cut_inflow(const Network& net, std::span<const int> cut_nodes) {
    auto in_cut = cut_mask(net, cut_nodes);
    double total = 0.0;
    for (int v = 0; v < net.node_count(); ++v)
        if (in_cut[v]) total += net.inflow(v);
    return total;
}

double cut_violation(const Network& net, std::span<const int> cut_nodes) {
    ExtReal cap = cut_capacity(net, cut_nodes);
    if (!cap.is_finite()) return -std::numeric_limits<double>::infinity();
    return cut_inflow(net, cut_nodes) - cap.value();
}

ExtReal directed_capacity(const Network& net, std::span<const int> from,
                          std::span<const int> to) {
    std::vector<char> a(net.node_count(), 0), b(net.node_count(), 0);
    for (int v : from) a.at(v) = 1;
    for (int v : to) b.at(v) = 1;
    ExtReal total = ExtReal::finite(0.0);
    for (int e = 0; e < net.link_count(); ++e)
        if (a[net.tail(e)] && b[net.head(e)]) total += net.capacity(e);
    return total;
}

}  // namespace flownet

#include "flownet/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace flownet {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError("scenario: " + what); }

[[noreturn]] void invalid(const std::string& code, const std::string& subject,
                          const std::string& detail) {
    throw ValidationError(ValidationReport{{{code, subject, detail}}});
}

ExtReal ext_from(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return ExtReal::unbounded();
        bad(where + ": expected a number or \"inf\"");
    }
    if (!j.is_number()) bad(where + ": expected a number or \"inf\"");
    return ExtReal::finite(j.get<double>());
}

json ext_to(const ExtReal& x) {
    if (x.is_finite()) return x.value();
    return "inf";
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where + ": expected a number");
    return j.get<double>();
}

template <typename T>
void opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string(key) + ": wrong type");
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");

    Scenario sc;

    // ---- network ----
    if (!j.contains("network") || !j["network"].is_object()) bad("missing \"network\" object");
    const json& jn = j["network"];
    if (!jn.contains("nodes") || !jn["nodes"].is_array()) bad("network.nodes must be an array");
    for (const auto& n : jn["nodes"]) {
        if (!n.is_string()) bad("network.nodes entries must be strings");
        sc.network.nodes.push_back(n.get<std::string>());
    }
    if (!jn.contains("links") || !jn["links"].is_array()) bad("network.links must be an array");
    for (const auto& jl : jn["links"]) {
        if (!jl.is_object()) bad("network.links entries must be objects");
        LinkSpec l;
        for (const char* k : {"id", "tail", "head"})
            if (!jl.contains(k) || !jl.at(k).is_string())
                bad(std::string("link field \"") + k + "\" must be a string");
        l.id = jl["id"].get<std::string>();
        l.tail = jl["tail"].get<std::string>();
        l.head = jl["head"].get<std::string>();
        if (!jl.contains("capacity")) bad("link '" + l.id + "': missing capacity");
        l.capacity = ext_from(jl["capacity"], "link '" + l.id + "' capacity");
        if (jl.contains("buffer")) l.buffer = ext_from(jl["buffer"], "link '" + l.id + "' buffer");
        sc.network.links.push_back(std::move(l));
    }
    if (jn.contains("inflows")) {
        if (!jn["inflows"].is_object()) bad("network.inflows must be an object");
        for (const auto& [k, v] : jn["inflows"].items())
            sc.network.inflows[k] = num(v, "inflow '" + k + "'");
    }

    // ---- policy ----
    if (j.contains("policy")) {
        const json& jp = j["policy"];
        if (!jp.is_object() || !jp.contains("type") || !jp["type"].is_string())
            bad("policy must be an object with a \"type\" string");
        sc.policy.type = jp["type"].get<std::string>();
        if (sc.policy.type == "softmax") {
            if (jp.contains("beta")) {
                if (!jp["beta"].is_object()) bad("policy.beta must be an object");
                for (const auto& [k, v] : jp["beta"].items())
                    sc.policy.beta[k] = num(v, "beta '" + k + "'");
            }
        } else if (sc.policy.type == "section2") {
            if (!jp.contains("variant") || !jp["variant"].is_string())
                bad("policy type \"section2\" needs a \"variant\" string");
            sc.policy.variant = jp["variant"].get<std::string>();
            if (sc.policy.variant != "R1" && sc.policy.variant != "R2" &&
                sc.policy.variant != "R3")
                bad("policy.variant must be R1, R2 or R3");
        } else {
            bad("unknown policy type '" + sc.policy.type + "'");
        }
    }

    // ---- initial condition ----
    if (j.contains("initial")) {
        const json& ji = j["initial"];
        if (ji.is_string()) {
            std::string s = ji.get<std::string>();
            if (s == "zero") {
                sc.initial.kind = InitialSpec::Kind::zero;
            } else if (s.rfind("random(", 0) == 0 && s.back() == ')') {
                sc.initial.kind = InitialSpec::Kind::random;
                try {
                    sc.initial.seed = std::stoull(s.substr(7, s.size() - 8));
                } catch (...) {
                    bad("initial: malformed \"random(seed)\"");
                }
            } else {
                bad("initial: expected \"zero\", \"random(seed)\", values or array");
            }
        } else if (ji.is_object()) {
            sc.initial.kind = InitialSpec::Kind::values;
            for (const auto& [k, v] : ji.items())
                sc.initial.values[k] = num(v, "initial '" + k + "'");
        } else if (ji.is_array()) {
            sc.initial.kind = InitialSpec::Kind::values;
            if (ji.size() != sc.network.links.size())
                bad("initial: array length must match the link count");
            for (size_t i = 0; i < ji.size(); ++i)
                sc.initial.values[sc.network.links[i].id] = num(ji[i], "initial entry");
        } else {
            bad("initial: expected \"zero\", \"random(seed)\", values or array");
        }
    }

    // ---- integration ----
    if (j.contains("integration")) {
        const json& jc = j["integration"];
        if (!jc.is_object()) bad("integration must be an object");
        opt(jc, "t0", sc.integration.t0);
        opt(jc, "t_max", sc.integration.t_max);
        opt(jc, "dt_init", sc.integration.dt_init);
        opt(jc, "tol_step", sc.integration.tol_step);
        opt(jc, "tol_buffer_trigger", sc.integration.tol_buffer_trigger);
        opt(jc, "tol_buffer_report", sc.integration.tol_buffer_report);
        opt(jc, "tol_equilibrium", sc.integration.tol_equilibrium);
        opt(jc, "equilibrium_window", sc.integration.equilibrium_window);
        opt(jc, "detect_equilibrium", sc.integration.detect_equilibrium);
        opt(jc, "sample_stride", sc.integration.sample_stride);
        opt(jc, "max_steps", sc.integration.max_steps);
    }

    // ---- analysis thresholds ----
    if (j.contains("analysis")) {
        const json& jc = j["analysis"];
        if (!jc.is_object()) bad("analysis must be an object");
        opt(jc, "tol_buffer", sc.analysis.tol_buffer);
        opt(jc, "drift_tol_scale", sc.analysis.drift_tol_scale);
        opt(jc, "slope_tol_scale", sc.analysis.slope_tol_scale);
        opt(jc, "r2_linear", sc.analysis.r2_linear);
        opt(jc, "diverge_min", sc.analysis.diverge_min);
        opt(jc, "window_fraction", sc.analysis.window_fraction);
    }

    // ---- perturbations ----
    if (j.contains("perturbations")) {
        if (!j["perturbations"].is_array()) bad("perturbations must be an array");
        for (const auto& jp : j["perturbations"]) {
            if (!jp.is_object() || !jp.contains("time") || !jp.contains("capacities"))
                bad("each perturbation needs \"time\" and \"capacities\"");
            Perturbation p;
            p.time = num(jp["time"], "perturbation time");
            if (!jp["capacities"].is_object()) bad("perturbation capacities must be an object");
            for (const auto& [k, v] : jp["capacities"].items())
                p.capacities[k] = num(v, "perturbed capacity '" + k + "'");
            sc.perturbations.push_back(std::move(p));
        }
        std::stable_sort(sc.perturbations.begin(), sc.perturbations.end(),
                         [](const Perturbation& a, const Perturbation& b) { return a.time < b.time; });
    }

    // ---- resilience ----
    if (j.contains("resilience")) {
        const json& jc = j["resilience"];
        if (!jc.is_object()) bad("resilience must be an object");
        opt(jc, "channel", sc.resilience.channel);
        opt(jc, "deltas", sc.resilience_deltas);
        opt(jc, "detect_margin", sc.resilience.detect_margin);
        opt(jc, "bisect_tol", sc.resilience.bisect_tol);
        opt(jc, "t_max", sc.resilience.t_max);
        opt(jc, "window_fraction", sc.resilience.window_fraction);
        opt(jc, "sample_stride", sc.resilience.sample_stride);
    }

    // ---- cross-checks beyond structural network validation ----
    Network net(sc.network);  // throws ValidationError when the network is bad
    auto check_link = [&](const std::string& id, const char* what) {
        for (const auto& l : sc.network.links)
            if (l.id == id) return;
        invalid("unknown-link", id, std::string(what) + " references a link that does not exist");
    };
    for (const auto& [id, b] : sc.policy.beta) {
        check_link(id, "policy.beta");
        if (b <= 0) invalid("nonpositive-beta", id, "softmax sensitivities must be positive");
    }
    for (const auto& [id, v] : sc.initial.values) {
        check_link(id, "initial");
        int e = net.link_index(id);
        if (v < 0 || ExtReal::finite(v) > net.buffer(e))
            invalid("initial-out-of-range", id, "initial density must lie in [0, B]");
    }
    if (sc.initial.kind == InitialSpec::Kind::values)
        for (const auto& l : sc.network.links)
            if (!sc.initial.values.count(l.id))
                invalid("initial-missing-link", l.id, "explicit initial condition must cover every link");
    std::map<std::string, double> floor_caps;  // tightest capacity seen per link
    for (const auto& p : sc.perturbations) {
        for (const auto& [id, c] : p.capacities) {
            check_link(id, "perturbation");
            double orig = net.capacity(net.link_index(id)).value_or(
                std::numeric_limits<double>::infinity());
            if (c < 0 || c > orig)
                invalid("perturbed-capacity-out-of-range", id,
                        "perturbed capacities must satisfy 0 <= C~ <= C");
        }
        (void)floor_caps;
    }
    for (const auto& id : sc.resilience.channel) check_link(id, "resilience.channel");

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& sc) {
    json j;
    json jn;
    jn["nodes"] = sc.network.nodes;
    jn["links"] = json::array();
    for (const auto& l : sc.network.links) {
        json jl;
        jl["id"] = l.id;
        jl["tail"] = l.tail;
        jl["head"] = l.head;
        jl["capacity"] = ext_to(l.capacity);
        jl["buffer"] = ext_to(l.buffer);
        jn["links"].push_back(std::move(jl));
    }
    jn["inflows"] = sc.network.inflows;
    j["network"] = std::move(jn);

    json jp;
    jp["type"] = sc.policy.type;
    if (sc.policy.type == "softmax")
        jp["beta"] = sc.policy.beta;
    else
        jp["variant"] = sc.policy.variant;
    j["policy"] = std::move(jp);

    switch (sc.initial.kind) {
        case InitialSpec::Kind::zero: j["initial"] = "zero"; break;
        case InitialSpec::Kind::random:
            j["initial"] = "random(" + std::to_string(sc.initial.seed) + ")";
            break;
        case InitialSpec::Kind::values: j["initial"] = sc.initial.values; break;
    }

    json jc;
    jc["t0"] = sc.integration.t0;
    jc["t_max"] = sc.integration.t_max;
    jc["dt_init"] = sc.integration.dt_init;
    jc["tol_step"] = sc.integration.tol_step;
    jc["tol_buffer_trigger"] = sc.integration.tol_buffer_trigger;
    jc["tol_buffer_report"] = sc.integration.tol_buffer_report;
    jc["tol_equilibrium"] = sc.integration.tol_equilibrium;
    jc["equilibrium_window"] = sc.integration.equilibrium_window;
    jc["detect_equilibrium"] = sc.integration.detect_equilibrium;
    jc["sample_stride"] = sc.integration.sample_stride;
    jc["max_steps"] = sc.integration.max_steps;
    j["integration"] = std::move(jc);

    json ja;
    ja["tol_buffer"] = sc.analysis.tol_buffer;
    ja["drift_tol_scale"] = sc.analysis.drift_tol_scale;
    ja["slope_tol_scale"] = sc.analysis.slope_tol_scale;
    ja["r2_linear"] = sc.analysis.r2_linear;
    ja["diverge_min"] = sc.analysis.diverge_min;
    ja["window_fraction"] = sc.analysis.window_fraction;
    j["analysis"] = std::move(ja);

    j["perturbations"] = json::array();
    for (const auto& p : sc.perturbations) {
        json jpp;
        jpp["time"] = p.time;
        jpp["capacities"] = p.capacities;
        j["perturbations"].push_back(std::move(jpp));
    }

    json jr;
    jr["channel"] = sc.resilience.channel;
    jr["deltas"] = sc.resilience_deltas;
    jr["detect_margin"] = sc.resilience.detect_margin;
    jr["bisect_tol"] = sc.resilience.bisect_tol;
    jr["t_max"] = sc.resilience.t_max;
    jr["window_fraction"] = sc.resilience.window_fraction;
    jr["sample_stride"] = sc.resilience.sample_stride;
    j["resilience"] = std::move(jr);

    return j.dump(2) + "\n";
}

PolicyPtr build_policy(const PolicySpec& spec, std::shared_ptr<const AugmentedNetwork> net,
                       const Network& base_for_weights) {
    if (spec.type == "softmax") return make_softmax_policy(std::move(net), spec.beta);
    RefVariant v = spec.variant == "R1"   ? RefVariant::R1
                   : spec.variant == "R2" ? RefVariant::R2
                                          : RefVariant::R3;
    return make_reference_policy(std::move(net), v, reference_routing_weights(base_for_weights));
}

std::vector<double> initial_state(const Scenario& sc, const Network& net) {
    int m = net.link_count();
    std::vector<double> rho(m, 0.0);
    switch (sc.initial.kind) {
        case InitialSpec::Kind::zero: break;
        case InitialSpec::Kind::random: {
            std::mt19937_64 rng(sc.initial.seed);
            auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            for (int e = 0; e < m; ++e) {
                double hi = std::min(5.0, net.buffer(e).value_or(5.0));
                rho[e] = u01() * hi * 0.9;
            }
            break;
        }
        case InitialSpec::Kind::values:
            for (int e = 0; e < m; ++e) rho[e] = sc.initial.values.at(net.link_id(e));
            break;
    }
    return rho;
}

SimulationResult run_simulation(const Scenario& sc, std::optional<double> t_max_override) {
    Network base(sc.network);
    double t_end = t_max_override.value_or(sc.integration.t_max);

    // capacity regimes: cumulative updates at each switch time within range
    struct Stage {
        double t0, t1;
        std::map<std::string, double> caps;  // cumulative view
    };
    std::vector<Stage> stages;
    {
        std::map<std::string, double> cur;
        double t = sc.integration.t0;
        for (const auto& p : sc.perturbations) {
            if (p.time > t_end) break;
            if (p.time > t) {
                stages.push_back({t, p.time, cur});
                t = p.time;
            }
            for (const auto& [k, v] : p.capacities) cur[k] = v;
        }
        stages.push_back({t, t_end, cur});
    }

    SimulationResult out;
    std::vector<double> state = initial_state(sc, base);

    for (size_t si = 0; si < stages.size(); ++si) {
        const Stage& stg = stages[si];
        Network net = stg.caps.empty() ? base : base.with_capacities(stg.caps);
        auto aug = std::make_shared<AugmentedNetwork>(net);
        PolicyPtr policy = build_policy(sc.policy, aug, base);

        IntegrationConfig ic = sc.integration;
        ic.t0 = stg.t0;
        ic.t_max = stg.t1;
        // intermediate stages must cover their whole window so the switch
        // happens at the scheduled time
        if (si + 1 < stages.size()) ic.detect_equilibrium = false;

        Trajectory traj = integrate(*policy, state, ic);
        state = traj.final_rho();
        bool hit = traj.termination.buffer_hit;
        out.stages.push_back(std::move(traj));
        if (hit) break;
    }

    // stitch: duplicate switch-time rows keep both pre- and post-switch flows
    const Trajectory& last = out.stages.back();
    out.merged.net = last.net;
    out.merged.termination = last.termination;
    out.merged.hit_links = last.hit_links;
    out.merged.kappa_lo = last.kappa_lo;
    out.merged.kappa_hi = last.kappa_hi;
    for (const auto& st : out.stages) {
        out.merged.times.insert(out.merged.times.end(), st.times.begin(), st.times.end());
        out.merged.rho.insert(out.merged.rho.end(), st.rho.begin(), st.rho.end());
        out.merged.inflow.insert(out.merged.inflow.end(), st.inflow.begin(), st.inflow.end());
        out.merged.outflow.insert(out.merged.outflow.end(), st.outflow.begin(), st.outflow.end());
    }
    out.throughput_final = throughput(last, 0.25);
    return out;
}

// ---------------------------------------------------------------------------
// writers

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json kappa_interval_json(const Trajectory& t) {
    if (!t.termination.buffer_hit) return nullptr;
    return json::array({t.kappa_lo, t.kappa_hi});
}

std::string termination_name(const Termination& t) {
    if (t.buffer_hit) return "buffer-hit";
    if (t.equilibrium_detected) return "equilibrium";
    return "reached-t-max";
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    const AugmentedNetwork& net = *traj.net;
    const Network& base = net.base();
    int m = net.real_link_count();
    std::string s = "t";
    for (const char* pfx : {"rho_", "fin_", "fout_"})
        for (int e = 0; e < m; ++e) s += "," + std::string(pfx) + base.link_id(e);
    s += "\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        s += g17(traj.times[i]);
        for (const auto* block : {&traj.rho, &traj.inflow, &traj.outflow})
            for (int e = 0; e < m; ++e) s += "," + g17((*block)[i][e]);
        s += "\n";
    }
    return s;
}

std::string termination_json(const SimulationResult& sim) {
    const Trajectory& last = sim.merged;
    const Network& base = last.net->base();
    json j;
    j["termination"] = termination_name(last.termination);
    j["kappa_interval"] = kappa_interval_json(last);
    j["throughput"] = sim.throughput_final;
    j["t_end"] = last.t_end();
    json hits = json::array();
    for (int e : last.hit_links) hits.push_back(base.link_id(e));
    j["hit_links"] = std::move(hits);
    json st = json::array();
    for (const auto& s : sim.stages) {
        json js;
        js["t_start"] = s.times.front();
        js["t_end"] = s.t_end();
        js["termination"] = termination_name(s.termination);
        st.push_back(std::move(js));
    }
    j["stages"] = std::move(st);
    return j.dump(2) + "\n";
}

std::string analysis_json(const Scenario& sc, const SimulationResult& sim) {
    const Trajectory& last = sim.stages.back();
    const AugmentedNetwork& net = *last.net;
    const Network& cur = net.base();

    json j;
    {
        PolicyPtr pol = build_policy(sc.policy, last.net, Network(sc.network));
        ThroughputReport rep = throughput_verdict(cur, *pol);
        j["verdict"] = to_string(rep.verdict);
        j["best_violation"] = rep.best_violation;
        j["predicted_throughput"] = rep.predicted_throughput;
        json crit = json::array();
        for (int v : rep.critical_nodes) crit.push_back(cur.node_id(v));
        j["critical_nodes"] = std::move(crit);
        j["monotonicity"] = rep.monotonicity;
        j["axioms_ok"] = rep.axioms_ok;
        j["detail"] = rep.detail;
    }

    json meas;
    meas["termination"] = termination_name(sim.merged.termination);
    meas["throughput"] = sim.throughput_final;
    meas["t_end"] = sim.merged.t_end();
    meas["kappa_interval"] = kappa_interval_json(sim.merged);

    auto tags = classify_links(last, sc.analysis);
    json jt;
    for (size_t e = 0; e < tags.size(); ++e) {
        json lt;
        lt["tag"] = to_string(tags[e].tag);
        lt["slope"] = tags[e].slope;
        lt["r2"] = tags[e].r2;
        lt["final"] = tags[e].final_value;
        jt[cur.link_id(static_cast<int>(e))] = std::move(lt);
    }
    meas["classification"] = std::move(jt);

    // flow regime tags from the trailing mean of each outflow: pinned at zero,
    // pinned at capacity, or interior
    {
        double cmax = 0;
        for (int e = 0; e < cur.link_count(); ++e)
            if (cur.capacity(e).is_finite()) cmax = std::max(cmax, cur.capacity(e).value());
        double tol_flow = 1e-3 * std::max(1e-12, cmax);
        size_t n = last.times.size();
        size_t i0 = n - std::max<size_t>(1, n / 4);
        json jf;
        for (int e = 0; e < cur.link_count(); ++e) {
            double mean = 0;
            for (size_t i = i0; i < n; ++i) mean += last.outflow[i][e];
            mean /= static_cast<double>(n - i0);
            std::string tag = "interior";
            if (mean < tol_flow)
                tag = "zero";
            else if (cur.capacity(e).is_finite() &&
                     std::abs(mean - cur.capacity(e).value()) < tol_flow)
                tag = "at-capacity";
            jf[cur.link_id(e)] = tag;
        }
        meas["flow_tags"] = std::move(jf);
    }

    OverloadCut oc = overload_cut(last, sc.analysis);
    json sp = json::array();
    for (int v : oc.spillback_nodes) sp.push_back(cur.node_id(v));
    meas["spillback_nodes"] = std::move(sp);
    json ex = json::array();
    for (int v : oc.expected_nodes) ex.push_back(cur.node_id(v));
    meas["expected_spillback_nodes"] = std::move(ex);
    meas["spillback_matches_cuts"] = oc.matches_expected;

    bool any_finite_buffer = false;
    for (int e = 0; e < cur.link_count(); ++e)
        if (cur.buffer(e).is_finite()) any_finite_buffer = true;
    if (any_finite_buffer) {
        double kb = kappa_upper_bound(cur, initial_state(sc, Network(sc.network)));
        meas["kappa_upper_bound"] = std::isfinite(kb) ? json(kb) : json("inf");
    }

    j["measured"] = std::move(meas);
    return j.dump(2) + "\n";
}

std::string classification_json(const Scenario& sc, const SimulationResult& sim) {
    const Trajectory& last = sim.stages.back();
    const Network& cur = last.net->base();
    auto tags = classify_links(last, sc.analysis);
    json j;
    for (size_t e = 0; e < tags.size(); ++e) {
        json lt;
        lt["tag"] = to_string(tags[e].tag);
        lt["slope"] = tags[e].slope;
        lt["r2"] = tags[e].r2;
        lt["final"] = tags[e].final_value;
        j[cur.link_id(static_cast<int>(e))] = std::move(lt);
    }
    return j.dump(2) + "\n";
}

std::string mincut_json(const Network& net) {
    auto res = cut_search(net);
    json j;
    j["best_value"] = res.best;
    j["cuts_examined"] = res.cuts_examined;
    json ms = json::array();
    for (const auto& rec : res.maximizers) {
        json jm;
        json nodes = json::array();
        for (int v : rec.nodes) nodes.push_back(net.node_id(v));
        jm["nodes"] = std::move(nodes);
        jm["inflow"] = rec.inflow;
        jm["capacity"] = std::isfinite(rec.capacity) ? json(rec.capacity) : json("inf");
        jm["violation"] = std::isfinite(rec.violation) ? json(rec.violation) : json("-inf");
        ms.push_back(std::move(jm));
    }
    j["maximizers"] = std::move(ms);
    json un = json::array();
    for (int v : res.union_nodes) un.push_back(net.node_id(v));
    j["union"] = std::move(un);
    return j.dump(2) + "\n";
}

std::string mincut_csv(const Network& net) {
    auto res = cut_search(net);
    std::string s = "nodes,inflow,capacity,violation\n";
    for (const auto& rec : res.maximizers) {
        std::string ns;
        for (int v : rec.nodes) {
            if (!ns.empty()) ns += " ";
            ns += net.node_id(v);
        }
        s += ns + "," + g17(rec.inflow) + "," + g17(rec.capacity) + "," + g17(rec.violation) + "\n";
    }
    return s;
}

std::string resilience_csv(const std::vector<ResiliencePoint>& pts) {
    std::string s = "delta,nu_hat,nu_theory,param,throughput\n";
    for (const auto& p : pts)
        s += g17(p.delta) + "," + g17(p.nu_hat) + "," + g17(p.nu_theory) + "," + g17(p.param) +
             "," + g17(p.throughput) + "\n";
    return s;
}

std::string resilience_json(const std::vector<ResiliencePoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        json jp;
        jp["delta"] = p.delta;
        jp["nu_hat"] = std::isfinite(p.nu_hat) ? json(p.nu_hat) : json("inf");
        jp["nu_theory"] = std::isfinite(p.nu_theory) ? json(p.nu_theory) : json("inf");
        jp["param"] = p.param;
        jp["throughput"] = p.throughput;
        arr.push_back(std::move(jp));
    }
    json j;
    j["points"] = std::move(arr);
    return j.dump(2) + "\n";
}

}  // namespace flownet

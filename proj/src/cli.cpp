#include "flownet/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "flownet/analysis.hpp"
#include "flownet/cuts.hpp"
#include "flownet/properties.hpp"
#include "flownet/scenario.hpp"

namespace flownet {

namespace {

using nlohmann::json;

void emit_error(const std::string& kind, const std::string& message) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    std::cerr << j.dump(2) << "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " under '" + dir + "'");
    out << content;
}

struct Options {
    std::string scenario;
    std::string out;
    std::string format = "json";
    std::optional<unsigned long long> seed;
    std::optional<double> t_max;
    std::optional<double> tol_step;
    std::optional<double> tol_buffer;
    std::optional<double> tol_equilibrium;
    std::string suite = "all";
};

Scenario load_with_overrides(const Options& o) {
    Scenario sc = load_scenario(o.scenario);
    if (o.seed) sc.initial.seed = *o.seed;
    if (o.t_max) sc.integration.t_max = *o.t_max;
    if (o.tol_step) sc.integration.tol_step = *o.tol_step;
    if (o.tol_buffer) sc.integration.tol_buffer_trigger = *o.tol_buffer;
    if (o.tol_equilibrium) sc.integration.tol_equilibrium = *o.tol_equilibrium;
    return sc;
}

int cmd_simulate(const Options& o) {
    Scenario sc = load_with_overrides(o);
    SimulationResult sim = run_simulation(sc);
    std::string term = termination_json(sim);
    if (!o.out.empty()) {
        write_file(o.out, "trajectory.csv", trajectory_csv(sim.merged));
        write_file(o.out, "termination.json", term);
    }
    std::cout << term;
    return 0;
}

int cmd_analyze(const Options& o) {
    Scenario sc = load_with_overrides(o);
    SimulationResult sim = run_simulation(sc);
    std::string rep = analysis_json(sc, sim);
    if (!o.out.empty()) {
        write_file(o.out, "analysis.json", rep);
        write_file(o.out, "termination.json", termination_json(sim));
    }
    std::cout << rep;
    return 0;
}

int cmd_classify(const Options& o) {
    Scenario sc = load_with_overrides(o);
    SimulationResult sim = run_simulation(sc);
    std::string rep = classification_json(sc, sim);
    if (!o.out.empty()) write_file(o.out, "classification.json", rep);
    std::cout << rep;
    return 0;
}

int cmd_mincut(const Options& o) {
    Scenario sc = load_scenario(o.scenario);
    Network net(sc.network);
    if (!o.out.empty()) {
        write_file(o.out, "mincut.json", mincut_json(net));
        write_file(o.out, "mincut.csv", mincut_csv(net));
    }
    std::cout << (o.format == "csv" ? mincut_csv(net) : mincut_json(net));
    return 0;
}

int cmd_resilience(const Options& o) {
    Scenario sc = load_with_overrides(o);
    Network net(sc.network);
    if (sc.resilience.channel.empty())
        throw ValidationError(ValidationReport{
            {{"missing-channel", "resilience", "scenario defines no disruption channel"}}});
    Network base = net;
    PolicyFactory factory = [&](std::shared_ptr<const AugmentedNetwork> aug) {
        return build_policy(sc.policy, std::move(aug), base);
    };
    auto pts = resilience_curve(net, factory, sc.resilience_deltas, sc.resilience);
    if (!o.out.empty()) write_file(o.out, "resilience.csv", resilience_csv(pts));
    std::cout << (o.format == "csv" ? resilience_csv(pts) : resilience_json(pts));
    return 0;
}

int cmd_verify(const Options& o) {
    Scenario sc = load_scenario(o.scenario);
    Network net(sc.network);
    auto aug = std::make_shared<AugmentedNetwork>(net);
    PolicyPtr policy = build_policy(sc.policy, aug, net);

    bool want_ax = o.suite == "axioms" || o.suite == "all";
    bool want_mono = o.suite == "monotone" || o.suite == "all";
    bool want_contr = o.suite == "contraction" || o.suite == "all";
    bool want_order = o.suite == "order" || o.suite == "all";

    unsigned long long base_seed = o.seed.value_or(0);
    json j;
    bool ok = true;

    if (want_ax) {
        AxiomCheckConfig cfg;
        if (o.seed) cfg.seed = base_seed;
        AxiomReport rep = check_axioms(*policy, cfg);
        json ja;
        ja["pass"] = rep.exact_pass();
        ja["limit_forms_pass"] = rep.limit_pass();
        ja["worst_exact"] = rep.worst_exact;
        ja["worst_limit"] = rep.worst_limit;
        ja["samples"] = rep.samples;
        ja["violations"] = rep.violations.size();
        j["axioms"] = std::move(ja);
        ok = ok && rep.exact_pass();
    }
    if (want_mono) {
        MonotonicityConfig cfg;
        if (o.seed) cfg.seed = base_seed + 1;
        MonotonicityReport rep = check_monotonicity(*policy, cfg);
        json jm;
        jm["classification"] = to_string(rep.classification);
        jm["pass"] = rep.classification != MonotonicityClass::not_monotone;
        jm["worst_violation"] = rep.worst_violation;
        jm["weakest_strict"] = rep.weakest_strict;
        jm["samples"] = rep.samples;
        j["monotonicity"] = std::move(jm);
        ok = ok && rep.classification != MonotonicityClass::not_monotone;
    }
    auto pair_json = [](const PairCheckReport& rep) {
        json jp;
        jp["pass"] = rep.pass();
        jp["pairs"] = rep.pairs;
        jp["violations"] = rep.violations;
        jp["worst"] = rep.worst;
        if (!rep.notes.empty()) jp["notes"] = rep.notes;
        return jp;
    };
    if (want_contr) {
        PairCheckConfig cfg;
        if (o.seed) cfg.seed = base_seed + 2;
        PairCheckReport rep = check_l1_contraction(*policy, cfg);
        j["contraction"] = pair_json(rep);
        ok = ok && rep.pass();
    }
    if (want_order) {
        PairCheckConfig cfg;
        if (o.seed) cfg.seed = base_seed + 3;
        PairCheckReport rep = check_order_preservation(*policy, cfg);
        j["order"] = pair_json(rep);
        ok = ok && rep.pass();
    }
    j["pass"] = ok;
    std::string rep = j.dump(2) + "\n";
    if (!o.out.empty()) write_file(o.out, "verify.json", rep);
    std::cout << rep;
    return ok ? 0 : 5;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"dynamical flow networks: simulation, cut analysis, resilience"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "scenario JSON file")->required();
        sub->add_option("--out", o.out, "directory for output artifacts");
        sub->add_option("--format", o.format, "stdout format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", o.seed, "override every random seed");
        sub->add_option("--t-max", o.t_max, "override the integration horizon");
        sub->add_option("--tol-step", o.tol_step, "override the step error tolerance");
        sub->add_option("--tol-buffer", o.tol_buffer, "override the buffer-hit trigger");
        sub->add_option("--tol-equilibrium", o.tol_equilibrium,
                        "override the equilibrium residual tolerance");
        return sub;
    };

    auto* c_sim = add_common(app.add_subcommand(
        "simulate", "integrate the scenario, write trajectory + termination"));
    auto* c_ana = add_common(app.add_subcommand(
        "analyze", "cut-based verdict cross-checked against a simulation"));
    auto* c_cls = add_common(app.add_subcommand(
        "classify", "per-link density tags from a simulation"));
    auto* c_cut = add_common(app.add_subcommand(
        "mincut", "worst cuts of the scenario network"));
    auto* c_res = add_common(app.add_subcommand(
        "resilience", "empirical resilience curve over the scenario's channel"));
    auto* c_ver = add_common(app.add_subcommand(
        "verify-policy", "routing policy property suites"));
    c_ver->add_option("--suite", o.suite, "axioms|monotone|contraction|order|all")
        ->check(CLI::IsMember({"axioms", "monotone", "contraction", "order", "all"}));

    try {
        std::reverse(args.begin(), args.end());  // CLI11's vector parse pops from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_sim)) return cmd_simulate(o);
        if (app.got_subcommand(c_ana)) return cmd_analyze(o);
        if (app.got_subcommand(c_cls)) return cmd_classify(o);
        if (app.got_subcommand(c_cut)) return cmd_mincut(o);
        if (app.got_subcommand(c_res)) return cmd_resilience(o);
        if (app.got_subcommand(c_ver)) return cmd_verify(o);
    } catch (const ParseError& e) {
        emit_error("parse", e.what());
        return 2;
    } catch (const ValidationError& e) {
        emit_error("validation", e.report.summary());
        return 3;
    } catch (const NumericalAbort& e) {
        emit_error("numerical", e.what());
        return 4;
    } catch (const RoutingDomainError& e) {
        emit_error("numerical", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        emit_error("validation", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 1;  // unreachable: require_subcommand guarantees a dispatch
}

int run_cli(int argc, char** argv) {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace flownet

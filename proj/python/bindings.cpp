#include <pybind11/pybind11.h>

#include "flownet/cuts.hpp"
#include "flownet/scenario.hpp"

#include "json.hpp"

namespace py = pybind11;
using namespace flownet;

namespace {

// every entry point takes scenario JSON text and returns JSON text; the
// python package turns both sides into dicts
Scenario parse(const std::string& text) {
    try {
        return parse_scenario(text);
    } catch (const ParseError& e) {
        throw py::value_error(e.what());
    } catch (const ValidationError& e) {
        throw py::value_error(e.report.summary());
    }
}

std::string validate_json(const std::string& text) {
    nlohmann::json out;
    out["ok"] = true;
    out["issues"] = nlohmann::json::array();
    try {
        (void)parse_scenario(text);
    } catch (const ValidationError& e) {
        out["ok"] = false;
        for (const auto& i : e.report.issues)
            out["issues"].push_back({{"code", i.code}, {"subject", i.subject}, {"detail", i.detail}});
    } catch (const ParseError& e) {
        throw py::value_error(e.what());
    }
    return out.dump(2) + "\n";
}

std::string simulate(const std::string& text) {
    auto sc = parse(text);
    return termination_json(run_simulation(sc));
}

std::string trajectory(const std::string& text) {
    auto sc = parse(text);
    return trajectory_csv(run_simulation(sc).merged);
}

std::string analyze(const std::string& text) {
    auto sc = parse(text);
    return analysis_json(sc, run_simulation(sc));
}

std::string classify(const std::string& text) {
    auto sc = parse(text);
    return classification_json(sc, run_simulation(sc));
}

std::string mincut(const std::string& text) {
    auto sc = parse(text);
    return mincut_json(Network(sc.network));
}

std::string resilience(const std::string& text) {
    auto sc = parse(text);
    Network net(sc.network);
    if (sc.resilience.channel.empty())
        throw py::value_error("resilience: scenario defines no disruption channel");
    Network base = net;
    PolicyFactory factory = [&](std::shared_ptr<const AugmentedNetwork> aug) {
        return build_policy(sc.policy, std::move(aug), base);
    };
    return resilience_json(resilience_curve(net, factory, sc.resilience_deltas, sc.resilience));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dynamical flow network simulation and cut analysis";
    m.def("version", [] { return "0.1.0"; });
    m.def("validate", &validate_json, py::arg("scenario"),
          "structural validation report for a scenario");
    m.def("simulate", &simulate, py::arg("scenario"),
          "run the staged protocol; returns the termination report");
    m.def("trajectory", &trajectory, py::arg("scenario"),
          "run the staged protocol; returns the sampled trajectory as CSV text");
    m.def("analyze", &analyze, py::arg("scenario"),
          "throughput dichotomy verdict with measured evidence");
    m.def("classify", &classify, py::arg("scenario"),
          "per-link growth tags of the simulated densities");
    m.def("mincut", &mincut, py::arg("scenario"),
          "worst cuts of the unperturbed network");
    m.def("resilience", &resilience, py::arg("scenario"),
          "empirical resilience curve along the scenario's disruption channel");
}

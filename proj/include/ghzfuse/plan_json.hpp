#pragma once

// JSON form of protocol plans, metrics and trial statistics.
//
//   plan  := {"target_n", "target_angle", "scheme", "beta1", "tree": node}
//   node  := {"gate": "I"|"II"|"similar-I"|"similar-II", "theta", "children": [node, node]}
//          | {"n", "angle"}                                   (leaf)

#include <json.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>

#include "ghzfuse/protocols.hpp"

namespace ghzfuse {

using json = nlohmann::json;

inline NodeGate parse_node_gate(const std::string& s) {
    if (s == "I") return NodeGate::TypeI;
    if (s == "II") return NodeGate::TypeII;
    if (s == "similar-I") return NodeGate::SimilarI;
    if (s == "similar-II") return NodeGate::SimilarII;
    throw std::invalid_argument("unknown gate '" + s + "'");
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "general") return Scheme::General;
    if (s == "efficient") return Scheme::Efficient;
    if (s == "custom") return Scheme::Custom;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

namespace detail {

inline json node_to_json(const ProtocolPlan& plan, std::size_t idx) {
    const PlanNode& n = plan.nodes.at(idx);
    if (n.is_leaf()) {
        const ResourceSpec& r = plan.resources.at(*n.resource);
        return {{"n", r.n}, {"angle", r.angle}};
    }
    return {{"gate", to_string(n.gate)},
            {"theta", n.theta},
            {"children", json::array({node_to_json(plan, n.left), node_to_json(plan, n.right)})}};
}

inline std::size_t node_from_json(ProtocolPlan& plan, const json& j) {
    if (j.contains("children")) {
        const json& kids = j.at("children");
        if (!kids.is_array() || kids.size() != 2) throw std::invalid_argument("fusion node needs two children");
        const std::size_t l = node_from_json(plan, kids[0]);
        const std::size_t r = node_from_json(plan, kids[1]);
        const double theta = j.value("theta", kQuarterPi);
        return plan.add_fusion(parse_node_gate(j.at("gate").get<std::string>()), theta, l, r);
    }
    const auto n = j.at("n").get<std::size_t>();
    const double angle = checked_schmidt_angle(j.at("angle").get<double>());
    if (n == 0) throw std::invalid_argument("leaf needs at least one qubit");
    return plan.add_leaf({n, angle});
}

} // namespace detail

inline json to_json(const ProtocolPlan& plan) {
    return {{"target_n", plan.target_n},
            {"target_angle", plan.target_angle},
            {"scheme", to_string(plan.scheme)},
            {"beta1", plan.beta1},
            {"tree", detail::node_to_json(plan, plan.root)}};
}

/// Missing target fields are filled in from the tree itself.
inline ProtocolPlan plan_from_json(const json& j) {
    try {
        ProtocolPlan plan;
        plan.scheme = parse_scheme(j.value("scheme", std::string("custom")));
        plan.beta1 = j.value("beta1", 0.0);
        plan.root = detail::node_from_json(plan, j.at("tree"));
        const PlanMetrics m = evaluate_plan(plan);
        plan.target_n = j.value("target_n", m.output_qubits);
        plan.target_angle = j.value("target_angle", m.output_angle);
        evaluate_plan(plan);
        return plan;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed plan JSON: ") + e.what());
    }
}

inline json to_json(const PlanMetrics& m) {
    json nodes = json::array();
    for (const auto& n : m.nodes) {
        nodes.push_back({{"node", n.node},
                         {"gate", to_string(n.gate)},
                         {"theta", n.theta},
                         {"angle_left", n.angle_left},
                         {"angle_right", n.angle_right},
                         {"angle_out", n.angle_out},
                         {"qubits_out", n.qubits_out},
                         {"probability", n.probability}});
    }
    return {{"p_gen", m.p_gen},
            {"fusion_count", m.fusion_count},
            {"resource_count", m.resource_count},
            {"output_qubits", m.output_qubits},
            {"output_angle", m.output_angle},
            {"nodes", nodes}};
}

inline json to_json(const TrialStats& t) {
    return {{"trials", t.trials},
            {"successes", t.successes},
            {"p_hat", t.p_hat},
            {"std_error", t.std_error},
            {"seed", t.seed}};
}

} // namespace ghzfuse

#pragma once

// Fusion-tree protocols that grow GHZ-like resource states into an N-qubit
// target, their analytic success probability, a restart-on-failure Monte
// Carlo, and an end-to-end Fock-space executor.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzfuse/fock.hpp"
#include "ghzfuse/fusion.hpp"
#include "ghzfuse/optics.hpp"

namespace ghzfuse {

enum class Scheme { General, Efficient, Custom };

inline std::string to_string(Scheme s) {
    switch (s) {
    case Scheme::General: return "general";
    case Scheme::Efficient: return "efficient";
    case Scheme::Custom: return "custom";
    }
    return "?";
}

/// Gate applied at an internal node. The similar-state variants flip the
/// left input with X on every qubit before a modified gate of angle theta.
enum class NodeGate { TypeI, TypeII, SimilarI, SimilarII };

inline std::string to_string(NodeGate g) {
    switch (g) {
    case NodeGate::TypeI: return "I";
    case NodeGate::TypeII: return "II";
    case NodeGate::SimilarI: return "similar-I";
    case NodeGate::SimilarII: return "similar-II";
    }
    return "?";
}

inline FusionKind kind_of(NodeGate g) {
    return (g == NodeGate::TypeI || g == NodeGate::SimilarI) ? FusionKind::TypeI : FusionKind::TypeII;
}

inline bool is_similar(NodeGate g) { return g == NodeGate::SimilarI || g == NodeGate::SimilarII; }

struct ResourceSpec {
    std::size_t n = 2;
    double angle = kQuarterPi;
};

struct PlanNode {
    std::optional<std::size_t> resource; ///< set on leaves
    NodeGate gate = NodeGate::TypeI;
    double theta = kQuarterPi;
    std::size_t left = 0;
    std::size_t right = 0;

    [[nodiscard]] bool is_leaf() const noexcept { return resource.has_value(); }
};

struct ProtocolPlan {
    std::size_t target_n = 0;
    double target_angle = 0.0;
    Scheme scheme = Scheme::Custom;
    double beta1 = 0.0;
    std::vector<ResourceSpec> resources;
    std::vector<PlanNode> nodes;
    std::size_t root = 0;

    std::size_t add_leaf(ResourceSpec r) {
        resources.push_back(r);
        PlanNode leaf;
        leaf.resource = resources.size() - 1;
        nodes.push_back(leaf);
        return nodes.size() - 1;
    }

    std::size_t add_fusion(NodeGate gate, double theta, std::size_t left, std::size_t right) {
        PlanNode node;
        node.gate = gate;
        node.theta = theta;
        node.left = left;
        node.right = right;
        nodes.push_back(node);
        return nodes.size() - 1;
    }

    [[nodiscard]] std::size_t fusion_count() const {
        std::size_t c = 0;
        for (const auto& n : nodes)
            if (!n.is_leaf()) ++c;
        return c;
    }
};

struct NodeMetrics {
    std::size_t node = 0;
    NodeGate gate = NodeGate::TypeI;
    double theta = 0.0;
    double angle_left = 0.0;
    double angle_right = 0.0;
    double angle_out = 0.0;
    std::size_t qubits_out = 0;
    double probability = 1.0;
};

struct PlanMetrics {
    double p_gen = 1.0;
    std::size_t fusion_count = 0;
    std::size_t resource_count = 0;
    std::size_t output_qubits = 0;
    double output_angle = 0.0;
    std::vector<NodeMetrics> nodes; ///< post-order
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const TrialStats&) const = default;
};

inline double checked_target_angle(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma > kQuarterPi + kAngleSlack) {
        throw std::domain_error("target angle " + std::to_string(gamma) + " outside (0, pi/4]");
    }
    return std::min(gamma, kQuarterPi);
}

/// arctan(tan(gamma)^(1/root)): the per-resource angle whose tangents multiply to tan(gamma).
inline double root_angle(double gamma, double root) {
    return std::min(std::atan(std::pow(std::tan(gamma), 1.0 / root)), kQuarterPi);
}

/// Outcome list of one fusion node acting on canonical inputs.
inline OutcomeList node_outcomes(NodeGate gate, double theta, const SchmidtState& left, const SchmidtState& right) {
    if (is_similar(gate)) return fuse_similar(left, right, theta, kind_of(gate));
    return fuse_symbolic(left, right, FusionSpec{kind_of(gate), theta});
}

namespace detail {

inline void post_order(const ProtocolPlan& plan, std::size_t idx, std::vector<std::size_t>& order,
                       std::vector<int>& seen) {
    if (idx >= plan.nodes.size()) throw std::invalid_argument("plan references missing node " + std::to_string(idx));
    if (seen[idx]++) throw std::invalid_argument("plan node " + std::to_string(idx) + " reached twice");
    const PlanNode& n = plan.nodes[idx];
    if (!n.is_leaf()) {
        post_order(plan, n.left, order, seen);
        post_order(plan, n.right, order, seen);
    }
    order.push_back(idx);
}

} // namespace detail

/// Nodes in post-order from the root; throws unless the nodes form one binary
/// tree whose leaves use every resource exactly once.
inline std::vector<std::size_t> plan_post_order(const ProtocolPlan& plan) {
    if (plan.nodes.empty()) throw std::invalid_argument("plan has no nodes");
    std::vector<std::size_t> order;
    std::vector<int> seen(plan.nodes.size(), 0);
    detail::post_order(plan, plan.root, order, seen);
    if (order.size() != plan.nodes.size()) throw std::invalid_argument("plan has nodes unreachable from the root");
    std::vector<int> used(plan.resources.size(), 0);
    for (const auto& n : plan.nodes) {
        if (!n.is_leaf()) continue;
        if (*n.resource >= plan.resources.size()) throw std::invalid_argument("leaf references missing resource");
        ++used[*n.resource];
    }
    for (int u : used)
        if (u != 1) throw std::invalid_argument("every resource must feed exactly one leaf");
    return order;
}

/// Analytic success probability: the product of node success probabilities.
/// Also checks that every node heralds a branch-independent angle and that the
/// root reproduces the plan's target.
inline PlanMetrics evaluate_plan(const ProtocolPlan& plan) {
    const auto order = plan_post_order(plan);
    std::vector<std::optional<SchmidtState>> state(plan.nodes.size());
    PlanMetrics metrics;
    metrics.resource_count = plan.resources.size();
    for (std::size_t idx : order) {
        const PlanNode& node = plan.nodes[idx];
        if (node.is_leaf()) {
            const ResourceSpec& r = plan.resources[*node.resource];
            state[idx] = SchmidtState(r.n, r.angle);
            continue;
        }
        const SchmidtState& l = *state[node.left];
        const SchmidtState& r = *state[node.right];
        const OutcomeList outcomes = node_outcomes(node.gate, node.theta, l, r);
        std::optional<double> angle;
        std::size_t qubits = 0;
        for (const auto& o : outcomes) {
            if (!o.success()) continue;
            if (angle && std::abs(*angle - o.output->angle()) > 1e-12) {
                throw std::invalid_argument("node " + std::to_string(idx) + " heralds branch-dependent angles (" +
                                            std::to_string(*angle) + ", " + std::to_string(o.output->angle()) +
                                            "); only standard or similar-state gates compose");
            }
            angle = o.output->angle();
            qubits = o.output->n_qubits();
        }
        if (!angle) throw std::invalid_argument("node " + std::to_string(idx) + " can never succeed");
        NodeMetrics nm;
        nm.node = idx;
        nm.gate = node.gate;
        nm.theta = node.theta;
        nm.angle_left = l.angle();
        nm.angle_right = r.angle();
        nm.angle_out = *angle;
        nm.qubits_out = qubits;
        nm.probability = total_success(outcomes);
        metrics.p_gen *= nm.probability;
        metrics.nodes.push_back(nm);
        state[idx] = SchmidtState(qubits, *angle);
    }
    metrics.fusion_count = metrics.nodes.size();
    metrics.output_qubits = state[plan.root]->n_qubits();
    metrics.output_angle = state[plan.root]->angle();
    if (plan.target_n != 0 && metrics.output_qubits != plan.target_n) {
        throw std::invalid_argument("plan yields " + std::to_string(metrics.output_qubits) + " qubits, target is " +
                                    std::to_string(plan.target_n));
    }
    if (plan.target_n != 0 && std::abs(std::tan(metrics.output_angle) - std::tan(plan.target_angle)) > 1e-12) {
        throw std::invalid_argument("plan yields angle " + std::to_string(metrics.output_angle) + ", target is " +
                                    std::to_string(plan.target_angle));
    }
    return metrics;
}

namespace detail {

/// Left-deep chain of standard type-I fusions over the given leaves.
inline std::size_t chain(ProtocolPlan& plan, const std::vector<std::size_t>& items) {
    std::size_t acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) acc = plan.add_fusion(NodeGate::TypeI, kQuarterPi, acc, items[i]);
    return acc;
}

} // namespace detail

/// General scheme: arbitrary |G2(alpha)> resources, pairwise similar-state
/// fusions at theta = beta1, then a chain of standard type-I fusions.
/// Odd N uses N-1 resources; even N uses N, fusing the first pair with the
/// type-II similar-state variant.
inline ProtocolPlan plan_general(std::size_t n, double gamma, double alpha) {
    if (n < 3) throw std::domain_error("general scheme needs N >= 3 (got " + std::to_string(n) + ")");
    gamma = checked_target_angle(gamma);
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > kQuarterPi + kAngleSlack) {
        throw std::domain_error("resource angle " + std::to_string(alpha) + " outside (0, pi/4]");
    }
    alpha = std::min(alpha, kQuarterPi);
    const bool even = n % 2 == 0;
    const std::size_t resources = even ? n : n - 1;
    const std::size_t pairs = resources / 2;

    ProtocolPlan plan;
    plan.target_n = n;
    plan.target_angle = gamma;
    plan.scheme = Scheme::General;
    plan.beta1 = root_angle(gamma, static_cast<double>(pairs));
    std::vector<std::size_t> stage1;
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t l = plan.add_leaf({2, alpha});
        const std::size_t r = plan.add_leaf({2, alpha});
        const NodeGate g = (even && p == 0) ? NodeGate::SimilarII : NodeGate::SimilarI;
        stage1.push_back(plan.add_fusion(g, plan.beta1, l, r));
    }
    plan.root = detail::chain(plan, stage1);
    return plan;
}

/// Efficient method over arbitrary resource sizes: every resource carries
/// beta1 = arctan(tan(gamma)^(1/L)) and a chain of standard type-I fusions joins them.
inline ProtocolPlan plan_efficient_from(const std::vector<std::size_t>& resource_qubits, double gamma) {
    if (resource_qubits.empty()) throw std::domain_error("efficient scheme needs at least one resource");
    gamma = checked_target_angle(gamma);
    ProtocolPlan plan;
    plan.scheme = Scheme::Efficient;
    plan.target_angle = gamma;
    plan.beta1 = root_angle(gamma, static_cast<double>(resource_qubits.size()));
    std::vector<std::size_t> leaves;
    std::size_t qubits = 0;
    for (std::size_t q : resource_qubits) {
        if (q == 0) throw std::domain_error("resource states need at least one qubit");
        leaves.push_back(plan.add_leaf({q, plan.beta1}));
        qubits += q;
    }
    plan.target_n = qubits - (resource_qubits.size() - 1);
    plan.root = detail::chain(plan, leaves);
    return plan;
}

/// Efficient scheme: N-1 resources |G2(beta1)>, chain of N-2 standard type-I fusions.
inline ProtocolPlan plan_efficient(std::size_t n, double gamma) {
    if (n < 2) throw std::domain_error("efficient scheme needs N >= 2 (got " + std::to_string(n) + ")");
    return plan_efficient_from(std::vector<std::size_t>(n - 1, 2), gamma);
}

/// Exhaustive search over binary-tree topologies of the efficient scheme
/// (standard type-I fusions, N-1 two-qubit leaves). Limited to N <= 6.
inline ProtocolPlan best_efficient_topology(std::size_t n, double gamma) {
    if (n < 2 || n > 6) throw std::domain_error("topology search supports 2 <= N <= 6");
    gamma = checked_target_angle(gamma);
    const std::size_t leaves = n - 1;
    const double beta1 = root_angle(gamma, static_cast<double>(leaves));

    std::function<std::size_t(ProtocolPlan&, const std::vector<int>&, std::size_t&)> build;
    // Encoding: preorder sequence, 1 = internal, 0 = leaf.
    build = [&](ProtocolPlan& plan, const std::vector<int>& code, std::size_t& pos) -> std::size_t {
        if (code[pos++] == 0) return plan.add_leaf({2, beta1});
        const std::size_t l = build(plan, code, pos);
        const std::size_t r = build(plan, code, pos);
        return plan.add_fusion(NodeGate::TypeI, kQuarterPi, l, r);
    };
    std::function<std::vector<std::vector<int>>(std::size_t)> shapes = [&](std::size_t k) {
        std::vector<std::vector<int>> out;
        if (k == 1) return std::vector<std::vector<int>>{{0}};
        for (std::size_t left = 1; left < k; ++left)
            for (const auto& l : shapes(left))
                for (const auto& r : shapes(k - left)) {
                    std::vector<int> code{1};
                    code.insert(code.end(), l.begin(), l.end());
                    code.insert(code.end(), r.begin(), r.end());
                    out.push_back(std::move(code));
                }
        return out;
    };

    std::optional<ProtocolPlan> best;
    double best_p = -1.0;
    for (const auto& code : shapes(leaves)) {
        ProtocolPlan plan;
        plan.scheme = Scheme::Custom;
        plan.target_n = n;
        plan.target_angle = gamma;
        plan.beta1 = beta1;
        std::size_t pos = 0;
        plan.root = build(plan, code, pos);
        const double p = evaluate_plan(plan).p_gen;
        if (p > best_p + 1e-15) {
            best_p = p;
            best = std::move(plan);
        }
    }
    return *best;
}

namespace detail {

/// SplitMix64 step; also used to derive independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class TrialStream {
  public:
    TrialStream(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t s = seed;
        state_ = splitmix64(s) ^ (trial * 0xD1B54A32D192ED03ULL);
        splitmix64(state_);
    }
    double uniform() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_ = 0;
};

} // namespace detail

/// Restart-on-failure Monte Carlo: a trial samples every fusion node's outcome
/// and succeeds only if all of them herald success. Trial i draws from a stream
/// derived from (seed, i), so results do not depend on evaluation order.
inline TrialStats simulate_plan(const ProtocolPlan& plan, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::domain_error("simulate_plan needs at least one trial");
    const auto order = plan_post_order(plan);
    const PlanMetrics metrics = evaluate_plan(plan);

    struct Branch {
        double cumulative;
        double angle;
        std::size_t qubits;
    };
    std::vector<std::vector<Branch>> tables;
    {
        std::vector<std::optional<SchmidtState>> state(plan.nodes.size());
        for (std::size_t idx : order) {
            const PlanNode& node = plan.nodes[idx];
            if (node.is_leaf()) {
                state[idx] = SchmidtState(plan.resources[*node.resource].n, plan.resources[*node.resource].angle);
                continue;
            }
            std::vector<Branch> table;
            double acc = 0.0;
            for (const auto& o : node_outcomes(node.gate, node.theta, *state[node.left], *state[node.right])) {
                if (!o.success()) continue;
                acc += o.probability;
                table.push_back({acc, o.output->angle(), o.output->n_qubits()});
            }
            state[idx] = SchmidtState(table.back().qubits, table.back().angle);
            tables.push_back(std::move(table));
        }
    }

    TrialStats stats;
    stats.trials = trials;
    stats.seed = seed;
    for (std::uint64_t t = 0; t < trials; ++t) {
        detail::TrialStream rng(seed, t);
        bool ok = true;
        const Branch* last = nullptr;
        for (const auto& table : tables) {
            const double u = rng.uniform();
            last = nullptr;
            for (const auto& b : table)
                if (u < b.cumulative) {
                    last = &b;
                    break;
                }
            if (!last) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (last && std::abs(last->angle - metrics.output_angle) > 1e-9) {
            throw std::logic_error("trial " + std::to_string(t) + " ended at angle " + std::to_string(last->angle));
        }
        if (plan.target_n != 0 && std::abs(std::tan(metrics.output_angle) - std::tan(plan.target_angle)) > 1e-9) {
            throw std::logic_error("plan output angle differs from target");
        }
        ++stats.successes;
    }
    stats.p_hat = static_cast<double>(stats.successes) / static_cast<double>(trials);
    stats.std_error = std::sqrt(stats.p_hat * (1.0 - stats.p_hat) / static_cast<double>(trials));
    return stats;
}

struct FockExecution {
    double success_probability = 0.0;
    std::size_t branches = 0;
    std::size_t output_qubits = 0;
    double min_angle = 0.0;
    double max_angle = 0.0;
    std::size_t max_modes = 0;
    std::size_t max_photons = 0;
};

/// Runs the whole plan on dual-rail Fock states: every node is a real
/// interferometer followed by PNR detection, success heralds are kept, the
/// heralded state's Pauli frame is corrected on the photons, and the weights
/// of all surviving branches are summed.
inline FockExecution execute_plan_fock(const ProtocolPlan& plan) {
    const auto order = plan_post_order(plan);
    struct Branch {
        double weight;
        EncodedState state;
    };
    FockExecution result;
    std::vector<std::vector<Branch>> branches(plan.nodes.size());
    for (std::size_t idx : order) {
        const PlanNode& node = plan.nodes[idx];
        if (node.is_leaf()) {
            const ResourceSpec& r = plan.resources[*node.resource];
            branches[idx].push_back({1.0, make_ghz_like(r.n, r.angle)});
            continue;
        }
        const FusionSpec spec{kind_of(node.gate), node.theta};
        const ModeUnitary gate = gate_unitary(spec);
        std::vector<Branch> out;
        for (const Branch& lb : branches[node.left]) {
            for (const Branch& rb : branches[node.right]) {
                EncodedState left = lb.state;
                if (is_similar(node.gate)) {
                    PauliFrame flip(left.encoding.qubit_count());
                    for (auto& op : flip.ops) op.x = true;
                    left.state = apply_pauli_frame(left.state, left.encoding, flip);
                }
                const EncodedState joint = tensor(left, rb.state);
                const std::size_t nl = left.encoding.qubit_count();
                const RailPair qa = joint.encoding.pairs[0];
                const RailPair qb = joint.encoding.pairs[nl];
                const std::array<std::size_t, 5> port{0, qa.zero_rail, qa.one_rail, qb.zero_rail, qb.one_rail};
                const std::size_t modes = joint.state.mode_count();
                const auto photons = joint.state.photon_numbers();
                result.max_modes = std::max(result.max_modes, modes);
                result.max_photons = std::max<std::size_t>(result.max_photons, photons.empty() ? 0U : photons.back());

                std::vector<std::size_t> detected;
                for (std::size_t p : detected_ports(spec.kind)) detected.push_back(port[p]);
                QubitEncoding survivors;
                if (spec.kind == FusionKind::TypeI) survivors.pairs.push_back({port[3], port[2]});
                for (std::size_t q = 1; q < joint.encoding.qubit_count(); ++q)
                    if (q != nl) survivors.pairs.push_back(joint.encoding.pairs[q]);

                const PhotonicState evolved = apply(embed(gate, {port[1], port[2], port[3], port[4]}, modes), joint.state);
                for (const MeasurementOutcome& m : measure(evolved, detected)) {
                    DetectionPattern ports;
                    for (std::size_t p : detected_ports(spec.kind)) ports.counts[p] = m.pattern.at(port[p]);
                    if (classify(spec.kind, ports) == OutcomeLabel::Failure) continue;
                    const QubitEncoding enc = remap_encoding(survivors, m.surviving_modes);
                    const SchmidtState heralded = extract_ghz_form(m.post_state, enc);
                    PhotonicState fixed = apply_pauli_frame(m.post_state, enc, heralded.pauli_frame());
                    out.push_back({lb.weight * rb.weight * m.probability, {std::move(fixed), enc}});
                }
            }
        }
        branches[idx] = std::move(out);
    }
    const auto& final_branches = branches[plan.root];
    result.branches = final_branches.size();
    bool first = true;
    for (const Branch& b : final_branches) {
        result.success_probability += b.weight;
        const SchmidtState s = extract_ghz_form(b.state.state, b.state.encoding);
        result.output_qubits = s.n_qubits();
        result.min_angle = first ? s.angle() : std::min(result.min_angle, s.angle());
        result.max_angle = first ? s.angle() : std::max(result.max_angle, s.angle());
        first = false;
    }
    return result;
}

} // namespace ghzfuse

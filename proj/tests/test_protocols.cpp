#include <gtest/gtest.h>

#include <cmath>

#include "ghzfuse/plan_json.hpp"
#include "ghzfuse/protocols.hpp"

using namespace ghzfuse;

namespace {

std::vector<double> open_grid(int points) {
    std::vector<double> g;
    for (int k = 1; k <= points; ++k) g.push_back(kQuarterPi * k / points);
    return g;
}

} // namespace

TEST(PlanGeneral, ThreeQubitsIsOneSimilarFusion) {
    for (double alpha : {0.2, 0.5, kQuarterPi})
        for (double gamma : {0.1, 0.5, kQuarterPi}) {
            const ProtocolPlan p = plan_general(3, gamma, alpha);
            const PlanMetrics m = evaluate_plan(p);
            ASSERT_EQ(m.fusion_count, 1U);
            EXPECT_EQ(m.nodes[0].gate, NodeGate::SimilarI);
            EXPECT_NEAR(m.nodes[0].theta, gamma, 1e-15);
            EXPECT_NEAR(m.p_gen, std::pow(std::sin(2 * alpha), 2) / 2, 1e-12);
            EXPECT_EQ(m.output_qubits, 3U);
            EXPECT_NEAR(m.output_angle, gamma, 1e-12);
        }
}

TEST(PlanGeneral, SevenQubitsMaximal) {
    EXPECT_NEAR(evaluate_plan(plan_general(7, kQuarterPi, kQuarterPi)).p_gen, 1.0 / 32, 1e-15);
}

TEST(PlanGeneral, FiveQubitsFromWeakResources) {
    const PlanMetrics m = evaluate_plan(plan_general(5, kQuarterPi, kPi / 8));
    ASSERT_EQ(m.nodes.size(), 3U);
    EXPECT_NEAR(m.nodes[0].probability, 0.25, 1e-15);
    EXPECT_NEAR(m.nodes[1].probability, 0.25, 1e-15);
    EXPECT_NEAR(m.nodes[2].probability, 0.5, 1e-15);
    EXPECT_NEAR(m.p_gen, 1.0 / 32, 1e-15);
}

TEST(PlanGeneral, QubitCountAndAngleForAllN) {
    for (std::size_t n = 3; n <= 12; ++n)
        for (double g : {0.05, 0.4, kQuarterPi}) {
            const ProtocolPlan p = plan_general(n, g, 0.6);
            const PlanMetrics m = evaluate_plan(p);
            EXPECT_EQ(m.output_qubits, n);
            EXPECT_NEAR(m.output_angle, g, 1e-12);
            EXPECT_EQ(m.resource_count, n % 2 == 0 ? n : n - 1);
            EXPECT_NEAR(std::pow(std::tan(p.beta1), static_cast<double>(m.resource_count / 2)), std::tan(g), 1e-12);
        }
}

TEST(PlanGeneral, Rejections) {
    EXPECT_THROW(plan_general(2, 0.3, 0.3), std::domain_error);
    EXPECT_THROW(plan_general(5, 0.0, 0.3), std::domain_error);
    EXPECT_THROW(plan_general(5, 0.3, 0.0), std::domain_error);
    EXPECT_THROW(plan_general(5, 0.9, 0.3), std::domain_error);
}

TEST(PlanEfficient, SevenQubitsMaximal) {
    const ProtocolPlan p = plan_efficient(7, kQuarterPi);
    EXPECT_NEAR(p.beta1, kQuarterPi, 1e-15);
    const PlanMetrics m = evaluate_plan(p);
    EXPECT_EQ(m.p_gen, 1.0 / 32);
    EXPECT_EQ(m.fusion_count, 5U);
}

TEST(PlanEfficient, TwoQubitsNeedsNoFusion) {
    for (double g : {0.1, kQuarterPi}) {
        const PlanMetrics m = evaluate_plan(plan_efficient(2, g));
        EXPECT_EQ(m.fusion_count, 0U);
        EXPECT_EQ(m.p_gen, 1.0);
        EXPECT_EQ(m.output_qubits, 2U);
        EXPECT_NEAR(m.output_angle, g, 1e-15);
    }
}

// tan(beta1)^2 = tan(pi/6); P = (1 + cos^2 2 beta1)/2 = 4 - 2 sqrt3 in closed form.
TEST(PlanEfficient, ThreeQubitsSixthPi) {
    const ProtocolPlan p = plan_efficient(3, kPi / 6);
    EXPECT_NEAR(p.beta1, 0.6498, 1e-4);
    EXPECT_NEAR(std::tan(p.beta1), std::sqrt(std::tan(kPi / 6)), 1e-15);
    const PlanMetrics m = evaluate_plan(p);
    EXPECT_NEAR(m.p_gen, 4.0 - 2.0 * std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(m.p_gen, 0.535898384862, 1e-12);
    EXPECT_NEAR(execute_plan_fock(p).success_probability, m.p_gen, 1e-9);
}

TEST(PlanEfficient, MaximalEndpointsArePowersOfTwo) {
    for (std::size_t n = 3; n <= 10; ++n)
        EXPECT_EQ(evaluate_plan(plan_efficient(n, kQuarterPi)).p_gen, std::ldexp(1.0, -static_cast<int>(n - 2)));
}

TEST(PlanEfficient, IntermediateAnglesCompose) {
    const ProtocolPlan p = plan_efficient(6, 0.3);
    const PlanMetrics m = evaluate_plan(p);
    const double t1 = std::tan(p.beta1);
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        EXPECT_NEAR(std::tan(m.nodes[i].angle_out), std::pow(t1, static_cast<double>(i + 2)), 1e-12);
}

TEST(PlanEfficient, EveryNodeAtLeastHalf) {
    for (std::size_t n = 3; n <= 10; ++n)
        for (double g : open_grid(20)) {
            for (const auto& node : evaluate_plan(plan_efficient(n, g)).nodes) EXPECT_GE(node.probability, 0.5);
            for (const auto& node : evaluate_plan(plan_general(n, g, 0.4)).nodes)
                if (!is_similar(node.gate)) { EXPECT_GE(node.probability, 0.5); }
        }
}

TEST(PlanEfficient, DominatesGeneral) {
    for (std::size_t n = 3; n <= 9; ++n)
        for (double g : open_grid(20))
            for (double a : open_grid(20))
                EXPECT_GE(evaluate_plan(plan_efficient(n, g)).p_gen, evaluate_plan(plan_general(n, g, a)).p_gen)
                    << n << " " << g << " " << a;
}

TEST(PlanEfficient, Rejections) {
    EXPECT_THROW(plan_efficient(1, 0.3), std::domain_error);
    EXPECT_THROW(plan_efficient(4, 0.0), std::domain_error);
    EXPECT_THROW(plan_efficient_from({}, 0.3), std::domain_error);
}

TEST(PlanEfficient, ChainVersusBestTopology) {
    for (std::size_t n = 3; n <= 6; ++n)
        for (double g : {0.1, 0.4, kQuarterPi}) {
            const PlanMetrics best = evaluate_plan(best_efficient_topology(n, g));
            const PlanMetrics chain = evaluate_plan(plan_efficient(n, g));
            EXPECT_GE(best.p_gen + 1e-15, chain.p_gen);
            EXPECT_EQ(best.output_qubits, n);
            EXPECT_NEAR(best.output_angle, g, 1e-12);
        }
}

TEST(EvaluatePlan, ProductOfNodes) {
    const PlanMetrics m = evaluate_plan(plan_general(8, 0.3, 0.5));
    double prod = 1.0;
    for (const auto& n : m.nodes) prod *= n.probability;
    EXPECT_NEAR(m.p_gen, prod, 1e-12);
    EXPECT_GT(m.p_gen, 0.0);
    EXPECT_LE(m.p_gen, 1.0);
}

TEST(EvaluatePlan, SeparableNodeContributesOne) {
    ProtocolPlan p;
    const auto l = p.add_leaf({2, 0.0});
    const auto r = p.add_leaf({3, 0.0});
    p.root = p.add_fusion(NodeGate::TypeI, kQuarterPi, l, r);
    const PlanMetrics m = evaluate_plan(p);
    EXPECT_EQ(m.p_gen, 1.0);
    EXPECT_EQ(m.output_qubits, 4U);
}

TEST(EvaluatePlan, RejectsMalformedTrees) {
    ProtocolPlan p;
    const auto l = p.add_leaf({2, 0.3});
    p.root = p.add_fusion(NodeGate::TypeI, kQuarterPi, l, l);
    EXPECT_THROW(evaluate_plan(p), std::invalid_argument);

    ProtocolPlan q;
    q.add_leaf({2, 0.3});
    q.add_leaf({2, 0.3});
    q.root = 0;
    EXPECT_THROW(evaluate_plan(q), std::invalid_argument);

    EXPECT_THROW(evaluate_plan(ProtocolPlan{}), std::invalid_argument);
}

TEST(EvaluatePlan, RejectsWrongTarget) {
    ProtocolPlan p = plan_efficient_from({2, 2}, kQuarterPi);
    p.target_n = 5;
    EXPECT_THROW(evaluate_plan(p), std::invalid_argument);
    ProtocolPlan q = plan_efficient(4, 0.3);
    q.target_angle = 0.2;
    EXPECT_THROW(evaluate_plan(q), std::invalid_argument);
}

TEST(EvaluatePlan, RejectsBranchDependentAngles) {
    ProtocolPlan p;
    const auto l = p.add_leaf({2, 0.5});
    const auto r = p.add_leaf({2, 0.5});
    p.root = p.add_fusion(NodeGate::TypeI, 0.2, l, r);
    EXPECT_THROW(evaluate_plan(p), std::invalid_argument);
}

TEST(SimulatePlan, MatchesAnalyticWithinThreeSigma) {
    for (const ProtocolPlan& plan : {plan_efficient(7, kQuarterPi), plan_general(5, 0.3, 0.6), plan_efficient(4, 0.2)}) {
        const double p = evaluate_plan(plan).p_gen;
        const TrialStats s = simulate_plan(plan, 1'000'000, 2024);
        const double se = std::sqrt(p * (1 - p) / 1e6);
        EXPECT_LT(std::abs(s.p_hat - p), 3 * se) << to_string(plan.scheme) << " " << plan.target_n;
        EXPECT_EQ(s.p_hat, static_cast<double>(s.successes) / 1e6);
        EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(s.p_hat * (1 - s.p_hat) / 1e6));
    }
}

TEST(SimulatePlan, SeparableLeavesAlwaysSucceed) {
    ProtocolPlan p;
    std::size_t acc = p.add_leaf({2, 0.0});
    for (int i = 0; i < 4; ++i) acc = p.add_fusion(NodeGate::TypeI, kQuarterPi, acc, p.add_leaf({2, 0.0}));
    p.root = acc;
    const TrialStats s = simulate_plan(p, 10000, 3);
    EXPECT_EQ(s.successes, 10000U);
    EXPECT_EQ(s.std_error, 0.0);
}

TEST(SimulatePlan, Deterministic) {
    const ProtocolPlan p = plan_general(6, 0.4, 0.5);
    const TrialStats a = simulate_plan(p, 50000, 99);
    const TrialStats b = simulate_plan(p, 50000, 99);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.successes, simulate_plan(p, 50000, 100).successes);
}

TEST(SimulatePlan, TrialStreamsArePrefixStable) {
    const ProtocolPlan p = plan_efficient(5, 0.5);
    const TrialStats small = simulate_plan(p, 1000, 4);
    const TrialStats big = simulate_plan(p, 2000, 4);
    EXPECT_LE(small.successes, big.successes);
}

TEST(SimulatePlan, ZeroTrialsRejected) { EXPECT_THROW(simulate_plan(plan_efficient(3, 0.3), 0, 1), std::domain_error); }

TEST(ExecuteFock, EfficientAndGeneralPlans) {
    for (const ProtocolPlan& plan : {plan_efficient(3, 0.3), plan_efficient(4, kPi / 6), plan_efficient(4, kQuarterPi),
                                     plan_general(3, 0.4, 0.7), plan_general(4, 0.25, 0.6)}) {
        const PlanMetrics m = evaluate_plan(plan);
        const FockExecution f = execute_plan_fock(plan);
        EXPECT_NEAR(f.success_probability, m.p_gen, 1e-9);
        EXPECT_EQ(f.output_qubits, plan.target_n);
        EXPECT_NEAR(f.min_angle, plan.target_angle, 1e-9);
        EXPECT_NEAR(f.max_angle, plan.target_angle, 1e-9);
        EXPECT_LE(f.max_modes, 16U);
    }
}

TEST(PlanJson, RoundTrip) {
    for (const ProtocolPlan& plan : {plan_efficient(5, 0.3), plan_general(6, 0.2, 0.5), plan_efficient(2, 0.1)}) {
        const json j = to_json(plan);
        const ProtocolPlan back = plan_from_json(json::parse(j.dump()));
        EXPECT_EQ(to_json(back), j);
        EXPECT_EQ(evaluate_plan(back).p_gen, evaluate_plan(plan).p_gen);
    }
}

TEST(PlanJson, TargetsInferredFromTree) {
    const json j = json::parse(R"({"tree": {"gate": "I", "children": [{"n": 2, "angle": 0.4}, {"n": 3, "angle": 0.4}]}})");
    const ProtocolPlan p = plan_from_json(j);
    EXPECT_EQ(p.target_n, 4U);
    EXPECT_EQ(p.scheme, Scheme::Custom);
    EXPECT_NEAR(std::tan(p.target_angle), std::tan(0.4) * std::tan(0.4), 1e-12);
}

TEST(PlanJson, Errors) {
    EXPECT_THROW(plan_from_json(json::parse(R"({"tree": {"gate": "III", "children": [{"n":2,"angle":0.1},{"n":2,"angle":0.1}]}})")),
                 std::invalid_argument);
    EXPECT_THROW(plan_from_json(json::parse(R"({"tree": {"n": 2}})")), std::invalid_argument);
    EXPECT_THROW(plan_from_json(json::parse(R"({"tree": {"n": 2, "angle": 1.2}})")), std::domain_error);
    EXPECT_THROW(plan_from_json(json::parse(R"({"target_n": 5, "tree": {"gate": "I", "children": [{"n":2,"angle":0.1},{"n":2,"angle":0.1}]}})")),
                 std::invalid_argument);
    EXPECT_THROW(plan_from_json(json::parse(R"({"tree": {"gate": "I", "children": [{"n":2,"angle":0.1}]}})")),
                 std::invalid_argument);
}

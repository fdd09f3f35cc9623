#pragma once

// Self-check that cross-validates the closed-form layer against the Fock
// oracle, the entropy inequality, and Monte Carlo sampling.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ghzfuse/analysis.hpp"
#include "ghzfuse/fusion.hpp"
#include "ghzfuse/protocols.hpp"

namespace ghzfuse {

struct VerifyOptions {
    std::uint64_t trials = 200000;
    std::uint64_t seed = 1;
    /// Test hook: mutates the closed-form outcomes before they are compared.
    std::function<void(OutcomeList&)> tamper;
};

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Flips the relative sign recorded on every branch-B output.
inline void inject_sign_error(OutcomeList& outcomes) {
    for (auto& o : outcomes) {
        if (o.label != OutcomeLabel::SuccessB) continue;
        const auto& s = *o.output;
        o.output = SchmidtState(s.n_qubits(), s.angle(), -s.phase_sign(), s.x_flipped());
        o.corrections = o.output->pauli_frame();
    }
}

namespace detail {

inline std::string grid_point(const char* kind, double a, double b, double t) {
    std::ostringstream os;
    os << "type-" << kind << " alpha=" << a << " beta=" << b << " theta=" << t;
    return os.str();
}

} // namespace detail

inline VerifyReport run_verification(const VerifyOptions& opt) {
    VerifyReport report;

    {
        CheckResult c{"oracle-vs-closed-form (10x10x5, both types)", 0.0, 1e-10, true, ""};
        CheckResult sum{"outcome probabilities sum to one", 0.0, 1e-10, true, ""};
        for (FusionKind kind : {FusionKind::TypeI, FusionKind::TypeII})
            for (int i = 0; i < 10; ++i)
                for (int j = 0; j < 10; ++j)
                    for (int k = 0; k < 5; ++k) {
                        const double a = kQuarterPi * i / 9.0;
                        const double b = kQuarterPi * j / 9.0;
                        const double t = kQuarterPi * k / 4.0;
                        const FusionSpec spec{kind, t};
                        OutcomeList sym = fuse_symbolic(SchmidtState(2, a), SchmidtState(2, b), spec);
                        if (opt.tamper) opt.tamper(sym);
                        const OutcomeList orc = fuse_oracle(SchmidtState(2, a), SchmidtState(2, b), spec);
                        const OutcomeComparison cmp = compare_outcomes(sym, orc);
                        const double dev = std::max(cmp.max_probability_deviation, cmp.max_angle_deviation);
                        const std::string where = detail::grid_point(to_string(kind).c_str(), a, b, t);
                        if (dev > c.max_deviation) c.max_deviation = dev;
                        if (!cmp.agrees(c.tolerance) && c.passed) {
                            c.passed = false;
                            c.detail = where + ": " + cmp.worst;
                        }
                        for (const OutcomeList* list : {static_cast<const OutcomeList*>(&sym), &orc}) {
                            const double d = std::abs(total_probability(*list) - 1.0);
                            if (d > sum.max_deviation) sum.max_deviation = d;
                            if (d > sum.tolerance && sum.passed) {
                                sum.passed = false;
                                sum.detail = where;
                            }
                        }
                    }
        report.checks.push_back(c);
        report.checks.push_back(sum);
    }

    {
        CheckResult c{"modified-gate branches sum to the standard law (20^3)", 0.0, 1e-12, true, ""};
        CheckResult gap{"entropy gap non-negative (20^3)", 0.0, 1e-12, true, ""};
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j)
                for (int k = 0; k < 20; ++k) {
                    const double a = kQuarterPi * i / 19.0;
                    const double b = kQuarterPi * j / 19.0;
                    const double t = kQuarterPi * k / 19.0;
                    const OutcomeList out =
                        fuse_symbolic(SchmidtState(2, a), SchmidtState(2, b), FusionSpec{FusionKind::TypeI, t});
                    const double d = std::abs(total_success(out) - closed_form::standard_success(a, b));
                    c.max_deviation = std::max(c.max_deviation, d);
                    if (d > c.tolerance && c.passed) {
                        c.passed = false;
                        c.detail = detail::grid_point("I", a, b, t);
                    }
                    const double g = entropy_gap(a, b, t);
                    gap.max_deviation = std::max(gap.max_deviation, std::max(0.0, -g));
                    if (g < -gap.tolerance && gap.passed) {
                        gap.passed = false;
                        gap.detail = detail::grid_point("I", a, b, t) + " gap=" + std::to_string(g);
                    }
                }
        report.checks.push_back(c);
        report.checks.push_back(gap);
    }

    {
        CheckResult c{"end-to-end Fock execution (N=3,4)", 0.0, 1e-9, true, ""};
        for (const ProtocolPlan& plan :
             {plan_efficient(3, kPi / 6), plan_efficient(4, 0.4), plan_general(3, 0.5, 0.6), plan_general(4, 0.3, 0.7)}) {
            const PlanMetrics m = evaluate_plan(plan);
            const FockExecution f = execute_plan_fock(plan);
            const double dev = std::max({std::abs(f.success_probability - m.p_gen), std::abs(f.min_angle - plan.target_angle),
                                         std::abs(f.max_angle - plan.target_angle)});
            c.max_deviation = std::max(c.max_deviation, dev);
            if ((dev > c.tolerance || f.output_qubits != plan.target_n) && c.passed) {
                c.passed = false;
                c.detail = to_string(plan.scheme) + " N=" + std::to_string(plan.target_n);
            }
        }
        report.checks.push_back(c);
    }

    {
        CheckResult c{"Monte Carlo within 3 standard errors", 0.0, 3.0, true, ""};
        for (const ProtocolPlan& plan : {plan_efficient(7, kQuarterPi), plan_efficient(5, 0.3), plan_general(5, 0.4, 0.5)}) {
            const double p = evaluate_plan(plan).p_gen;
            const TrialStats s = simulate_plan(plan, opt.trials, opt.seed);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(s.trials));
            const double z = se > 0.0 ? std::abs(s.p_hat - p) / se : 0.0;
            c.max_deviation = std::max(c.max_deviation, z);
            if (z > c.tolerance && c.passed) {
                c.passed = false;
                c.detail = to_string(plan.scheme) + " N=" + std::to_string(plan.target_n) +
                           " p_hat=" + std::to_string(s.p_hat) + " p=" + std::to_string(p);
            }
        }
        report.checks.push_back(c);
    }
    return report;
}

} // namespace ghzfuse

#pragma once

// Standard and VBS-modified type-I / type-II fusion of GHZ-like states.
//
// Gate ports follow the dual-rail layout of the two fused qubits:
//   port 1 = qubit a |0> rail, port 2 = qubit a |1> rail,
//   port 3 = qubit b |0> rail, port 4 = qubit b |1> rail.
// Type-I:  VBS(theta) on ports (1,4); PNRDs on ports 1 and 4; the surviving
//          rails (3,2) become the |0>,|1> rails of the merged qubit c.
// Type-II: VBS(theta) on ports (1,4) plus a 50:50 splitter on ports (2,3);
//          PNRDs on all four ports.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzfuse/fock.hpp"
#include "ghzfuse/optics.hpp"

namespace ghzfuse {

enum class FusionKind { TypeI, TypeII };

inline std::string to_string(FusionKind k) { return k == FusionKind::TypeI ? "I" : "II"; }

struct FusionSpec {
    FusionKind kind = FusionKind::TypeI;
    double theta = kQuarterPi;

    static FusionSpec standard(FusionKind kind) { return {kind, kQuarterPi}; }

    [[nodiscard]] bool is_standard() const noexcept { return std::abs(theta - kQuarterPi) <= kAngleSlack; }

    void validate() const {
        if (!std::isfinite(theta) || theta < 0.0 || theta > kQuarterPi + kAngleSlack) {
            throw std::domain_error("fusion VBS angle " + std::to_string(theta) + " outside [0, pi/4]");
        }
    }
};

enum class OutcomeLabel { SuccessA, SuccessB, Failure };

inline std::string to_string(OutcomeLabel l) {
    switch (l) {
    case OutcomeLabel::SuccessA: return "success-A";
    case OutcomeLabel::SuccessB: return "success-B";
    case OutcomeLabel::Failure: return "failure";
    }
    return "?";
}

/// Which product state is left behind by a failed fusion.
enum class SeparableBranch { A0B1, A1B0 };

inline std::string to_string(SeparableBranch b) { return b == SeparableBranch::A0B1 ? "A0B1" : "A1B0"; }

struct FusionOutcome {
    OutcomeLabel label = OutcomeLabel::Failure;
    DetectionPattern pattern; ///< keyed by gate port (1..4)
    double probability = 0.0;
    std::optional<SchmidtState> output;  ///< heralded state (success only)
    std::optional<SeparableBranch> separable;  ///< failure only
    PauliFrame corrections;  ///< feed-forward that brings `output` to canonical form

    [[nodiscard]] bool success() const noexcept { return label != OutcomeLabel::Failure; }
};

using OutcomeList = std::vector<FusionOutcome>;

inline double total_success(const OutcomeList& outcomes) {
    double p = 0.0;
    for (const auto& o : outcomes)
        if (o.success()) p += o.probability;
    return p;
}

inline double total_probability(const OutcomeList& outcomes) {
    double p = 0.0;
    for (const auto& o : outcomes) p += o.probability;
    return p;
}

inline double label_probability(const OutcomeList& outcomes, OutcomeLabel label) {
    double p = 0.0;
    for (const auto& o : outcomes)
        if (o.label == label) p += o.probability;
    return p;
}

inline std::vector<std::size_t> detected_ports(FusionKind kind) {
    return kind == FusionKind::TypeI ? std::vector<std::size_t>{1, 4} : std::vector<std::size_t>{1, 2, 3, 4};
}

inline std::size_t fused_qubit_count(std::size_t n, std::size_t m, FusionKind kind) {
    const std::size_t consumed = kind == FusionKind::TypeI ? 1 : 2;
    if (n == 0 || m == 0 || n + m <= consumed) {
        throw std::domain_error("fusion of " + std::to_string(n) + "- and " + std::to_string(m) +
                                "-qubit states leaves no qubits");
    }
    return n + m - consumed;
}

/// Pattern over the detected ports of `kind`, with unlisted ports at zero.
inline DetectionPattern port_pattern(FusionKind kind, std::initializer_list<std::pair<std::size_t, unsigned>> hits) {
    DetectionPattern p;
    for (std::size_t port : detected_ports(kind)) p.counts[port] = 0;
    for (const auto& [port, count] : hits) p.counts[port] = count;
    return p;
}

/// Herald classification: type-I succeeds on exactly one photon across ports
/// 1 and 4; type-II on single photons in port pairs {1,2},{1,3} (branch A) or
/// {2,4},{3,4} (branch B).
inline OutcomeLabel classify(FusionKind kind, const DetectionPattern& p) {
    if (kind == FusionKind::TypeI) {
        if (p.total() != 1) return OutcomeLabel::Failure;
        return p.at(1) == 1 ? OutcomeLabel::SuccessA : OutcomeLabel::SuccessB;
    }
    if (p.total() != 2) return OutcomeLabel::Failure;
    std::vector<std::size_t> hit;
    for (const auto& [port, c] : p.counts) {
        if (c > 1) return OutcomeLabel::Failure;
        if (c == 1) hit.push_back(port);
    }
    const std::array<std::size_t, 2> pair{hit[0], hit[1]};
    if (pair == std::array<std::size_t, 2>{1, 2} || pair == std::array<std::size_t, 2>{1, 3})
        return OutcomeLabel::SuccessA;
    if (pair == std::array<std::size_t, 2>{2, 4} || pair == std::array<std::size_t, 2>{3, 4})
        return OutcomeLabel::SuccessB;
    return OutcomeLabel::Failure;
}

/// 4x4 transfer matrix of the gate on ports 1..4 (matrix index = port - 1).
inline ModeUnitary gate_unitary(const FusionSpec& spec) {
    spec.validate();
    ModeUnitary u = embed(vbs(spec.theta), {0, 3}, 4);
    if (spec.kind == FusionKind::TypeII) u = embed(vbs(kQuarterPi), {1, 2}, 4) * u;
    return u;
}

namespace detail {

inline constexpr double kNegligibleProbability = 1e-24;

inline void push_success(OutcomeList& out, OutcomeLabel label, DetectionPattern pattern, std::size_t k, double amp0,
                         double amp1) {
    const double p = amp0 * amp0 + amp1 * amp1;
    if (p < kNegligibleProbability) return;
    FusionOutcome o;
    o.label = label;
    o.pattern = std::move(pattern);
    o.probability = p;
    o.output = SchmidtState::from_amplitudes(k, amp0, amp1);
    o.corrections = o.output->pauli_frame();
    out.push_back(std::move(o));
}

inline void push_failure(OutcomeList& out, DetectionPattern pattern, SeparableBranch branch, double p) {
    if (p < kNegligibleProbability) return;
    FusionOutcome o;
    o.pattern = std::move(pattern);
    o.probability = p;
    o.separable = branch;
    out.push_back(std::move(o));
}

} // namespace detail

/// Closed-form outcome list. The inputs are the physical states described by
/// `a` and `b` (pending frames included); qubit a of `a` and qubit b of `b` enter
/// the gate.
inline OutcomeList fuse_symbolic(const SchmidtState& a, const SchmidtState& b, const FusionSpec& spec) {
    spec.validate();
    const std::size_t k = fused_qubit_count(a.n_qubits(), b.n_qubits(), spec.kind);
    const auto [a0, a1] = a.physical_amplitudes();
    const auto [b0, b1] = b.physical_amplitudes();
    const double c = std::cos(spec.theta);
    const double s = std::sin(spec.theta);
    const double w00 = a0 * b0;
    const double w11 = a1 * b1;
    const double w01 = (a0 * b1) * (a0 * b1); // A0B1 weight
    const double w10 = (a1 * b0) * (a1 * b0); // A1B0 weight
    const double c2 = std::cos(2 * spec.theta);
    const double bunch = 0.5 * std::sin(2 * spec.theta) * std::sin(2 * spec.theta);

    OutcomeList out;
    const FusionKind kind = spec.kind;
    if (kind == FusionKind::TypeI) {
        detail::push_success(out, OutcomeLabel::SuccessA, port_pattern(kind, {{1, 1}}), k, c * w00, s * w11);
        detail::push_success(out, OutcomeLabel::SuccessB, port_pattern(kind, {{4, 1}}), k, s * w00, -c * w11);
        detail::push_failure(out, port_pattern(kind, {}), SeparableBranch::A1B0, w10);
        detail::push_failure(out, port_pattern(kind, {{1, 1}, {4, 1}}), SeparableBranch::A0B1, c2 * c2 * w01);
        detail::push_failure(out, port_pattern(kind, {{1, 2}}), SeparableBranch::A0B1, bunch * w01);
        detail::push_failure(out, port_pattern(kind, {{4, 2}}), SeparableBranch::A0B1, bunch * w01);
        return out;
    }
    const double r = 1.0 / std::sqrt(2.0);
    detail::push_success(out, OutcomeLabel::SuccessA, port_pattern(kind, {{1, 1}, {2, 1}}), k, r * c * w00, r * s * w11);
    detail::push_success(out, OutcomeLabel::SuccessA, port_pattern(kind, {{1, 1}, {3, 1}}), k, -r * c * w00, r * s * w11);
    detail::push_success(out, OutcomeLabel::SuccessB, port_pattern(kind, {{2, 1}, {4, 1}}), k, r * s * w00, -r * c * w11);
    detail::push_success(out, OutcomeLabel::SuccessB, port_pattern(kind, {{3, 1}, {4, 1}}), k, -r * s * w00, -r * c * w11);
    detail::push_failure(out, port_pattern(kind, {{1, 2}}), SeparableBranch::A0B1, bunch * w01);
    detail::push_failure(out, port_pattern(kind, {{4, 2}}), SeparableBranch::A0B1, bunch * w01);
    detail::push_failure(out, port_pattern(kind, {{1, 1}, {4, 1}}), SeparableBranch::A0B1, c2 * c2 * w01);
    detail::push_failure(out, port_pattern(kind, {{2, 2}}), SeparableBranch::A1B0, 0.5 * w10);
    detail::push_failure(out, port_pattern(kind, {{3, 2}}), SeparableBranch::A1B0, 0.5 * w10);
    return out;
}

/// Reference route: builds both inputs as 2-qubit dual-rail Fock states (the
/// second qubit standing in for the untouched remainder), runs the gate through
/// the optics layer, and classifies every detection pattern.
inline OutcomeList fuse_oracle(const SchmidtState& a, const SchmidtState& b, const FusionSpec& spec) {
    spec.validate();
    const std::size_t k = fused_qubit_count(a.n_qubits(), b.n_qubits(), spec.kind);
    const EncodedState ea = instantiate(a, 2);
    const EncodedState eb = instantiate(b, 2);
    const EncodedState joint = tensor(ea, eb);
    const RailPair qa = joint.encoding.pairs[0];
    const RailPair spectator_a = joint.encoding.pairs[1];
    const RailPair qb = joint.encoding.pairs[2];
    const RailPair spectator_b = joint.encoding.pairs[3];
    const std::array<std::size_t, 5> port_mode{0, qa.zero_rail, qa.one_rail, qb.zero_rail, qb.one_rail};

    const std::vector<std::size_t> ports = detected_ports(spec.kind);
    std::vector<std::size_t> detected;
    for (std::size_t p : ports) detected.push_back(port_mode[p]);

    const ModeUnitary u = embed(gate_unitary(spec), {port_mode[1], port_mode[2], port_mode[3], port_mode[4]},
                                joint.state.mode_count());
    const PhotonicState evolved = apply(u, joint.state);

    QubitEncoding survivors;
    if (spec.kind == FusionKind::TypeI) survivors.pairs.push_back({port_mode[3], port_mode[2]});
    survivors.pairs.push_back(spectator_a);
    survivors.pairs.push_back(spectator_b);

    OutcomeList out;
    for (const MeasurementOutcome& m : measure(evolved, detected)) {
        FusionOutcome o;
        for (std::size_t p : ports) o.pattern.counts[p] = m.pattern.at(port_mode[p]);
        o.label = classify(spec.kind, o.pattern);
        o.probability = m.probability;
        const QubitEncoding enc = remap_encoding(survivors, m.surviving_modes);
        if (o.success()) {
            o.output = extract_ghz_form(m.post_state, enc).with_qubits(k);
            o.corrections = o.output->pauli_frame();
        } else {
            const auto& lead = m.post_state.terms().begin()->first;
            const RailPair sa = enc.pairs[enc.qubit_count() - 2];
            const RailPair sb = enc.pairs[enc.qubit_count() - 1];
            const bool a_one = lead[sa.one_rail] == 1;
            const bool b_one = lead[sb.one_rail] == 1;
            if (a_one == b_one) throw std::logic_error("failed fusion left a correlated remainder");
            o.separable = a_one ? SeparableBranch::A1B0 : SeparableBranch::A0B1;
        }
        out.push_back(std::move(o));
    }
    return out;
}

/// Similar-state fusion: X on every qubit of `a`, then modified fusion with
/// VBS(theta_target). Both success branches herald a GHZ-like state of angle
/// theta_target; branch B's feed-forward is Z on one qubit followed by X on all.
inline OutcomeList fuse_similar(const SchmidtState& a, const SchmidtState& b, double theta_target,
                                FusionKind kind = FusionKind::TypeI) {
    if (std::abs(a.angle() - b.angle()) > 1e-12) {
        throw std::domain_error("similar-state fusion needs equal Schmidt angles (got " + std::to_string(a.angle()) +
                                " and " + std::to_string(b.angle()) + ")");
    }
    const FusionSpec spec{kind, theta_target};
    spec.validate();
    return fuse_symbolic(a.corrected().x_all(), b.corrected(), spec);
}

/// Closed forms used for cross-checks and quick evaluation.
namespace closed_form {

/// Success probability of a standard gate (either type).
inline double standard_success(double alpha, double beta) {
    return 0.5 * (1.0 + std::cos(2 * alpha) * std::cos(2 * beta));
}

/// Branch probabilities (P1, P2) of a modified gate.
inline std::pair<double, double> modified_branches(double alpha, double beta, double theta) {
    const double cc = std::pow(std::cos(alpha) * std::cos(beta), 2);
    const double ss = std::pow(std::sin(alpha) * std::sin(beta), 2);
    const double ct = std::pow(std::cos(theta), 2);
    const double st = std::pow(std::sin(theta), 2);
    return {ct * cc + st * ss, st * cc + ct * ss};
}

/// Success probability of the similar-state procedure.
inline double similar_success(double alpha) {
    const double s = std::sin(2 * alpha);
    return 0.5 * s * s;
}

} // namespace closed_form

/// Largest disagreement between two outcome lists, matched by (label, pattern).
struct OutcomeComparison {
    double max_probability_deviation = 0.0;
    double max_angle_deviation = 0.0;
    std::size_t frame_mismatches = 0;
    std::size_t label_mismatches = 0;
    std::string worst;

    [[nodiscard]] bool agrees(double tolerance) const {
        return max_probability_deviation <= tolerance && max_angle_deviation <= tolerance && frame_mismatches == 0 &&
               label_mismatches == 0;
    }
};

/// Outcomes absent from one side count as probability zero. Angles and frames
/// are compared only where the outcome carries weight above `weight_floor`.
inline OutcomeComparison compare_outcomes(const OutcomeList& lhs, const OutcomeList& rhs, double weight_floor = 1e-9) {
    OutcomeComparison cmp;
    auto find = [](const OutcomeList& list, const DetectionPattern& p) -> const FusionOutcome* {
        for (const auto& o : list)
            if (o.pattern == p) return &o;
        return nullptr;
    };
    auto visit = [&](const FusionOutcome& o, const FusionOutcome* other) {
        const double po = other ? other->probability : 0.0;
        const double dp = std::abs(o.probability - po);
        if (dp > cmp.max_probability_deviation) {
            cmp.max_probability_deviation = dp;
            cmp.worst = "pattern " + o.pattern.to_string() + " probability " + std::to_string(o.probability) +
                        " vs " + std::to_string(po);
        }
        if (!other) return;
        if (other->label != o.label) {
            ++cmp.label_mismatches;
            cmp.worst = "pattern " + o.pattern.to_string() + " labelled " + to_string(o.label) + " vs " +
                        to_string(other->label);
            return;
        }
        if (o.probability < weight_floor || !o.success()) {
            if (!o.success() && o.separable != other->separable) ++cmp.label_mismatches;
            return;
        }
        const double da = std::abs(o.output->angle() - other->output->angle());
        if (da > cmp.max_angle_deviation) {
            cmp.max_angle_deviation = da;
            cmp.worst = "pattern " + o.pattern.to_string() + " angle " + std::to_string(o.output->angle()) + " vs " +
                        std::to_string(other->output->angle());
        }
        if (o.output->pauli_frame() != other->output->pauli_frame() ||
            o.output->n_qubits() != other->output->n_qubits()) {
            ++cmp.frame_mismatches;
            cmp.worst = "pattern " + o.pattern.to_string() + " frame " + o.output->pauli_frame().to_string() + " vs " +
                        other->output->pauli_frame().to_string();
        }
    };
    for (const auto& o : lhs) visit(o, find(rhs, o.pattern));
    for (const auto& o : rhs)
        if (!find(lhs, o.pattern)) visit(o, nullptr);
    return cmp;
}

} // namespace ghzfuse

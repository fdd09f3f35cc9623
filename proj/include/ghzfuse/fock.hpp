#pragma once

// Exact Fock-space representation of dual-rail photonic states and the
// symbolic GHZ-like (Schmidt-angle) form they reduce to.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ghzfuse {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Terms whose amplitude magnitude falls below this are dropped after every
/// state operation.
inline constexpr double kPruneThreshold = 1e-12;

/// Slack accepted on the upper end of the Schmidt-angle domain.
inline constexpr double kAngleSlack = 1e-12;

using Amplitude = std::complex<double>;

/// Photon counts per optical mode.
struct OccupationVector {
    std::vector<unsigned> counts;

    OccupationVector() = default;
    explicit OccupationVector(std::size_t modes) : counts(modes, 0U) {}
    OccupationVector(std::initializer_list<unsigned> init) : counts(init) {}
    explicit OccupationVector(std::vector<unsigned> c) : counts(std::move(c)) {}

    [[nodiscard]] std::size_t size() const noexcept { return counts.size(); }
    [[nodiscard]] unsigned total() const noexcept {
        return std::accumulate(counts.begin(), counts.end(), 0U);
    }
    unsigned& operator[](std::size_t i) { return counts[i]; }
    unsigned operator[](std::size_t i) const { return counts[i]; }

    auto operator<=>(const OccupationVector&) const = default;
    bool operator==(const OccupationVector&) const = default;

    [[nodiscard]] std::string to_string() const {
        std::string out = "|";
        for (unsigned c : counts) out += std::to_string(c);
        return out + ">>";
    }
};

/// Superposition over Fock occupation vectors. Amplitudes are stored for
/// normalized Fock kets.
class PhotonicState {
  public:
    using TermMap = std::map<OccupationVector, Amplitude>;

    PhotonicState() = default;
    explicit PhotonicState(std::size_t mode_count) : mode_count_(mode_count) {}

    static PhotonicState single(const OccupationVector& occ, Amplitude amp = 1.0) {
        PhotonicState s(occ.size());
        s.add(occ, amp);
        return s;
    }

    /// Accumulates `amp` onto the term `occ`. Call prune() when done.
    void add(const OccupationVector& occ, Amplitude amp) {
        if (occ.size() != mode_count_) {
            throw std::invalid_argument("occupation vector length " + std::to_string(occ.size()) +
                                        " does not match mode count " + std::to_string(mode_count_));
        }
        terms_[occ] += amp;
    }

    void prune(double threshold = kPruneThreshold) {
        std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
    }

    [[nodiscard]] std::size_t mode_count() const noexcept { return mode_count_; }
    [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    [[nodiscard]] Amplitude amplitude(const OccupationVector& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Amplitude{} : it->second;
    }

    [[nodiscard]] double norm_squared() const {
        double acc = 0.0;
        for (const auto& [occ, amp] : terms_) acc += std::norm(amp);
        return acc;
    }

    [[nodiscard]] PhotonicState normalized() const {
        const double n2 = norm_squared();
        if (n2 <= 0.0) throw std::domain_error("cannot normalize an empty photonic state");
        PhotonicState out(mode_count_);
        const double scale = 1.0 / std::sqrt(n2);
        for (const auto& [occ, amp] : terms_) out.terms_.emplace(occ, amp * scale);
        out.prune();
        return out;
    }

    /// Photon numbers present across all terms (sorted, unique).
    [[nodiscard]] std::vector<unsigned> photon_numbers() const {
        std::vector<unsigned> out;
        for (const auto& [occ, amp] : terms_) out.push_back(occ.total());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

  private:
    std::size_t mode_count_ = 0;
    TermMap terms_;
};

/// Dual-rail assignment: qubit i lives on modes (zero_rail, one_rail).
struct RailPair {
    std::size_t zero_rail;
    std::size_t one_rail;
    bool operator==(const RailPair&) const = default;
};

struct QubitEncoding {
    std::vector<RailPair> pairs;

    [[nodiscard]] std::size_t qubit_count() const noexcept { return pairs.size(); }

    /// Qubit i on modes (2i, 2i+1).
    static QubitEncoding contiguous(std::size_t qubits, std::size_t offset = 0) {
        QubitEncoding enc;
        for (std::size_t q = 0; q < qubits; ++q) enc.pairs.push_back({offset + 2 * q, offset + 2 * q + 1});
        return enc;
    }

    [[nodiscard]] QubitEncoding shifted(std::size_t offset) const {
        QubitEncoding out = *this;
        for (auto& p : out.pairs) {
            p.zero_rail += offset;
            p.one_rail += offset;
        }
        return out;
    }

    void validate(std::size_t mode_count) const {
        std::vector<std::size_t> seen;
        for (const auto& p : pairs) {
            for (std::size_t m : {p.zero_rail, p.one_rail}) {
                if (m >= mode_count) {
                    throw std::invalid_argument("rail mode " + std::to_string(m) + " outside mode count " +
                                                std::to_string(mode_count));
                }
                seen.push_back(m);
            }
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
            throw std::invalid_argument("qubit encoding reuses a mode");
        }
    }

    /// Occupation vector of the logical basis state |b b ... b> (b = 0 or 1).
    [[nodiscard]] OccupationVector uniform_basis(std::size_t mode_count, bool one) const {
        OccupationVector occ(mode_count);
        for (const auto& p : pairs) occ[one ? p.one_rail : p.zero_rail] = 1;
        return occ;
    }
};

struct PauliCorrection {
    bool x = false;
    bool z = false;
    bool operator==(const PauliCorrection&) const = default;
};

/// Per-qubit record of pending X/Z corrections. Order within a qubit only
/// affects the global phase, which is never tracked.
struct PauliFrame {
    std::vector<PauliCorrection> ops;

    PauliFrame() = default;
    explicit PauliFrame(std::size_t qubits) : ops(qubits) {}

    [[nodiscard]] std::size_t size() const noexcept { return ops.size(); }
    [[nodiscard]] std::size_t x_count() const {
        return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](auto c) { return c.x; }));
    }
    [[nodiscard]] std::size_t z_count() const {
        return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](auto c) { return c.z; }));
    }
    [[nodiscard]] bool is_identity() const { return x_count() == 0 && z_count() == 0; }
    [[nodiscard]] bool all_x() const { return !ops.empty() && x_count() == ops.size(); }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        if (all_x()) {
            out = "X^" + std::to_string(ops.size());
        } else {
            for (std::size_t q = 0; q < ops.size(); ++q)
                if (ops[q].x) out += (out.empty() ? "" : " ") + std::string("X") + std::to_string(q);
        }
        for (std::size_t q = 0; q < ops.size(); ++q)
            if (ops[q].z) out += (out.empty() ? "" : " ") + std::string("Z") + std::to_string(q);
        return out.empty() ? "I" : out;
    }

    bool operator==(const PauliFrame&) const = default;
};

class NotGhzLikeError : public std::runtime_error {
  public:
    NotGhzLikeError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual_weight() const noexcept { return residual_; }

  private:
    double residual_;
};

inline double checked_schmidt_angle(double angle) {
    if (!std::isfinite(angle) || angle < 0.0 || angle > kQuarterPi + kAngleSlack) {
        throw std::domain_error("Schmidt angle " + std::to_string(angle) + " outside [0, pi/4]");
    }
    return std::min(angle, kQuarterPi);
}

/// Canonical GHZ-like description of an n-qubit state
///   X^{(x)n} (cos(angle)|0..0> + phase_sign * sin(angle)|1..1>),
/// where the X layer is present iff `pauli_frame` carries X on every qubit.
/// `pauli_frame` holds the feed-forward that maps the physical state onto
/// cos(angle)|0..0> + sin(angle)|1..1>; a Z on qubit 0 mirrors phase_sign = -1.
class SchmidtState {
  public:
    SchmidtState(std::size_t n_qubits, double angle, int phase_sign = +1, bool x_flipped = false)
        : n_qubits_(n_qubits), angle_(checked_schmidt_angle(angle)), phase_sign_(phase_sign),
          frame_(n_qubits) {
        if (n_qubits == 0) throw std::domain_error("GHZ-like state needs at least one qubit");
        if (phase_sign != 1 && phase_sign != -1) throw std::domain_error("phase sign must be +1 or -1");
        if (x_flipped)
            for (auto& op : frame_.ops) op.x = true;
        if (phase_sign < 0) frame_.ops[0].z = true;
    }

    /// Canonicalizes the real superposition amp0|0..0> + amp1|1..1>.
    static SchmidtState from_amplitudes(std::size_t n_qubits, double amp0, double amp1) {
        const double norm = std::hypot(amp0, amp1);
        if (!(norm > 0.0)) throw std::domain_error("GHZ-like amplitudes are both zero");
        const double tol = 1e-12 * norm;
        const bool flip = std::abs(amp1) - std::abs(amp0) > tol;
        if (flip) std::swap(amp0, amp1);
        const bool both = std::abs(amp0) > tol && std::abs(amp1) > tol;
        const int sign = (both && (amp0 < 0.0) != (amp1 < 0.0)) ? -1 : +1;
        const double angle = std::min(std::atan2(std::abs(amp1), std::abs(amp0)), kQuarterPi);
        return SchmidtState(n_qubits, angle, sign, flip);
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] double angle() const noexcept { return angle_; }
    [[nodiscard]] int phase_sign() const noexcept { return phase_sign_; }
    [[nodiscard]] const PauliFrame& pauli_frame() const noexcept { return frame_; }
    [[nodiscard]] bool x_flipped() const noexcept { return frame_.all_x(); }

    /// Real amplitudes (on |0..0>, |1..1>) of the physical state, up to global phase.
    [[nodiscard]] std::pair<double, double> physical_amplitudes() const {
        const double c = std::cos(angle_);
        const double s = phase_sign_ * std::sin(angle_);
        return x_flipped() ? std::pair{s, c} : std::pair{c, s};
    }

    /// The state after its pending frame has been applied.
    [[nodiscard]] SchmidtState corrected() const { return SchmidtState(n_qubits_, angle_); }

    /// The state after a physical X on every qubit.
    [[nodiscard]] SchmidtState x_all() const {
        auto [a0, a1] = physical_amplitudes();
        return from_amplitudes(n_qubits_, a1, a0);
    }

    /// Same logical content on a different qubit count (frames re-spread).
    [[nodiscard]] SchmidtState with_qubits(std::size_t n) const {
        return SchmidtState(n, angle_, phase_sign_, x_flipped());
    }

  private:
    std::size_t n_qubits_ = 1;
    double angle_ = 0.0;
    int phase_sign_ = 1;
    PauliFrame frame_;
};

struct EncodedState {
    PhotonicState state;
    QubitEncoding encoding;
};

/// cos(angle)|10>>^n + sign*sin(angle)|01>>^n over 2n modes.
inline EncodedState make_ghz_like(std::size_t n, double angle, int sign = +1) {
    if (n == 0) throw std::domain_error("GHZ-like state needs at least one qubit");
    angle = checked_schmidt_angle(angle);
    if (sign != 1 && sign != -1) throw std::domain_error("phase sign must be +1 or -1");
    EncodedState out{PhotonicState(2 * n), QubitEncoding::contiguous(n)};
    out.state.add(out.encoding.uniform_basis(2 * n, false), std::cos(angle));
    out.state.add(out.encoding.uniform_basis(2 * n, true), sign * std::sin(angle));
    out.state.prune();
    return out;
}

/// Photonic realization of the physical state a SchmidtState describes, on
/// `qubits` dual-rail qubits (defaults to the state's own qubit count).
inline EncodedState instantiate(const SchmidtState& s, std::size_t qubits = 0) {
    if (qubits == 0) qubits = s.n_qubits();
    auto [a0, a1] = s.physical_amplitudes();
    EncodedState out{PhotonicState(2 * qubits), QubitEncoding::contiguous(qubits)};
    out.state.add(out.encoding.uniform_basis(2 * qubits, false), a0);
    out.state.add(out.encoding.uniform_basis(2 * qubits, true), a1);
    out.state.prune();
    return out;
}

/// Mode indices of `b` are shifted past those of `a`.
inline PhotonicState tensor(const PhotonicState& a, const PhotonicState& b) {
    PhotonicState out(a.mode_count() + b.mode_count());
    for (const auto& [oa, xa] : a.terms()) {
        for (const auto& [ob, xb] : b.terms()) {
            OccupationVector occ = oa;
            occ.counts.insert(occ.counts.end(), ob.counts.begin(), ob.counts.end());
            out.add(occ, xa * xb);
        }
    }
    out.prune();
    return out;
}

inline EncodedState tensor(const EncodedState& a, const EncodedState& b) {
    EncodedState out{tensor(a.state, b.state), a.encoding};
    const auto shifted = b.encoding.shifted(a.state.mode_count());
    out.encoding.pairs.insert(out.encoding.pairs.end(), shifted.pairs.begin(), shifted.pairs.end());
    return out;
}

/// Applies the Pauli operators in `frame` (one entry per encoded qubit).
inline PhotonicState apply_pauli_frame(const PhotonicState& s, const QubitEncoding& enc, const PauliFrame& frame) {
    if (frame.size() != enc.qubit_count()) throw std::invalid_argument("Pauli frame size does not match encoding");
    enc.validate(s.mode_count());
    PhotonicState out(s.mode_count());
    for (const auto& [occ, amp] : s.terms()) {
        OccupationVector next = occ;
        Amplitude a = amp;
        for (std::size_t q = 0; q < enc.qubit_count(); ++q) {
            const auto& rails = enc.pairs[q];
            // Z acts before X so that the frame reads as "X after Z".
            if (frame.ops[q].z && occ[rails.one_rail] % 2 == 1) a = -a;
            if (frame.ops[q].x) std::swap(next[rails.zero_rail], next[rails.one_rail]);
        }
        out.add(next, a);
    }
    out.prune();
    return out;
}

/// Reads off the GHZ-like form of `s` with respect to `enc`; global phase is
/// discarded and the result is canonicalized into [0, pi/4].
inline SchmidtState extract_ghz_form(const PhotonicState& s, const QubitEncoding& enc, double tolerance = 1e-10) {
    enc.validate(s.mode_count());
    if (enc.qubit_count() == 0) throw std::invalid_argument("encoding has no qubits");
    const double total = s.norm_squared();
    if (!(total > 0.0)) throw NotGhzLikeError("state is empty", 0.0);
    const Amplitude zero = s.amplitude(enc.uniform_basis(s.mode_count(), false));
    const Amplitude one = s.amplitude(enc.uniform_basis(s.mode_count(), true));
    const double residual = std::max(0.0, (total - std::norm(zero) - std::norm(one)) / total);
    if (residual > tolerance) {
        throw NotGhzLikeError("state has weight " + std::to_string(residual) + " outside the GHZ basis pair",
                              residual);
    }
    const Amplitude ref = std::abs(zero) >= std::abs(one) ? zero : one;
    const Amplitude unphase = std::conj(ref) / std::abs(ref);
    const Amplitude r0 = zero * unphase;
    const Amplitude r1 = one * unphase;
    const double scale = std::sqrt(total);
    if (std::abs(r0.imag()) > tolerance * scale || std::abs(r1.imag()) > tolerance * scale) {
        throw NotGhzLikeError("relative phase between GHZ components is not real", 0.0);
    }
    return SchmidtState::from_amplitudes(enc.qubit_count(), r0.real(), r1.real());
}

} // namespace ghzfuse

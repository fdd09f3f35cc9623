#pragma once

// Linear-optical mode transformations and photon-number-resolving detection.
//
// Convention: a unitary U maps creation operators as a_i^dag -> sum_j U(j,i) a_j^dag.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzfuse/fock.hpp"

namespace ghzfuse {

inline constexpr double kUnitarityTolerance = 1e-12;

class ModeUnitary {
  public:
    using Matrix = Eigen::MatrixXcd;

    explicit ModeUnitary(Matrix m, double tolerance = kUnitarityTolerance) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("mode unitary must be square");
        const double dev = (m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (m_.rows() > 0 && dev > tolerance) {
            throw std::domain_error("matrix is not unitary (max |U^dag U - I| = " + std::to_string(dev) + ")");
        }
    }

    static ModeUnitary identity(std::size_t m) {
        const auto n = static_cast<Eigen::Index>(m);
        return ModeUnitary(Matrix::Identity(n, n));
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Amplitude operator()(std::size_t row, std::size_t col) const {
        return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    /// Composition: (a * b) applies b first.
    friend ModeUnitary operator*(const ModeUnitary& a, const ModeUnitary& b) {
        if (a.dimension() != b.dimension()) throw std::invalid_argument("unitary dimension mismatch");
        return ModeUnitary(a.m_ * b.m_, 1e-10);
    }

  private:
    Matrix m_;
};

/// Variable beam splitter [[cos t, sin t], [sin t, -cos t]]; t = pi/4 is 50:50.
inline ModeUnitary vbs(double theta) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2 + kAngleSlack) {
        throw std::domain_error("VBS angle " + std::to_string(theta) + " outside [0, pi/2]");
    }
    ModeUnitary::Matrix m(2, 2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    m << c, s, s, -c;
    return ModeUnitary(m);
}

/// Lifts `u` onto `modes` of a `total`-mode system; identity elsewhere.
inline ModeUnitary embed(const ModeUnitary& u, const std::vector<std::size_t>& modes, std::size_t total) {
    if (modes.size() != u.dimension()) {
        throw std::invalid_argument("embed: " + std::to_string(modes.size()) + " target modes for a " +
                                    std::to_string(u.dimension()) + "-mode unitary");
    }
    std::vector<bool> used(total, false);
    for (std::size_t m : modes) {
        if (m >= total) throw std::domain_error("embed: mode " + std::to_string(m) + " outside " + std::to_string(total));
        if (used[m]) throw std::domain_error("embed: mode " + std::to_string(m) + " listed twice");
        used[m] = true;
    }
    const auto n = static_cast<Eigen::Index>(total);
    ModeUnitary::Matrix big = ModeUnitary::Matrix::Identity(n, n);
    for (std::size_t r = 0; r < modes.size(); ++r)
        for (std::size_t c = 0; c < modes.size(); ++c)
            big(static_cast<Eigen::Index>(modes[r]), static_cast<Eigen::Index>(modes[c])) = u(r, c);
    return ModeUnitary(big, 1e-10);
}

namespace detail {

inline double sqrt_factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return std::sqrt(f);
}

} // namespace detail

/// Evolves `s` through the linear-optical network `u`.
inline PhotonicState apply(const ModeUnitary& u, const PhotonicState& s) {
    const std::size_t m = s.mode_count();
    if (u.dimension() != m) {
        throw std::invalid_argument("apply: unitary of dimension " + std::to_string(u.dimension()) +
                                    " on a state with " + std::to_string(m) + " modes");
    }
    // Sparse image of each input creation operator.
    std::vector<std::vector<std::pair<std::size_t, Amplitude>>> image(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (std::abs(u(j, i)) > 0.0) image[i].emplace_back(j, u(j, i));

    PhotonicState out(m);
    for (const auto& [occ, amp] : s.terms()) {
        // Polynomial in output creation operators, keyed by monomial exponents.
        std::map<OccupationVector, Amplitude> poly;
        double denom = 1.0;
        for (std::size_t i = 0; i < m; ++i) denom *= detail::sqrt_factorial(occ[i]);
        poly.emplace(OccupationVector(m), amp / denom);
        for (std::size_t i = 0; i < m; ++i) {
            for (unsigned k = 0; k < occ[i]; ++k) {
                std::map<OccupationVector, Amplitude> next;
                for (const auto& [mono, coef] : poly) {
                    for (const auto& [j, uji] : image[i]) {
                        OccupationVector grown = mono;
                        ++grown[j];
                        next[grown] += coef * uji;
                    }
                }
                poly = std::move(next);
            }
        }
        for (const auto& [mono, coef] : poly) {
            double numer = 1.0;
            for (std::size_t j = 0; j < m; ++j) numer *= detail::sqrt_factorial(mono[j]);
            out.add(mono, coef * numer);
        }
    }
    out.prune();
    return out;
}

/// Photon counts registered on a set of detected modes.
struct DetectionPattern {
    std::map<std::size_t, unsigned> counts;

    [[nodiscard]] unsigned total() const {
        unsigned t = 0;
        for (const auto& [mode, c] : counts) t += c;
        return t;
    }
    [[nodiscard]] unsigned at(std::size_t mode) const {
        auto it = counts.find(mode);
        return it == counts.end() ? 0U : it->second;
    }
    [[nodiscard]] std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [mode, c] : counts) {
            out += (first ? "" : ",") + std::to_string(mode) + ":" + std::to_string(c);
            first = false;
        }
        return out + "}";
    }
    auto operator<=>(const DetectionPattern&) const = default;
    bool operator==(const DetectionPattern&) const = default;
};

struct MeasurementOutcome {
    DetectionPattern pattern;
    double probability = 0.0;
    PhotonicState post_state;               ///< normalized, on the undetected modes
    std::vector<std::size_t> surviving_modes; ///< original index of each post_state mode
};

/// Ideal PNR detection of `detected_modes`; one outcome per pattern with
/// nonzero probability, ordered by pattern.
inline std::vector<MeasurementOutcome> measure(const PhotonicState& s, const std::vector<std::size_t>& detected_modes) {
    if (s.empty()) throw std::domain_error("measure: empty state");
    const std::size_t m = s.mode_count();
    std::vector<bool> detected(m, false);
    for (std::size_t d : detected_modes) {
        if (d >= m) throw std::invalid_argument("measure: mode " + std::to_string(d) + " outside state");
        if (detected[d]) throw std::invalid_argument("measure: mode " + std::to_string(d) + " listed twice");
        detected[d] = true;
    }
    std::vector<std::size_t> surviving;
    for (std::size_t i = 0; i < m; ++i)
        if (!detected[i]) surviving.push_back(i);

    const double total = s.norm_squared();
    std::map<DetectionPattern, PhotonicState> branches;
    for (const auto& [occ, amp] : s.terms()) {
        DetectionPattern pattern;
        for (std::size_t d : detected_modes) pattern.counts[d] = occ[d];
        OccupationVector rest(surviving.size());
        for (std::size_t k = 0; k < surviving.size(); ++k) rest[k] = occ[surviving[k]];
        auto [it, inserted] = branches.try_emplace(pattern, surviving.size());
        it->second.add(rest, amp);
    }

    std::vector<MeasurementOutcome> out;
    for (auto& [pattern, branch] : branches) {
        branch.prune(0.0);
        const double weight = branch.norm_squared();
        if (!(weight > 0.0)) continue;
        out.push_back({pattern, weight / total, branch.normalized(), surviving});
    }
    return out;
}

/// Re-indexes an encoding onto the modes that survived a measurement.
inline QubitEncoding remap_encoding(const QubitEncoding& enc, const std::vector<std::size_t>& surviving_modes) {
    auto lookup = [&](std::size_t old) {
        for (std::size_t k = 0; k < surviving_modes.size(); ++k)
            if (surviving_modes[k] == old) return k;
        throw std::invalid_argument("mode " + std::to_string(old) + " did not survive the measurement");
    };
    QubitEncoding out;
    for (const auto& p : enc.pairs) out.pairs.push_back({lookup(p.zero_rail), lookup(p.one_rail)});
    return out;
}

} // namespace ghzfuse

#pragma once

// Reference computations used only by the tests. They share no code paths
// with the library: transition amplitudes come from matrix permanents and
// entropies from explicit reduced density matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include "ghzfuse/fock.hpp"
#include "ghzfuse/optics.hpp"

namespace oracle {

using ghzfuse::Amplitude;
using ghzfuse::OccupationVector;
using ghzfuse::PhotonicState;

inline double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

/// Brute-force permanent over all permutations; fine for the <= 6 photon
/// states the tests use.
inline Amplitude permanent(const Eigen::MatrixXcd& m) {
    const auto n = static_cast<int>(m.rows());
    if (n == 0) return 1.0;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    Amplitude acc = 0.0;
    do {
        Amplitude prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= m(i, p[static_cast<std::size_t>(i)]);
        acc += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return acc;
}

inline std::vector<int> mode_list(const OccupationVector& occ) {
    std::vector<int> out;
    for (std::size_t i = 0; i < occ.size(); ++i)
        for (unsigned k = 0; k < occ[i]; ++k) out.push_back(static_cast<int>(i));
    return out;
}

inline void enumerate(std::size_t modes, unsigned photons, OccupationVector& cur, std::size_t at,
                      std::vector<OccupationVector>& out) {
    if (at + 1 == modes) {
        cur[at] = photons;
        out.push_back(cur);
        return;
    }
    for (unsigned k = 0; k <= photons; ++k) {
        cur[at] = k;
        enumerate(modes, photons - k, cur, at + 1, out);
    }
}

inline std::vector<OccupationVector> all_occupations(std::size_t modes, unsigned photons) {
    std::vector<OccupationVector> out;
    OccupationVector cur(modes);
    enumerate(modes, photons, cur, 0, out);
    return out;
}

/// <out|U|in> = perm(U[out rows, in cols]) / sqrt(prod n_i! prod m_j!)
inline PhotonicState evolve(const Eigen::MatrixXcd& u, const PhotonicState& s) {
    const auto m = static_cast<std::size_t>(u.rows());
    PhotonicState out(m);
    for (const auto& [in, amp] : s.terms()) {
        const auto cols = mode_list(in);
        double in_norm = 1.0;
        for (unsigned c : in.counts) in_norm *= factorial(c);
        for (const auto& occ : all_occupations(m, in.total())) {
            const auto rows = mode_list(occ);
            Eigen::MatrixXcd sub(rows.size(), cols.size());
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < cols.size(); ++c) sub(r, c) = u(rows[r], cols[c]);
            double out_norm = 1.0;
            for (unsigned c : occ.counts) out_norm *= factorial(c);
            out.add(occ, amp * permanent(sub) / std::sqrt(in_norm * out_norm));
        }
    }
    out.prune();
    return out;
}

/// Von Neumann entropy (bits) of the modes in `part` against the rest.
inline double entanglement_entropy(const PhotonicState& s, const std::vector<std::size_t>& part) {
    std::vector<bool> in_a(s.mode_count(), false);
    for (std::size_t m : part) in_a[m] = true;
    std::vector<OccupationVector> keys_a, keys_b;
    auto index = [](std::vector<OccupationVector>& keys, const OccupationVector& k) {
        auto it = std::find(keys.begin(), keys.end(), k);
        if (it != keys.end()) return static_cast<int>(it - keys.begin());
        keys.push_back(k);
        return static_cast<int>(keys.size() - 1);
    };
    std::vector<std::tuple<int, int, Amplitude>> entries;
    const double n2 = s.norm_squared();
    for (const auto& [occ, amp] : s.terms()) {
        OccupationVector a, b;
        for (std::size_t i = 0; i < occ.size(); ++i) (in_a[i] ? a : b).counts.push_back(occ[i]);
        entries.emplace_back(index(keys_a, a), index(keys_b, b), amp / std::sqrt(n2));
    }
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(keys_a.size()),
                                                 static_cast<Eigen::Index>(keys_b.size()));
    for (const auto& [i, j, amp] : entries) psi(i, j) += amp;
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double h = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-15) h -= p * std::log2(p);
    }
    return h;
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z(m, m);
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = Amplitude(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    return q;
}

inline PhotonicState random_state(std::size_t modes, unsigned photons, std::size_t terms, std::mt19937_64& rng) {
    const auto occs = all_occupations(modes, photons);
    std::uniform_int_distribution<std::size_t> pick(0, occs.size() - 1);
    std::normal_distribution<double> g;
    PhotonicState s(modes);
    for (std::size_t k = 0; k < terms; ++k) s.add(occs[pick(rng)], Amplitude(g(rng), g(rng)));
    s.prune();
    return s.normalized();
}

inline double distance(const PhotonicState& a, const PhotonicState& b) {
    double d = 0.0;
    for (const auto& [occ, amp] : a.terms()) d = std::max(d, std::abs(amp - b.amplitude(occ)));
    for (const auto& [occ, amp] : b.terms()) d = std::max(d, std::abs(amp - a.amplitude(occ)));
    return d;
}

/// One detection pattern of a two-qubit (x) two-qubit fusion, computed on an
/// 8-mode layout of its own: (a spectator, a fused, b fused, b spectator).
/// Ports 1..4 are modes 2..5. `amp0`/`amp1` are the surviving GHZ-basis
/// amplitudes (all-zero and all-one logical strings), unnormalized.
struct FusionBranch {
    std::vector<unsigned> ports; ///< counts on ports 1..4
    double probability = 0.0;
    Amplitude amp0 = 0.0;
    Amplitude amp1 = 0.0;
};

inline std::vector<FusionBranch> fusion_branches(double a0, double a1, double b0, double b1, bool type_ii,
                                                 double theta) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(8, 8);
    const double c = std::cos(theta), s = std::sin(theta);
    u(2, 2) = c;
    u(2, 5) = s;
    u(5, 2) = s;
    u(5, 5) = -c;
    if (type_ii) {
        const double r = 1.0 / std::sqrt(2.0);
        u(3, 3) = r;
        u(3, 4) = r;
        u(4, 3) = r;
        u(4, 4) = -r;
    }
    PhotonicState in(8);
    in.add({1, 0, 1, 0, 1, 0, 1, 0}, a0 * b0);
    in.add({1, 0, 1, 0, 0, 1, 0, 1}, a0 * b1);
    in.add({0, 1, 0, 1, 1, 0, 1, 0}, a1 * b0);
    in.add({0, 1, 0, 1, 0, 1, 0, 1}, a1 * b1);
    in.prune();
    const PhotonicState out = evolve(u, in);

    const std::vector<std::size_t> detected = type_ii ? std::vector<std::size_t>{2, 3, 4, 5}
                                                      : std::vector<std::size_t>{2, 5};
    std::vector<FusionBranch> branches;
    for (const auto& [occ, amp] : out.terms()) {
        std::vector<unsigned> ports(4, 0);
        for (std::size_t m : detected) ports[m - 2] = occ[m];
        auto it = std::find_if(branches.begin(), branches.end(), [&](const auto& b) { return b.ports == ports; });
        if (it == branches.end()) {
            branches.push_back({ports, 0.0, 0.0, 0.0});
            it = branches.end() - 1;
        }
        it->probability += std::norm(amp);
        // Logical zero: spectators on their zero rails and, for type I, the
        // surviving qubit (zero rail = port 3, one rail = port 2) likewise.
        const bool zero = occ[0] == 1 && occ[6] == 1 && (type_ii || (occ[4] == 1 && occ[3] == 0));
        const bool one = occ[1] == 1 && occ[7] == 1 && (type_ii || (occ[3] == 1 && occ[4] == 0));
        if (zero) it->amp0 += amp;
        if (one) it->amp1 += amp;
    }
    return branches;
}

} // namespace oracle

#pragma once

// Parameter sweeps that regenerate the data behind the standard figure set,
// written as CSV or JSON tables.

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzfuse/analysis.hpp"
#include "ghzfuse/plan_json.hpp"
#include "ghzfuse/protocols.hpp"

namespace ghzfuse {

enum class SweepPreset { Fig3, Fig5, Fig7, Fig8, Fig9 };

inline SweepPreset parse_sweep_preset(const std::string& s) {
    if (s == "fig3") return SweepPreset::Fig3;
    if (s == "fig5") return SweepPreset::Fig5;
    if (s == "fig7") return SweepPreset::Fig7;
    if (s == "fig8") return SweepPreset::Fig8;
    if (s == "fig9") return SweepPreset::Fig9;
    throw std::invalid_argument("unknown sweep preset '" + s + "'");
}

inline std::string to_string(SweepPreset p) {
    switch (p) {
    case SweepPreset::Fig3: return "fig3";
    case SweepPreset::Fig5: return "fig5";
    case SweepPreset::Fig7: return "fig7";
    case SweepPreset::Fig8: return "fig8";
    case SweepPreset::Fig9: return "fig9";
    }
    return "?";
}

struct SweepSpec {
    SweepPreset preset = SweepPreset::Fig3;
    std::size_t points = 21;           ///< samples per angle axis
    std::vector<std::size_t> n_values; ///< empty = preset default
    double alpha = kQuarterPi;         ///< general-scheme resource angle (fig8)
    double f_t = 1.0;                  ///< target rate in Hz (fig8)
};

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// points samples spanning [0, pi/4] inclusive.
inline std::vector<double> closed_angle_grid(std::size_t points) {
    if (points < 2) throw std::invalid_argument("angle grid needs at least 2 points");
    std::vector<double> g;
    for (std::size_t k = 0; k < points; ++k)
        g.push_back(k + 1 == points ? kQuarterPi : kQuarterPi * static_cast<double>(k) / static_cast<double>(points - 1));
    return g;
}

/// points samples spanning (0, pi/4]; targets and resources must be entangled.
inline std::vector<double> open_angle_grid(std::size_t points) {
    if (points < 1) throw std::invalid_argument("angle grid is empty");
    std::vector<double> g;
    for (std::size_t k = 1; k <= points; ++k)
        g.push_back(k == points ? kQuarterPi : kQuarterPi * static_cast<double>(k) / static_cast<double>(points));
    return g;
}

inline SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.points == 0) throw std::invalid_argument("sweep grid is empty");
    auto ns = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> out = spec.n_values;
        if (out.empty())
            for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    };
    SweepTable t;
    switch (spec.preset) {
    case SweepPreset::Fig3: {
        t.columns = {"alpha_rad", "beta_rad", "p_success"};
        const auto grid = closed_angle_grid(spec.points);
        for (double a : grid)
            for (double b : grid)
                t.rows.push_back({a, b, total_success(fuse_symbolic(SchmidtState(2, a), SchmidtState(2, b),
                                                                    FusionSpec::standard(FusionKind::TypeI)))});
        break;
    }
    case SweepPreset::Fig5: {
        t.columns = {"n", "alpha_rad", "gamma_rad", "beta1_rad", "p_gen"};
        const auto grid = open_angle_grid(spec.points);
        for (std::size_t n : ns(3, 9))
            for (double a : grid)
                for (double g : grid) {
                    const ProtocolPlan plan = plan_general(n, g, a);
                    t.rows.push_back({static_cast<double>(n), a, g, plan.beta1, evaluate_plan(plan).p_gen});
                }
        break;
    }
    case SweepPreset::Fig7: {
        t.columns = {"n", "gamma_rad", "beta1_rad", "p_gen"};
        const auto grid = open_angle_grid(spec.points);
        for (std::size_t n : ns(2, 10))
            for (double g : grid) {
                const ProtocolPlan plan = plan_efficient(n, g);
                t.rows.push_back({static_cast<double>(n), g, plan.beta1, evaluate_plan(plan).p_gen});
            }
        break;
    }
    case SweepPreset::Fig8: {
        t.columns = {"n", "gamma_rad", "f_r_general_hz", "f_r_efficient_hz", "f_r_maximal_reference_hz"};
        const auto grid = open_angle_grid(spec.points);
        for (std::size_t n : ns(7, 7)) {
            const double reference = spec.f_t * static_cast<double>(n - 1) * std::pow(2.0, static_cast<double>(n) - 2.0);
            for (double g : grid) {
                t.rows.push_back({static_cast<double>(n), g,
                                  required_resource_rate(n, g, Scheme::General, spec.f_t, spec.alpha).f_r,
                                  required_resource_rate(n, g, Scheme::Efficient, spec.f_t).f_r, reference});
            }
        }
        break;
    }
    case SweepPreset::Fig9: {
        t.columns = {"preset", "target_n", "gamma_rad", "beta1_rad", "photons"};
        const auto grid = open_angle_grid(spec.points);
        const SourceTable sources = default_sources();
        for (const auto& preset : multiplex_presets())
            for (double g : grid) {
                const ProtocolPlan plan = preset.plan(g);
                t.rows.push_back({static_cast<double>(preset.id), static_cast<double>(preset.target_n), g, plan.beta1,
                                  multiplex_budget(plan, sources).total});
            }
        break;
    }
    }
    return t;
}

inline std::string format_number(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

inline void write_csv(const SweepTable& t, std::ostream& os) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
        os << "\r\n";
    }
}

inline json to_json(const SweepTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) r[t.columns[c]] = row[c];
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", rows}};
}

} // namespace ghzfuse

#pragma once

// Command-line front end: fuse, plan, sweep, verify.
//
// Exit codes: 0 ok, 1 verification failure or runtime error, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzfuse/analysis.hpp"
#include "ghzfuse/fusion.hpp"
#include "ghzfuse/plan_json.hpp"
#include "ghzfuse/protocols.hpp"
#include "ghzfuse/sweep.hpp"
#include "ghzfuse/verify.hpp"

namespace ghzfuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default directory for sweep output.
inline constexpr const char* kOutputDirEnv = "GHZFUSE_OUT_DIR";

/// Inputs this far above pi/4 are read as pi/4, so that four-decimal
/// renderings such as 0.7854 are accepted.
inline constexpr double kRoundedQuarterPiSlack = 5e-5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "0.39", "pi", "pi/8", "3*pi/16"; degrees when `degrees` is set.
inline double parse_angle(const std::string& text, bool degrees) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("cannot parse angle '" + text + "'");
        }
        if (used != s.size()) throw UsageError("cannot parse angle '" + text + "'");
        return v;
    };
    double value = 0.0;
    const auto pi_pos = text.find("pi");
    if (pi_pos == std::string::npos) {
        value = number(text);
        if (degrees) value *= kPi / 180.0;
        return value;
    }
    double scale = 1.0;
    if (pi_pos > 0) {
        std::string head = text.substr(0, pi_pos);
        if (head.back() != '*') throw UsageError("cannot parse angle '" + text + "'");
        scale = number(head.substr(0, head.size() - 1));
    }
    std::string tail = text.substr(pi_pos + 2);
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') throw UsageError("cannot parse angle '" + text + "'");
        denom = number(tail.substr(1));
    }
    return scale * kPi / denom;
}

/// Angle in [lo, pi/4]; `open` excludes lo.
inline double domain_angle(const std::string& name, const std::string& text, bool degrees, bool open = false) {
    double v = parse_angle(text, degrees);
    if (v > kQuarterPi && v <= kQuarterPi + kRoundedQuarterPiSlack) v = kQuarterPi;
    if (!std::isfinite(v) || v < 0.0 || (open && v == 0.0) || v > kQuarterPi) {
        throw UsageError("--" + name + " = " + text + " is outside " + (open ? "(0, pi/4]" : "[0, pi/4]"));
    }
    return v;
}

inline std::string fmt(double v) { return format_number(v); }

inline FusionKind parse_kind(const std::string& s) {
    if (s == "I" || s == "1") return FusionKind::TypeI;
    if (s == "II" || s == "2") return FusionKind::TypeII;
    throw UsageError("--type must be I or II");
}

inline void print_outcomes(std::ostream& out, const OutcomeList& sym, const OutcomeList* oracle) {
    out << std::left << std::setw(11) << "label" << std::setw(22) << "pattern" << std::setw(16) << "probability"
        << std::setw(16) << "angle" << std::setw(8) << "qubits" << std::setw(14) << "corrections";
    if (oracle) out << std::setw(20) << "oracle_probability" << "oracle_angle";
    out << "\n";
    for (const auto& o : sym) {
        out << std::setw(11) << to_string(o.label) << std::setw(22) << o.pattern.to_string() << std::setw(16)
            << fmt(o.probability);
        if (o.success()) {
            out << std::setw(16) << fmt(o.output->angle()) << std::setw(8) << o.output->n_qubits() << std::setw(14)
                << o.corrections.to_string();
        } else {
            out << std::setw(16) << to_string(*o.separable) << std::setw(8) << "-" << std::setw(14) << "-";
        }
        if (oracle) {
            const FusionOutcome* match = nullptr;
            for (const auto& r : *oracle)
                if (r.pattern == o.pattern) match = &r;
            out << std::setw(20) << (match ? fmt(match->probability) : "0");
            out << (match && match->success() ? fmt(match->output->angle()) : "-");
        }
        out << "\n";
    }
}

inline int cmd_fuse(const std::string& type, const std::string& alpha_s, const std::string& beta_s,
                    const std::string& theta_s, std::size_t n_a, std::size_t n_b, bool similar, bool oracle,
                    bool degrees, std::ostream& out) {
    const FusionKind kind = parse_kind(type);
    const double alpha = domain_angle("alpha", alpha_s, degrees);
    const double beta = domain_angle("beta", beta_s, degrees);
    const double theta = domain_angle("theta", theta_s, degrees);
    if (n_a == 0 || n_b == 0) throw UsageError("qubit counts must be positive");
    const SchmidtState a(n_a, alpha);
    const SchmidtState b(n_b, beta);
    OutcomeList sym;
    std::optional<OutcomeList> orc;
    if (similar) {
        sym = fuse_similar(a, b, theta, kind);
        if (oracle) orc = fuse_oracle(a.x_all(), b, FusionSpec{kind, theta});
    } else {
        sym = fuse_symbolic(a, b, FusionSpec{kind, theta});
        if (oracle) orc = fuse_oracle(a, b, FusionSpec{kind, theta});
    }
    print_outcomes(out, sym, orc ? &*orc : nullptr);
    out << "total success: " << fmt(total_success(sym)) << "\n";
    if (orc) {
        const OutcomeComparison cmp = compare_outcomes(sym, *orc);
        out << "oracle total success: " << fmt(total_success(*orc)) << "\n";
        out << "max deviation: " << fmt(std::max(cmp.max_probability_deviation, cmp.max_angle_deviation)) << "\n";
        if (cmp.frame_mismatches + cmp.label_mismatches > 0) {
            out << "mismatch: " << cmp.worst << "\n";
            return kExitFailure;
        }
    }
    return kExitOk;
}

struct PlanArgs {
    std::string scheme = "efficient";
    std::size_t n = 0;
    std::string gamma = "pi/4";
    std::string alpha = "pi/4";
    std::string load;
    std::string out;
    std::uint64_t simulate = 0;
    std::uint64_t seed = 1;
    bool fock = false;
    bool degrees = false;
};

inline int cmd_plan(const PlanArgs& a, std::ostream& out) {
    ProtocolPlan plan;
    if (!a.load.empty()) {
        std::ifstream in(a.load);
        if (!in) throw UsageError("cannot read plan file '" + a.load + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError(std::string("plan file is not JSON: ") + e.what());
        }
        plan = plan_from_json(j);
    } else if (a.scheme == "efficient") {
        if (a.n < 2) throw UsageError("efficient scheme needs --n >= 2");
        plan = plan_efficient(a.n, domain_angle("gamma", a.gamma, a.degrees, true));
    } else if (a.scheme == "general") {
        if (a.n < 3) throw UsageError("general scheme needs --n >= 3");
        plan = plan_general(a.n, domain_angle("gamma", a.gamma, a.degrees, true),
                            domain_angle("alpha", a.alpha, a.degrees, true));
    } else {
        throw UsageError("--scheme must be general or efficient");
    }
    json doc = {{"plan", to_json(plan)}, {"metrics", to_json(evaluate_plan(plan))}};
    if (a.simulate > 0) doc["simulation"] = to_json(simulate_plan(plan, a.simulate, a.seed));
    if (a.fock) {
        const FockExecution f = execute_plan_fock(plan);
        doc["fock"] = {{"success_probability", f.success_probability},
                       {"branches", f.branches},
                       {"output_qubits", f.output_qubits},
                       {"min_angle", f.min_angle},
                       {"max_angle", f.max_angle},
                       {"max_modes", f.max_modes}};
    }
    if (!a.out.empty()) {
        std::ofstream file(a.out);
        if (!file) throw std::runtime_error("cannot write '" + a.out + "'");
        file << doc.dump(2) << "\n";
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
}

struct SweepArgs {
    std::string preset;
    std::size_t points = 21;
    std::vector<std::size_t> n_values;
    std::string alpha = "pi/4";
    double f_t = 1.0;
    std::string out;
    std::string format = "csv";
    bool degrees = false;
};

inline int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    SweepSpec spec;
    try {
        spec.preset = parse_sweep_preset(a.preset);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.points == 0) throw UsageError("--points must be positive");
    if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
    if (!(a.f_t > 0.0)) throw UsageError("--ft must be positive");
    spec.points = a.points;
    spec.n_values = a.n_values;
    spec.alpha = domain_angle("alpha", a.alpha, a.degrees, true);
    spec.f_t = a.f_t;
    const SweepTable table = run_sweep(spec);

    auto emit = [&](std::ostream& os) {
        if (a.format == "csv")
            write_csv(table, os);
        else
            os << to_json(table).dump(2) << "\n";
    };
    if (a.out == "-") {
        emit(out);
        return kExitOk;
    }
    std::filesystem::path path = a.out;
    if (path.empty()) {
        const char* dir = std::getenv(kOutputDirEnv);
        path = std::filesystem::path(dir && *dir ? dir : ".") / (a.preset + "." + a.format);
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    emit(file);
    out << "wrote " << table.rows.size() << " rows to " << path.string() << "\n";
    return kExitOk;
}

inline int cmd_verify(std::uint64_t trials, std::uint64_t seed, bool inject, std::ostream& out) {
    if (trials == 0) throw UsageError("--trials must be at least 1");
    VerifyOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    if (inject) opt.tamper = inject_sign_error;
    const VerifyReport report = run_verification(opt);
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_deviation=" << fmt(c.max_deviation)
            << " tolerance=" << fmt(c.tolerance);
        if (!c.detail.empty()) out << "  at " << c.detail;
        out << "\n";
    }
    return report.ok() ? kExitOk : kExitFailure;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fusion of photonic GHZ-like states: simulation, planning and resource analysis", "ghzfuse"};
    app.require_subcommand(1);
    bool degrees = false;
    app.add_flag("--deg", degrees, "read all angles in degrees");

    std::string type = "I", alpha = "0", beta = "0", theta = "pi/4";
    std::size_t n_a = 2, n_b = 2;
    bool oracle = false, similar = false;
    auto* fuse = app.add_subcommand("fuse", "fuse two GHZ-like states and list every detection outcome");
    fuse->add_option("--type", type, "gate type: I or II")->capture_default_str();
    fuse->add_option("--alpha", alpha, "Schmidt angle of the first state")->required();
    fuse->add_option("--beta", beta, "Schmidt angle of the second state")->required();
    fuse->add_option("--theta", theta, "VBS angle (pi/4 = standard gate)")->capture_default_str();
    fuse->add_option("--na", n_a, "qubits in the first state")->capture_default_str();
    fuse->add_option("--nb", n_b, "qubits in the second state")->capture_default_str();
    fuse->add_flag("--similar", similar, "similar-state procedure (X on the first state; theta is the target angle)");
    fuse->add_flag("--oracle", oracle, "also run the Fock-space oracle and report the deviation");
    fuse->add_flag("--deg", degrees, "read angles in degrees");

    PlanArgs pa;
    auto* plan = app.add_subcommand("plan", "build a generation plan and evaluate it");
    plan->add_option("--scheme", pa.scheme, "general or efficient")->capture_default_str();
    plan->add_option("--n", pa.n, "target qubit count N");
    plan->add_option("--gamma", pa.gamma, "target Schmidt angle")->capture_default_str();
    plan->add_option("--alpha", pa.alpha, "resource angle (general scheme)")->capture_default_str();
    plan->add_option("--load", pa.load, "evaluate a plan from a JSON file instead");
    plan->add_option("--out", pa.out, "also write the JSON document to this file");
    plan->add_option("--simulate", pa.simulate, "Monte Carlo trials to run");
    plan->add_option("--seed", pa.seed, "Monte Carlo seed")->capture_default_str();
    plan->add_flag("--fock", pa.fock, "also execute the plan on Fock states (small plans only)");
    plan->add_flag("--deg", pa.degrees, "read angles in degrees");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "write figure data grids as CSV/JSON");
    sweep->add_option("--preset", sa.preset, "fig3, fig5, fig7, fig8 or fig9")->required();
    sweep->add_option("--points", sa.points, "samples per angle axis")->capture_default_str();
    sweep->add_option("--n", sa.n_values, "qubit counts to sweep (preset default if omitted)");
    sweep->add_option("--alpha", sa.alpha, "general-scheme resource angle (fig8)")->capture_default_str();
    sweep->add_option("--ft", sa.f_t, "target rate in Hz (fig8)")->capture_default_str();
    sweep->add_option("--out", sa.out, "output path, '-' for stdout (default $GHZFUSE_OUT_DIR/<preset>.<format>)");
    sweep->add_option("--format", sa.format, "csv or json")->capture_default_str();
    sweep->add_flag("--deg", sa.degrees, "read angles in degrees");

    std::uint64_t trials = 200000, seed = 1;
    bool inject = false;
    auto* verify = app.add_subcommand("verify", "cross-check closed forms against the Fock oracle and Monte Carlo");
    verify->add_option("--trials", trials, "Monte Carlo trials per plan")->capture_default_str();
    verify->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
    verify->add_flag("--inject-sign-error", inject, "corrupt the closed-form branch-B sign (self-test)")
        ->group("");

    std::vector<const char*> argv{"ghzfuse"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*fuse) return cmd_fuse(type, alpha, beta, theta, n_a, n_b, similar, oracle, degrees, out);
        if (*plan) {
            pa.degrees = pa.degrees || degrees;
            return cmd_plan(pa, out);
        }
        if (*sweep) {
            sa.degrees = sa.degrees || degrees;
            return cmd_sweep(sa, out);
        }
        if (*verify) return cmd_verify(trials, seed, inject, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace ghzfuse::cli

// lindbladsim — command-line front end: spectral reports, evolution runs,
// apparatus certification, collapse verification, entropy checks, and the
// built-in two-level demo scenarios.
//
// Exit codes: 0 success / verdict pass, 1 verdict fail, 2 usage error,
// 3 numerical failure.

#include "lindblad/dynamics.hpp"
#include "lindblad/liouvillian.hpp"
#include "lindblad/measurement.hpp"
#include "lindblad/scenario_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

namespace {

using namespace lindblad;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double x) {  // human-readable: 6 significant digits
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string fmt(const Complex& z) {
    std::string out = fmt(z.real());
    out += (z.imag() < 0.0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
    return out;
}

ordered_json json_complex(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

struct SpectrumOptions {
    std::string scenario_path;
    bool json = false;
};

int cmd_spectrum(const SpectrumOptions& opt) {
    const Scenario sc = load_scenario_file(opt.scenario_path);
    const Superoperator super = build_superoperator(sc.system);
    const auto modes = spectrum(sc.system);
    const double defect = entropy_condition_defect(sc.system);
    const bool holds = entropy_condition_holds(sc.system);
    const double gap = decay_gap(modes);
    const auto clusters = eigenvalue_clusters(modes);
    const double zero_limit = tol::stationary_rel * super.norm();

    std::vector<EigenvalueIdentity> checks;
    std::vector<int> oscillatory;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        checks.push_back(eigenvalue_identity_check(sc.system, modes[k]));
        const Complex lam = modes[k].eigenvalue;
        if (std::abs(lam.real()) <= zero_limit && std::abs(lam.imag()) > zero_limit) {
            oscillatory.push_back(static_cast<int>(k));
        }
    }

    if (opt.json) {
        ordered_json doc;
        doc["scenario"] = sc.name;
        doc["dim"] = sc.system.dim();
        doc["liouvillian_norm"] = super.norm();
        doc["entropy_condition_defect"] = defect;
        doc["entropy_condition_holds"] = holds;
        if (std::isinf(gap)) {
            doc["decay_gap"] = nullptr;
        } else {
            doc["decay_gap"] = gap;
        }
        doc["modes"] = ordered_json::array();
        for (std::size_t k = 0; k < modes.size(); ++k) {
            ordered_json m;
            m["eigenvalue"] = json_complex(modes[k].eigenvalue);
            m["residual"] = modes[k].residual;
            m["identity_rhs_real"] = checks[k].rhs_real;
            m["identity_rhs_imag"] = checks[k].rhs_imag;
            m["identity_deviation"] = checks[k].max_deviation;
            doc["modes"].push_back(std::move(m));
        }
        doc["clusters"] = clusters;
        doc["oscillatory_stationary_modes"] = oscillatory;
        std::cout << doc.dump(2) << "\n";
        return kExitPass;
    }

    std::cout << "scenario: " << sc.name << " (d = " << sc.system.dim() << ")\n";
    std::cout << "liouvillian norm:         " << fmt(super.norm()) << "\n";
    std::cout << "entropy condition defect: " << fmt(defect)
              << (holds ? "  (holds)" : "  (violated)") << "\n";
    std::cout << "decay gap:                "
              << (std::isinf(gap) ? std::string("inf") : fmt(gap)) << "\n";
    std::cout << "modes (sorted by Re):\n";
    std::cout << "  k   eigenvalue                 residual     identity-dev\n";
    for (std::size_t k = 0; k < modes.size(); ++k) {
        std::printf("  %-3zu %-26s %-12s %s\n", k, fmt(modes[k].eigenvalue).c_str(),
                    fmt(modes[k].residual).c_str(), fmt(checks[k].max_deviation).c_str());
    }
    std::cout << "eigenvalue clusters (tol " << fmt(tol::cluster_abs) << "):";
    for (const auto& cluster : clusters) {
        std::cout << " [";
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            std::cout << (i ? " " : "") << cluster[i];
        }
        std::cout << "]";
    }
    std::cout << "\n";
    if (!oscillatory.empty()) {
        std::cout << "warning: oscillatory stationary modes (Re = 0, Im != 0):";
        for (int k : oscillatory) std::cout << " " << k;
        std::cout << "\n";
    }
    return kExitPass;
}

struct EvolveOptions {
    std::string scenario_path;
    std::string out_path;
    std::string method = "integrate";
    std::string format = "csv";
    bool json = false;
};

int cmd_evolve(const EvolveOptions& opt) {
    const Scenario sc = load_scenario_file(opt.scenario_path);

    Trajectory traj;
    if (opt.method == "integrate") {
        traj = integrate(sc.system, sc.initial_state, sc.t_end, sc.dt);
    } else if (opt.method == "spectral") {
        const Superoperator super = build_superoperator(sc.system);
        const SpectralPropagator prop(super);
        traj = tabulate_trajectory(
            [&](double t) { return prop.state_at(sc.initial_state.matrix(), t); },
            sample_times(sc.t_end, sc.dt));
    } else if (opt.method == "closed-form") {
        if (!sc.basis) {
            std::cerr << "evolve: closed-form method requires a basis in the scenario\n";
            return kExitUsage;
        }
        const CertificationReport report = certify(sc.system, *sc.basis);
        if (!report.pass) {
            std::cerr << "evolve: closed-form method requires a passing certification "
                      << "(max defect " << fmt(report.max_defect()) << " > threshold "
                      << fmt(report.threshold) << ")\n";
            return kExitFail;
        }
        traj = tabulate_trajectory(
            [&](double t) {
                return closed_form_evolve(report.coefficients, *sc.basis, sc.initial_state, t)
                    .matrix();
            },
            sample_times(sc.t_end, sc.dt));
    } else {
        std::cerr << "evolve: unknown method '" << opt.method << "'\n";
        return kExitUsage;
    }

    if (!opt.out_path.empty()) {
        const TrajectoryFormat format =
            opt.format == "json" ? TrajectoryFormat::json : TrajectoryFormat::csv;
        save_trajectory(traj, format, opt.out_path);
    }

    const DensityMatrix& final_state = traj.states.back();
    const double entropy = traj.diagnostics.back().entropy;
    std::vector<double> diagonal;
    if (sc.basis) {
        for (Eigen::Index a = 0; a < sc.basis->dim; ++a) {
            const auto u = sc.basis->vectors.col(a);
            diagonal.push_back(u.dot(final_state.matrix() * u).real());
        }
    }

    if (opt.json) {
        ordered_json doc;
        doc["scenario"] = sc.name;
        doc["method"] = opt.method;
        doc["samples"] = traj.times.size();
        doc["final_time"] = traj.times.back();
        doc["final_entropy"] = entropy;
        if (!diagonal.empty()) doc["final_diagonal_in_basis"] = diagonal;
        if (!opt.out_path.empty()) doc["out"] = opt.out_path;
        std::cout << doc.dump(2) << "\n";
        return kExitPass;
    }

    std::cout << "scenario: " << sc.name << ", method: " << opt.method << "\n";
    std::cout << "samples: " << traj.times.size() << ", final time: " << fmt(traj.times.back())
              << "\n";
    std::cout << "final entropy: " << fmt(entropy) << " nats\n";
    if (!diagonal.empty()) {
        std::cout << "final diagonal in measurement basis:";
        for (double p : diagonal) std::cout << " " << fmt(p);
        std::cout << "\n";
    }
    if (!opt.out_path.empty()) std::cout << "trajectory written to " << opt.out_path << "\n";
    return kExitPass;
}

struct CertifyOptions {
    std::string scenario_path;
    bool json = false;
};

ordered_json report_to_json(const CertificationReport& report) {
    ordered_json doc;
    doc["verdict"] = report.pass ? "pass" : "fail";
    doc["threshold"] = report.threshold;
    doc["max_defect"] = report.max_defect();
    doc["commutator_defects"] = report.commutator_defects;
    doc["jump_reconstruction_defects"] = report.jump_reconstruction_defects;
    doc["hamiltonian_reconstruction_defect"] = report.hamiltonian_reconstruction_defect;
    doc["ell_class_defect"] = report.ell_class_defect;
    doc["h_class_defect"] = report.h_class_defect;
    doc["h_imag_defect"] = report.h_imag_defect;
    ordered_json ell = ordered_json::array();
    for (Eigen::Index n = 0; n < report.coefficients.ell.rows(); ++n) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index a = 0; a < report.coefficients.ell.cols(); ++a) {
            row.push_back(json_complex(report.coefficients.ell(n, a)));
        }
        ell.push_back(std::move(row));
    }
    doc["ell"] = std::move(ell);
    doc["h"] = std::vector<double>(report.coefficients.h.data(),
                                   report.coefficients.h.data() + report.coefficients.h.size());
    doc["cross_class_degeneracies"] = ordered_json::array();
    for (const auto& [a, b] : report.cross_class_degeneracies) {
        doc["cross_class_degeneracies"].push_back(ordered_json::array({a, b}));
    }
    return doc;
}

void print_report(const CertificationReport& report) {
    std::cout << "threshold: " << fmt(report.threshold) << "\n";
    for (std::size_t n = 0; n < report.commutator_defects.size(); ++n) {
        std::cout << "jump " << n << ": commutator defect " << fmt(report.commutator_defects[n])
                  << ", reconstruction defect " << fmt(report.jump_reconstruction_defects[n])
                  << "\n";
    }
    std::cout << "hamiltonian reconstruction defect: "
              << fmt(report.hamiltonian_reconstruction_defect) << "\n";
    std::cout << "class constancy defects: ell " << fmt(report.ell_class_defect) << ", h "
              << fmt(report.h_class_defect) << "\n";
    std::cout << "h imaginary-part defect: " << fmt(report.h_imag_defect) << "\n";
    if (!report.cross_class_degeneracies.empty()) {
        std::cout << "warning: cross-class degenerate outcome pairs:";
        for (const auto& [a, b] : report.cross_class_degeneracies) {
            std::cout << " (" << a << "," << b << ")";
        }
        std::cout << "  (the effective measurement is coarser than declared)\n";
    }
    std::cout << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_certify(const CertifyOptions& opt) {
    const Scenario sc = load_scenario_file(opt.scenario_path);
    if (!sc.basis) {
        std::cerr << "certify: scenario '" << sc.name << "' has no measurement basis\n";
        return kExitUsage;
    }
    const CertificationReport report = certify(sc.system, *sc.basis);
    if (opt.json) {
        ordered_json doc;
        doc["scenario"] = sc.name;
        doc.update(report_to_json(report));
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "scenario: " << sc.name << "\n";
        print_report(report);
    }
    return report.pass ? kExitPass : kExitFail;
}

struct CollapseOptions {
    std::string scenario_path;
    double t_factor = 40.0;
    bool json = false;
};

int cmd_collapse(const CollapseOptions& opt) {
    const Scenario sc = load_scenario_file(opt.scenario_path);
    if (!sc.basis) {
        std::cerr << "collapse: scenario '" << sc.name << "' has no measurement basis\n";
        return kExitUsage;
    }
    const CertificationReport report = certify(sc.system, *sc.basis);
    if (!report.pass) {
        std::cerr << "collapse: certification fails (max defect " << fmt(report.max_defect())
                  << " > threshold " << fmt(report.threshold) << "); no collapse prediction\n";
        return kExitFail;
    }
    if (!report.cross_class_degeneracies.empty()) {
        std::cerr << "collapse: decay gap is zero for cross-class degenerate outcome pairs";
        for (const auto& [a, b] : report.cross_class_degeneracies) {
            std::cerr << " (" << a << "," << b << ")";
        }
        std::cerr << "; the declared classes never decohere\n";
        return kExitNumerical;
    }

    const DecayMatrix decay = decay_matrix(report.coefficients);
    const double gap = collapse_gap(decay, *sc.basis);
    const double horizon = std::isinf(gap) ? 0.0 : opt.t_factor / gap;

    const DensityMatrix predicted = sc.basis->all_singleton()
                                        ? born_collapse(*sc.basis, sc.initial_state).state
                                        : class_collapse(*sc.basis, sc.initial_state);
    const DensityMatrix evolved =
        closed_form_evolve(report.coefficients, *sc.basis, sc.initial_state, horizon);
    const double deviation = (evolved.matrix() - predicted.matrix()).norm();
    const bool pass = deviation <= 1e-6;

    std::vector<double> born, extracted;
    for (Eigen::Index a = 0; a < sc.basis->dim; ++a) {
        const auto u = sc.basis->vectors.col(a);
        born.push_back(u.dot(sc.initial_state.matrix() * u).real());
        extracted.push_back(u.dot(evolved.matrix() * u).real());
    }

    if (opt.json) {
        ordered_json doc;
        doc["scenario"] = sc.name;
        if (std::isinf(gap)) {
            doc["gap"] = nullptr;
        } else {
            doc["gap"] = gap;
        }
        doc["t"] = horizon;
        doc["deviation"] = deviation;
        doc["born_probabilities"] = born;
        doc["extracted_probabilities"] = extracted;
        doc["verdict"] = pass ? "pass" : "fail";
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "scenario: " << sc.name << "\n";
        std::cout << "decay gap: " << (std::isinf(gap) ? std::string("inf") : fmt(gap))
                  << ", late-time horizon t = " << fmt(horizon) << "\n";
        std::cout << "  alpha   born <a|rho0|a>   extracted at t\n";
        for (std::size_t a = 0; a < born.size(); ++a) {
            std::printf("  %-7zu %-17s %s\n", a + 1, fmt(born[a]).c_str(),
                        fmt(extracted[a]).c_str());
        }
        if (!sc.basis->all_singleton()) {
            std::cout << "class probabilities:";
            for (std::size_t c = 0; c < sc.basis->classes.size(); ++c) {
                double sum = 0.0;
                for (int a : sc.basis->classes[c]) sum += born[static_cast<std::size_t>(a)];
                std::cout << " C" << c + 1 << " = " << fmt(sum);
            }
            std::cout << "\n";
        }
        std::cout << "deviation from predicted limit: " << fmt(deviation) << "\n";
        std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitPass : kExitFail;
}

struct EntropyCheckOptions {
    std::string scenario_path;
    bool json = false;
};

int cmd_entropy_check(const EntropyCheckOptions& opt) {
    const Scenario sc = load_scenario_file(opt.scenario_path);
    const double defect = entropy_condition_defect(sc.system);
    const bool holds = entropy_condition_holds(sc.system);

    const Trajectory traj = integrate(sc.system, sc.initial_state, sc.t_end, sc.dt);
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < traj.diagnostics.size(); ++k) {
        min_step = std::min(min_step, traj.diagnostics[k].entropy - traj.diagnostics[k - 1].entropy);
    }
    const double final_entropy = traj.diagnostics.back().entropy;
    const bool monotone = min_step >= -1e-8;
    // the verdict only binds when the balance condition holds
    const bool pass = !holds || monotone;

    if (opt.json) {
        ordered_json doc;
        doc["scenario"] = sc.name;
        doc["entropy_condition_defect"] = defect;
        doc["entropy_condition_holds"] = holds;
        if (std::isinf(min_step)) {
            doc["min_entropy_step"] = nullptr;
        } else {
            doc["min_entropy_step"] = min_step;
        }
        doc["final_entropy"] = final_entropy;
        doc["verdict"] = pass ? "pass" : "fail";
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "scenario: " << sc.name << "\n";
        std::cout << "entropy condition defect: " << fmt(defect)
                  << (holds ? "  (holds)" : "  (violated)") << "\n";
        std::cout << "min entropy step over " << traj.times.size() << " samples: "
                  << (std::isinf(min_step) ? std::string("n/a") : fmt(min_step)) << "\n";
        std::cout << "final entropy: " << fmt(final_entropy) << " nats\n";
        if (!holds && min_step < 0.0) {
            std::cout << "note: entropy decrease is permitted here, the balance condition fails\n";
        }
        std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? kExitPass : kExitFail;
}

struct DemoOptions {
    std::string out_dir;
    bool json = false;
};

int cmd_demo_qubit(const DemoOptions& opt) {
    const std::vector<Scenario> demos{qubit_scenario(1.0, 0.0), qubit_scenario(1.0, 1.0),
                                      qubit_scenario(1.0, 0.4)};
    for (const Scenario& sc : demos) {
        if (opt.json) {
            std::cout << save_scenario(sc);
        } else {
            const CertificationReport report = certify(sc.system, *sc.basis);
            const double gap = decay_gap(spectrum(sc.system));
            std::cout << sc.name << ": certification "
                      << (report.pass ? "passes" : "fails") << ", decay gap "
                      << (std::isinf(gap) ? std::string("inf") : fmt(gap)) << "\n";
        }
        if (!opt.out_dir.empty()) {
            std::filesystem::create_directories(opt.out_dir);
            const auto path = std::filesystem::path(opt.out_dir) / (sc.name + ".json");
            save_scenario_file(sc, path.string());
            if (!opt.json) std::cout << "  written to " << path.string() << "\n";
        }
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lindblad density-matrix evolution, measurement certification, "
                 "and collapse verification"};
    app.require_subcommand(1);

    SpectrumOptions spectrum_opt;
    auto* spectrum_cmd = app.add_subcommand(
        "spectrum", "Eigenvalues, residuals, decay gap, and identity cross-checks");
    spectrum_cmd->add_option("--scenario", spectrum_opt.scenario_path, "scenario JSON file")
        ->required();
    spectrum_cmd->add_flag("--json", spectrum_opt.json, "machine-readable output");

    EvolveOptions evolve_opt;
    auto* evolve_cmd = app.add_subcommand("evolve", "Evolve the initial state and export a trajectory");
    evolve_cmd->add_option("--scenario", evolve_opt.scenario_path, "scenario JSON file")->required();
    evolve_cmd->add_option("--out", evolve_opt.out_path, "trajectory output file");
    evolve_cmd->add_option("--method", evolve_opt.method, "integrate|spectral|closed-form")
        ->check(CLI::IsMember({"integrate", "spectral", "closed-form"}));
    evolve_cmd->add_option("--format", evolve_opt.format, "csv|json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    evolve_cmd->add_flag("--json", evolve_opt.json, "machine-readable summary");

    CertifyOptions certify_opt;
    auto* certify_cmd = app.add_subcommand("certify", "Check that the system measures the basis");
    certify_cmd->add_option("--scenario", certify_opt.scenario_path, "scenario JSON file")
        ->required();
    certify_cmd->add_flag("--json", certify_opt.json, "machine-readable output");

    CollapseOptions collapse_opt;
    auto* collapse_cmd = app.add_subcommand(
        "collapse", "Compare the late-time closed form against the collapse prediction");
    collapse_cmd->add_option("--scenario", collapse_opt.scenario_path, "scenario JSON file")
        ->required();
    collapse_cmd->add_option("--t-factor", collapse_opt.t_factor,
                             "late-time horizon in units of 1/gap (default 40)")
        ->check(CLI::PositiveNumber);
    collapse_cmd->add_flag("--json", collapse_opt.json, "machine-readable output");

    EntropyCheckOptions entropy_opt;
    auto* entropy_cmd = app.add_subcommand(
        "entropy-check", "Verify entropy monotonicity along the integrated trajectory");
    entropy_cmd->add_option("--scenario", entropy_opt.scenario_path, "scenario JSON file")
        ->required();
    entropy_cmd->add_flag("--json", entropy_opt.json, "machine-readable output");

    DemoOptions demo_opt;
    auto* demo_cmd = app.add_subcommand("demo-qubit", "Print the built-in two-level scenarios");
    demo_cmd->add_option("--out", demo_opt.out_dir, "directory to write the scenario files");
    demo_cmd->add_flag("--json", demo_opt.json, "print full scenario documents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_opt);
        if (evolve_cmd->parsed()) return cmd_evolve(evolve_opt);
        if (certify_cmd->parsed()) return cmd_certify(certify_opt);
        if (collapse_cmd->parsed()) return cmd_collapse(collapse_opt);
        if (entropy_cmd->parsed()) return cmd_entropy_check(entropy_opt);
        if (demo_cmd->parsed()) return cmd_demo_qubit(demo_opt);
    } catch (const scenario_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const integration_abort& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

// scenario_io.hpp — JSON scenario documents, CSV/JSON trajectory export,
// and the built-in scenario families (the worked qubit example plus seeded
// random fixtures).

#pragma once

#include "lindblad/dynamics.hpp"
#include "lindblad/liouvillian.hpp"
#include "lindblad/measurement.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lindblad {

// Scenario document, top-level JSON keys:
//   name, dim, hamiltonian, jumps, basis_vectors, classes, initial_state,
//   t_end, dt
// Complex numbers are [re, im] pairs; matrices are row-major arrays of d²
// complex entries; basis_vectors holds d column vectors of d entries;
// classes holds 0-based outcome indices. basis_vectors/classes are optional,
// dt defaults to default_time_step(system).
struct Scenario {
    std::string name;
    LindbladSystem system;
    std::optional<MeasurementBasis> basis;
    DensityMatrix initial_state;
    double t_end;
    double dt;
};

Scenario load_scenario_file(const std::string& path);
Scenario load_scenario_text(const std::string& text);

std::string save_scenario(const Scenario& sc);  // JSON document text
void save_scenario_file(const Scenario& sc, const std::string& path);

enum class TrajectoryFormat { csv, json };

// CSV columns: t, re/im of the upper triangle of rho (row-major, i <= j),
// trace_defect, min_eig, entropy. JSON mirrors the same fields per sample.
std::string trajectory_csv(const Trajectory& traj, Eigen::Index dim);
std::string trajectory_json(const Trajectory& traj, Eigen::Index dim);
void save_trajectory(const Trajectory& traj, TrajectoryFormat format, const std::string& path);

// The worked two-level example: H = h σ₁, single jump ℓ σ₃, σ₃ eigenbasis
// with singleton classes, initial state (1 + σ₁)/2.
Scenario qubit_scenario(double ell, double h);

// All built-in scenarios: qubit(1,0), qubit(1,1), qubit(1,0.4), a d=4
// incomplete measurement with classes {0,1},{2,3}, a seeded random d=3
// apparatus, a seeded random system that violates the entropy condition,
// and the raising-operator counterexample.
std::vector<Scenario> builtin_scenarios();

}  // namespace lindblad

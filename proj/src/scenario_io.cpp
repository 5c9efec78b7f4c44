#include "lindblad/scenario_io.hpp"

#include "lindblad/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lindblad {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kApparatusSeed = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNonMeasurementSeed = 0xDA3E39CB94B95BDBULL;

ordered_json complex_to_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

Complex complex_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw scenario_error("scenario field '" + field + "': complex entries must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json matrix_to_json(const Matrix& m) {  // row-major
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out.push_back(complex_to_json(m(i, j)));
        }
    }
    return out;
}

Matrix matrix_from_json(const ordered_json& j, Eigen::Index d, const std::string& field) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(d * d)) {
        std::ostringstream os;
        os << "scenario field '" << field << "': expected " << d * d << " complex entries, got "
           << (j.is_array() ? j.size() : 0);
        throw scenario_error(os.str());
    }
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            m(i, k) = complex_from_json(j[static_cast<std::size_t>(i * d + k)], field);
        }
    }
    return m;
}

std::string format_full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_number(double x) {  // compact form for names
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string hex_seed(std::uint64_t seed) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(seed));
    return buf;
}

Matrix random_density(Lcg64& rng, Eigen::Index d) {
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace

Scenario load_scenario_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw scenario_error(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw scenario_error("scenario document must be a JSON object");

    auto require = [&](const char* key) -> const ordered_json& {
        if (!doc.contains(key)) {
            throw scenario_error(std::string("scenario field '") + key + "' is missing");
        }
        return doc[key];
    };

    if (!require("name").is_string()) {
        throw scenario_error("scenario field 'name' must be a string");
    }
    const std::string name = doc["name"].get<std::string>();
    if (!require("dim").is_number_integer() || doc["dim"].get<long>() < 1) {
        throw scenario_error("scenario field 'dim' must be a positive integer");
    }
    const Eigen::Index d = doc["dim"].get<Eigen::Index>();

    const Matrix h = matrix_from_json(require("hamiltonian"), d, "hamiltonian");
    std::vector<Matrix> jumps;
    if (!require("jumps").is_array()) throw scenario_error("scenario field 'jumps' must be an array");
    for (std::size_t n = 0; n < doc["jumps"].size(); ++n) {
        jumps.push_back(matrix_from_json(doc["jumps"][n], d, "jumps[" + std::to_string(n) + "]"));
    }

    std::optional<LindbladSystem> sys;
    try {
        sys.emplace(h, std::move(jumps));
    } catch (const std::invalid_argument& e) {
        throw scenario_error(std::string("scenario field 'hamiltonian'/'jumps' invalid: ") + e.what());
    }

    std::optional<MeasurementBasis> basis;
    if (doc.contains("basis_vectors") && !doc["basis_vectors"].is_null()) {
        const auto& bv = doc["basis_vectors"];
        if (!bv.is_array() || bv.size() != static_cast<std::size_t>(d)) {
            throw scenario_error("scenario field 'basis_vectors' must hold d vectors");
        }
        Matrix u(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            const auto& col = bv[static_cast<std::size_t>(a)];
            if (!col.is_array() || col.size() != static_cast<std::size_t>(d)) {
                throw scenario_error("scenario field 'basis_vectors': each vector needs d entries");
            }
            for (Eigen::Index i = 0; i < d; ++i) {
                u(i, a) = complex_from_json(col[static_cast<std::size_t>(i)], "basis_vectors");
            }
        }
        std::vector<std::vector<int>> classes;
        if (doc.contains("classes") && !doc["classes"].is_null()) {
            for (const auto& cls : doc["classes"]) {
                if (!cls.is_array()) throw scenario_error("scenario field 'classes' must hold arrays");
                std::vector<int> members;
                for (const auto& m : cls) members.push_back(m.get<int>());
                classes.push_back(std::move(members));
            }
        }
        try {
            basis = basis_from_vectors(u, std::move(classes));
        } catch (const std::invalid_argument& e) {
            throw scenario_error(std::string("scenario field 'basis_vectors'/'classes' invalid: ") + e.what());
        }
    } else if (doc.contains("classes") && !doc["classes"].is_null()) {
        throw scenario_error("scenario field 'classes' requires 'basis_vectors'");
    }

    std::optional<DensityMatrix> rho0;
    try {
        rho0.emplace(matrix_from_json(require("initial_state"), d, "initial_state"));
    } catch (const std::invalid_argument& e) {
        throw scenario_error(std::string("scenario field 'initial_state' invalid: ") + e.what());
    }

    if (!require("t_end").is_number()) throw scenario_error("scenario field 't_end' must be a number");
    const double t_end = doc["t_end"].get<double>();
    if (t_end < 0.0) throw scenario_error("scenario field 't_end' must be >= 0");

    double dt;
    if (doc.contains("dt") && !doc["dt"].is_null()) {
        dt = doc["dt"].get<double>();
        if (!(dt > 0.0)) throw scenario_error("scenario field 'dt' must be > 0");
    } else {
        dt = default_time_step(*sys);
    }

    return Scenario{name, std::move(*sys), std::move(basis), std::move(*rho0), t_end, dt};
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw scenario_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

std::string save_scenario(const Scenario& sc) {
    ordered_json doc;
    doc["name"] = sc.name;
    doc["dim"] = sc.system.dim();
    doc["hamiltonian"] = matrix_to_json(sc.system.hamiltonian);
    doc["jumps"] = ordered_json::array();
    for (const Matrix& l : sc.system.jumps) doc["jumps"].push_back(matrix_to_json(l));
    if (sc.basis) {
        ordered_json vectors = ordered_json::array();
        for (Eigen::Index a = 0; a < sc.basis->dim; ++a) {
            ordered_json col = ordered_json::array();
            for (Eigen::Index i = 0; i < sc.basis->dim; ++i) {
                col.push_back(complex_to_json(sc.basis->vectors(i, a)));
            }
            vectors.push_back(std::move(col));
        }
        doc["basis_vectors"] = std::move(vectors);
        doc["classes"] = sc.basis->classes;
    }
    doc["initial_state"] = matrix_to_json(sc.initial_state.matrix());
    doc["t_end"] = sc.t_end;
    doc["dt"] = sc.dt;
    return doc.dump(2) + "\n";
}

void save_scenario_file(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw scenario_error("cannot open file for writing: " + path);
    out << save_scenario(sc);
    if (!out) throw scenario_error("write failed: " + path);
}

std::string trajectory_csv(const Trajectory& traj, Eigen::Index dim) {
    std::ostringstream os;
    os << "t";
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i; j < dim; ++j) {
            os << ",re_rho_" << i << "_" << j << ",im_rho_" << i << "_" << j;
        }
    }
    os << ",trace_defect,min_eig,entropy\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Matrix& rho = traj.states[k].matrix();
        os << format_full(traj.times[k]);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i; j < dim; ++j) {
                os << "," << format_full(rho(i, j).real()) << "," << format_full(rho(i, j).imag());
            }
        }
        os << "," << format_full(traj.diagnostics[k].trace_defect)
           << "," << format_full(traj.diagnostics[k].min_eigenvalue)
           << "," << format_full(traj.diagnostics[k].entropy) << "\n";
    }
    return os.str();
}

std::string trajectory_json(const Trajectory& traj, Eigen::Index dim) {
    ordered_json doc;
    doc["dim"] = dim;
    doc["samples"] = ordered_json::array();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Matrix& rho = traj.states[k].matrix();
        ordered_json sample;
        sample["t"] = traj.times[k];
        ordered_json upper = ordered_json::array();
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i; j < dim; ++j) {
                upper.push_back(complex_to_json(rho(i, j)));
            }
        }
        sample["rho_upper"] = std::move(upper);
        sample["trace_defect"] = traj.diagnostics[k].trace_defect;
        sample["min_eig"] = traj.diagnostics[k].min_eigenvalue;
        sample["entropy"] = traj.diagnostics[k].entropy;
        doc["samples"].push_back(std::move(sample));
    }
    return doc.dump(2) + "\n";
}

void save_trajectory(const Trajectory& traj, TrajectoryFormat format, const std::string& path) {
    if (traj.times.size() != traj.states.size() || traj.times.size() != traj.diagnostics.size()) {
        throw std::invalid_argument("save_trajectory: times/states/diagnostics lengths differ");
    }
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        if (!(traj.times[k] < traj.times[k + 1])) {
            throw std::invalid_argument("save_trajectory: times must be strictly increasing");
        }
    }
    if (!traj.times.empty() && traj.times.front() != 0.0) {
        throw std::invalid_argument("save_trajectory: times must start at 0");
    }
    const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().dim();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw scenario_error("cannot open file for writing: " + path);
    out << (format == TrajectoryFormat::csv ? trajectory_csv(traj, dim)
                                            : trajectory_json(traj, dim));
    if (!out) throw scenario_error("write failed: " + path);
}

Scenario qubit_scenario(double ell, double h) {
    const Matrix hamiltonian = h * sigma_x();
    std::vector<Matrix> jumps{ell * sigma_z()};
    LindbladSystem sys(hamiltonian, std::move(jumps));
    MeasurementBasis basis = basis_from_vectors(Matrix::Identity(2, 2));
    Matrix rho0 = 0.5 * (Matrix::Identity(2, 2) + sigma_x());
    return Scenario{"qubit-l" + format_number(ell) + "-h" + format_number(h),
                    std::move(sys), std::move(basis), DensityMatrix(std::move(rho0)), 10.0, 1e-3};
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    out.push_back(qubit_scenario(1.0, 0.0));
    out.push_back(qubit_scenario(1.0, 1.0));
    out.push_back(qubit_scenario(1.0, 0.4));

    {
        // two spins, measure only the first: outcomes {0,1} and {2,3} form classes
        const Eigen::Index d = 4;
        Matrix l = Matrix::Zero(d, d);
        l.diagonal() << 1.0, 1.0, -1.0, -1.0;
        Matrix h = Matrix::Zero(d, d);
        h.diagonal() << 0.3, 0.3, -0.2, -0.2;
        LindbladSystem sys(h, {l});
        MeasurementBasis basis = basis_from_vectors(Matrix::Identity(d, d), {{0, 1}, {2, 3}});
        Vector psi(d);
        psi << 0.5, 0.5, 0.5, 0.5;
        Matrix rho0 = psi * psi.adjoint();
        out.push_back(Scenario{"two-spin-measure-first", std::move(sys), std::move(basis),
                               DensityMatrix(std::move(rho0)), 10.0, 1e-3});
    }

    {
        // seeded random apparatus over the standard basis, d=3, two jumps
        Lcg64 rng(kApparatusSeed);
        const Eigen::Index d = 3, n_jumps = 2;
        ApparatusCoefficients coeffs;
        coeffs.ell.resize(n_jumps, d);
        coeffs.h.resize(d);
        for (Eigen::Index n = 0; n < n_jumps; ++n) {
            for (Eigen::Index a = 0; a < d; ++a) coeffs.ell(n, a) = rng.unit_disc();
        }
        for (Eigen::Index a = 0; a < d; ++a) coeffs.h(a) = rng.uniform(-1.0, 1.0);
        MeasurementBasis basis = basis_from_vectors(Matrix::Identity(d, d));
        LindbladSystem sys = assemble_system(coeffs, basis);
        Matrix rho0 = random_density(rng, d);
        out.push_back(Scenario{"random-apparatus-d3-seed-" + hex_seed(kApparatusSeed),
                               std::move(sys), std::move(basis), DensityMatrix(std::move(rho0)),
                               10.0, 1e-3});
    }

    {
        // seeded random system violating the entropy balance: one strictly
        // upper-triangular jump cannot satisfy it
        Lcg64 rng(kNonMeasurementSeed);
        const Eigen::Index d = 3;
        Matrix l = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = i + 1; j < d; ++j) l(i, j) = rng.unit_disc();
        }
        Matrix g(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                g(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            }
        }
        Matrix h = 0.5 * (g + g.adjoint());
        LindbladSystem sys(h, {l});
        Matrix rho0 = Matrix::Identity(d, d) / static_cast<double>(d);
        out.push_back(Scenario{"random-nonmeasurement-d3-seed-" + hex_seed(kNonMeasurementSeed),
                               std::move(sys), std::nullopt, DensityMatrix(std::move(rho0)),
                               10.0, 1e-3});
    }

    {
        // raising operator: entropy can and does decrease from the maximally
        // mixed state
        Matrix l = Matrix::Zero(2, 2);
        l(0, 1) = 1.0;
        LindbladSystem sys(Matrix::Zero(2, 2), {l});
        Matrix rho0 = 0.5 * Matrix::Identity(2, 2);
        out.push_back(Scenario{"qubit-raising", std::move(sys), std::nullopt,
                               DensityMatrix(std::move(rho0)), 5.0, 1e-3});
    }

    return out;
}

}  // namespace lindblad

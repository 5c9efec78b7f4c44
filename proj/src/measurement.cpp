#include "lindblad/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lindblad {

namespace {

void validate_partition(const std::vector<std::vector<int>>& classes, Eigen::Index d) {
    std::vector<int> seen(static_cast<std::size_t>(d), 0);
    for (const auto& cls : classes) {
        if (cls.empty()) throw std::invalid_argument("basis_from_vectors: empty class");
        for (int a : cls) {
            if (a < 0 || a >= d) {
                std::ostringstream os;
                os << "basis_from_vectors: class member " << a << " outside [0, " << d << ")";
                throw std::invalid_argument(os.str());
            }
            if (seen[static_cast<std::size_t>(a)]++) {
                std::ostringstream os;
                os << "basis_from_vectors: outcome " << a << " appears in more than one class";
                throw std::invalid_argument(os.str());
            }
        }
    }
    for (Eigen::Index a = 0; a < d; ++a) {
        if (!seen[static_cast<std::size_t>(a)]) {
            std::ostringstream os;
            os << "basis_from_vectors: outcome " << a << " missing from the class partition";
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

Matrix MeasurementBasis::class_projector(std::size_t c) const {
    Matrix out = Matrix::Zero(dim, dim);
    for (int a : classes.at(c)) out += projectors[static_cast<std::size_t>(a)];
    return out;
}

int MeasurementBasis::class_of(int alpha) const {
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (int a : classes[c]) {
            if (a == alpha) return static_cast<int>(c);
        }
    }
    throw std::invalid_argument("MeasurementBasis: outcome not in any class");
}

bool MeasurementBasis::all_singleton() const {
    return std::all_of(classes.begin(), classes.end(),
                       [](const std::vector<int>& c) { return c.size() == 1; });
}

MeasurementBasis basis_from_vectors(const Matrix& vectors, std::vector<std::vector<int>> classes) {
    const Eigen::Index d = vectors.rows();
    if (d < 1 || vectors.cols() != d) {
        throw std::invalid_argument("basis_from_vectors: need d orthonormal vectors of length d");
    }
    const Matrix gram = vectors.adjoint() * vectors;
    const double gram_defect = (gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (gram_defect > tol::gram_abs) {
        std::ostringstream os;
        os << "basis_from_vectors: Gram defect " << gram_defect << " exceeds " << tol::gram_abs;
        throw std::invalid_argument(os.str());
    }
    if (classes.empty()) {
        for (Eigen::Index a = 0; a < d; ++a) classes.push_back({static_cast<int>(a)});
    }
    validate_partition(classes, d);

    MeasurementBasis basis;
    basis.dim = d;
    basis.vectors = vectors;
    basis.projectors.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index a = 0; a < d; ++a) {
        basis.projectors.emplace_back(vectors.col(a) * vectors.col(a).adjoint());
    }
    basis.classes = std::move(classes);
    return basis;
}

double CertificationReport::max_defect() const {
    double m = std::max({hamiltonian_reconstruction_defect, ell_class_defect,
                         h_class_defect, h_imag_defect});
    for (double x : commutator_defects) m = std::max(m, x);
    for (double x : jump_reconstruction_defects) m = std::max(m, x);
    return m;
}

CertificationReport certify(const LindbladSystem& sys, const MeasurementBasis& basis) {
    const Eigen::Index d = sys.dim();
    if (basis.dim != d) throw std::invalid_argument("certify: dimension mismatch");
    const std::size_t n_jumps = sys.jumps.size();

    CertificationReport report;
    report.coefficients.ell.resize(static_cast<Eigen::Index>(n_jumps), d);
    report.coefficients.h.resize(d);

    double scale = sys.hamiltonian.norm();
    for (const Matrix& l : sys.jumps) scale = std::max(scale, l.norm());
    report.scale = scale;
    report.threshold = tol::certification_rel * (1.0 + scale);

    // diagonal matrix elements ell(n,α) = <α|L_n|α>, h(α) = <α|H|α>
    report.h_imag_defect = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
        const auto u = basis.vectors.col(a);
        const Complex ha = u.dot(sys.hamiltonian * u);  // conjugates the left factor
        report.coefficients.h(a) = ha.real();
        report.h_imag_defect = std::max(report.h_imag_defect, std::abs(ha.imag()));
        for (std::size_t n = 0; n < n_jumps; ++n) {
            report.coefficients.ell(static_cast<Eigen::Index>(n), a) = u.dot(sys.jumps[n] * u);
        }
    }

    for (std::size_t n = 0; n < n_jumps; ++n) {
        double worst = 0.0;
        for (const Matrix& proj : basis.projectors) {
            worst = std::max(worst, commutator(sys.jumps[n], proj).norm());
        }
        report.commutator_defects.push_back(worst);

        Matrix recon = Matrix::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            recon += report.coefficients.ell(static_cast<Eigen::Index>(n), a) *
                     basis.projectors[static_cast<std::size_t>(a)];
        }
        report.jump_reconstruction_defects.push_back((sys.jumps[n] - recon).norm());
    }

    Matrix h_recon = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        h_recon += report.coefficients.h(a) * basis.projectors[static_cast<std::size_t>(a)];
    }
    report.hamiltonian_reconstruction_defect = (sys.hamiltonian - h_recon).norm();

    report.ell_class_defect = 0.0;
    report.h_class_defect = 0.0;
    for (const auto& cls : basis.classes) {
        for (std::size_t i = 0; i < cls.size(); ++i) {
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                const Eigen::Index b = cls[i], g = cls[j];
                report.h_class_defect = std::max(
                    report.h_class_defect,
                    std::abs(report.coefficients.h(b) - report.coefficients.h(g)));
                for (std::size_t n = 0; n < n_jumps; ++n) {
                    report.ell_class_defect = std::max(
                        report.ell_class_defect,
                        std::abs(report.coefficients.ell(static_cast<Eigen::Index>(n), b) -
                                 report.coefficients.ell(static_cast<Eigen::Index>(n), g)));
                }
            }
        }
    }

    report.cross_class_degeneracies = ell_degeneracies(report.coefficients, basis);
    report.pass = report.max_defect() <= report.threshold;
    return report;
}

LindbladSystem assemble_system(const ApparatusCoefficients& coeffs, const MeasurementBasis& basis) {
    const Eigen::Index d = basis.dim;
    if (coeffs.ell.cols() != d || coeffs.h.size() != d) {
        throw std::invalid_argument("assemble_system: coefficient dimensions do not match basis");
    }
    Matrix h = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        h += coeffs.h(a) * basis.projectors[static_cast<std::size_t>(a)];
    }
    h = 0.5 * (h + h.adjoint());
    std::vector<Matrix> jumps;
    for (Eigen::Index n = 0; n < coeffs.ell.rows(); ++n) {
        Matrix l = Matrix::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            l += coeffs.ell(n, a) * basis.projectors[static_cast<std::size_t>(a)];
        }
        jumps.push_back(std::move(l));
    }
    return LindbladSystem(std::move(h), std::move(jumps));
}

DecayMatrix decay_matrix(const ApparatusCoefficients& coeffs) {
    const Eigen::Index d = coeffs.ell.cols();
    const Eigen::Index n_jumps = coeffs.ell.rows();
    if (coeffs.h.size() != d) throw std::invalid_argument("decay_matrix: ell/h size mismatch");

    DecayMatrix out;
    out.c.resize(d, d);
    out.lambda.resize(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            Complex c(0.0, 0.0);
            for (Eigen::Index n = 0; n < n_jumps; ++n) {
                c += coeffs.ell(n, a) * std::conj(coeffs.ell(n, b));
            }
            out.c(a, b) = c;
        }
    }
    double worst_disagreement = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
        out.lambda(a, a) = 0.0;
        for (Eigen::Index b = a + 1; b < d; ++b) {
            double diff2 = 0.0;
            double im_c = 0.0;
            for (Eigen::Index n = 0; n < n_jumps; ++n) {
                diff2 += std::norm(coeffs.ell(n, a) - coeffs.ell(n, b));
                im_c += (coeffs.ell(n, a) * std::conj(coeffs.ell(n, b))).imag();
            }
            const Complex lam(-0.5 * diff2, im_c - (coeffs.h(a) - coeffs.h(b)));
            // alternative form through the correlation matrix
            const Complex alt = out.c(a, b) - 0.5 * out.c(a, a) - 0.5 * out.c(b, b) -
                                Complex(0.0, coeffs.h(a) - coeffs.h(b));
            worst_disagreement = std::max(worst_disagreement, std::abs(lam - alt));
            out.lambda(a, b) = lam;
            out.lambda(b, a) = std::conj(lam);
        }
    }
    // cancellation in the correlation form grows with |C|, hence the scaling
    const double max_c = out.c.size() > 0 ? out.c.cwiseAbs().maxCoeff() : 0.0;
    if (worst_disagreement > tol::decay_selfcheck_abs * (1.0 + max_c)) {
        std::ostringstream os;
        os << "decay_matrix: self-check failed, the two rate formulas disagree by "
           << worst_disagreement;
        throw std::logic_error(os.str());
    }
    return out;
}

DensityMatrix closed_form_evolve(const ApparatusCoefficients& coeffs, const MeasurementBasis& basis,
                                 const DensityMatrix& rho0, double t) {
    if (t < 0.0) throw std::invalid_argument("closed_form_evolve: t must be >= 0");
    if (rho0.dim() != basis.dim) throw std::invalid_argument("closed_form_evolve: dimension mismatch");
    const DecayMatrix decay = decay_matrix(coeffs);
    const Matrix& u = basis.vectors;
    Matrix m = u.adjoint() * rho0.matrix() * u;  // <α|ρ0|β>
    for (Eigen::Index a = 0; a < basis.dim; ++a) {
        for (Eigen::Index b = 0; b < basis.dim; ++b) {
            m(a, b) *= std::exp(decay.lambda(a, b) * t);
        }
    }
    Matrix out = u * m * u.adjoint();
    out = 0.5 * (out + out.adjoint());
    return DensityMatrix(std::move(out));
}

ProbabilityVector::ProbabilityVector(RealVector p) : p_(std::move(p)) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
        if (p_(i) < tol::prob_clamp) {
            std::ostringstream os;
            os << "ProbabilityVector: entry " << i << " is " << p_(i) << ", below "
               << tol::prob_clamp;
            throw std::invalid_argument(os.str());
        }
        if (p_(i) < 0.0) p_(i) = 0.0;
        sum += p_(i);
    }
    if (std::abs(sum - 1.0) > tol::prob_sum_abs) {
        std::ostringstream os;
        os << "ProbabilityVector: entries sum to " << sum;
        throw std::invalid_argument(os.str());
    }
}

CollapseOutcome born_collapse(const MeasurementBasis& basis, const DensityMatrix& rho0) {
    if (rho0.dim() != basis.dim) throw std::invalid_argument("born_collapse: dimension mismatch");
    const Matrix& u = basis.vectors;
    const Matrix m = u.adjoint() * rho0.matrix() * u;
    RealVector p(basis.dim);
    Matrix diag = Matrix::Zero(basis.dim, basis.dim);
    for (Eigen::Index a = 0; a < basis.dim; ++a) {
        p(a) = m(a, a).real();
        diag(a, a) = m(a, a).real();
    }
    Matrix out = u * diag * u.adjoint();
    out = 0.5 * (out + out.adjoint());
    return CollapseOutcome{DensityMatrix(std::move(out)), ProbabilityVector(std::move(p))};
}

DensityMatrix class_collapse(const MeasurementBasis& basis, const DensityMatrix& rho0) {
    if (rho0.dim() != basis.dim) throw std::invalid_argument("class_collapse: dimension mismatch");
    const Matrix& u = basis.vectors;
    Matrix m = u.adjoint() * rho0.matrix() * u;
    for (Eigen::Index a = 0; a < basis.dim; ++a) {
        for (Eigen::Index b = 0; b < basis.dim; ++b) {
            if (basis.class_of(static_cast<int>(a)) != basis.class_of(static_cast<int>(b))) {
                m(a, b) = 0.0;
            }
        }
    }
    Matrix out = u * m * u.adjoint();
    out = 0.5 * (out + out.adjoint());
    return DensityMatrix(std::move(out));
}

std::vector<std::pair<int, int>> ell_degeneracies(const ApparatusCoefficients& coeffs,
                                                  const MeasurementBasis& basis) {
    const Eigen::Index d = coeffs.ell.cols();
    const double max_ell = coeffs.ell.size() > 0 ? coeffs.ell.cwiseAbs().maxCoeff() : 0.0;
    const double limit = tol::degeneracy_rel * (1.0 + max_ell);
    std::vector<std::pair<int, int>> out;
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a + 1; b < d; ++b) {
            if (basis.class_of(static_cast<int>(a)) == basis.class_of(static_cast<int>(b))) continue;
            double sep = 0.0;
            for (Eigen::Index n = 0; n < coeffs.ell.rows(); ++n) {
                sep = std::max(sep, std::abs(coeffs.ell(n, a) - coeffs.ell(n, b)));
            }
            if (sep <= limit) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return out;
}

double collapse_gap(const DecayMatrix& decay, const MeasurementBasis& basis) {
    double gap = std::numeric_limits<double>::infinity();
    const Eigen::Index d = decay.lambda.rows();
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a + 1; b < d; ++b) {
            if (basis.class_of(static_cast<int>(a)) == basis.class_of(static_cast<int>(b))) continue;
            gap = std::min(gap, std::abs(decay.lambda(a, b).real()));
        }
    }
    return gap;
}

}  // namespace lindblad

// measurement.hpp — projective measurement bases with outcome classes,
// certification that a Lindblad system implements such a measurement,
// the closed-form solution for certified systems, and the collapse limits.

#pragma once

#include "lindblad/dynamics.hpp"
#include "lindblad/liouvillian.hpp"
#include "lindblad/types.hpp"

#include <utility>
#include <vector>

namespace lindblad {

// Orthonormal rank-one projectors Λ_α = |α><α| plus a partition of the
// outcome labels {0..d-1} into classes. Outcomes in the same class are not
// distinguished by the measurement.
struct MeasurementBasis {
    Eigen::Index dim;
    Matrix vectors;                        // columns are |α>
    std::vector<Matrix> projectors;        // Λ_α
    std::vector<std::vector<int>> classes; // partition of {0..d-1}

    Matrix class_projector(std::size_t c) const;  // Λ_C = Σ_{α∈C} Λ_α
    int class_of(int alpha) const;
    bool all_singleton() const;
};

// Expansion coefficients of the jump operators and the Hamiltonian over the
// basis projectors: L_n = Σ_α ell(n,α) Λ_α, H = Σ_α h(α) Λ_α.
struct ApparatusCoefficients {
    Matrix ell;    // N×d, complex, units 1/sqrt(time)
    RealVector h;  // d, units 1/time
};

// λ(α,β) = -½ Σ_n |ell(n,α)-ell(n,β)|² + i Im Σ_n ell(n,α) conj(ell(n,β))
//          - i (h(α)-h(β))
// c(α,β) = Σ_n ell(n,α) conj(ell(n,β)); λ(α,α) = 0, Re λ <= 0, λ(β,α) = conj λ(α,β).
struct DecayMatrix {
    Matrix lambda;
    Matrix c;
};

// Non-negative entries summing to 1; values in [-1e-12, 0) are clamped.
class ProbabilityVector {
public:
    explicit ProbabilityVector(RealVector p);
    const RealVector& values() const { return p_; }

private:
    RealVector p_;
};

struct CertificationReport {
    std::vector<double> commutator_defects;           // per jump: max_α ||[L_n, Λ_α]||_F
    std::vector<double> jump_reconstruction_defects;  // per jump: ||L_n - Σ_α ell Λ_α||_F
    double hamiltonian_reconstruction_defect;
    double ell_class_defect;   // max |ell(n,β)-ell(n,γ)| over same-class pairs
    double h_class_defect;     // max |h(β)-h(γ)| over same-class pairs
    double h_imag_defect;      // max |Im <α|H|α>|
    double scale;              // max(||H||_F, max_n ||L_n||_F)
    double threshold;          // certification_rel * (1 + scale)
    ApparatusCoefficients coefficients;
    // pairs of outcomes in different classes with indistinguishable ell
    // columns: the effective measurement is coarser than declared
    std::vector<std::pair<int, int>> cross_class_degeneracies;
    bool pass;

    double max_defect() const;
};

struct CollapseOutcome {
    DensityMatrix state;
    ProbabilityVector probabilities;
};

// vectors' columns must be orthonormal (max entrywise |Gram - I| <= 1e-8).
// Empty classes argument means every outcome is its own class.
MeasurementBasis basis_from_vectors(const Matrix& vectors,
                                    std::vector<std::vector<int>> classes = {});

// Defect-based check that (H, L_n) act as a measurement of the basis:
// each L_n commutes with every Λ_α, both L_n and H are projector
// combinations, coefficients are constant within classes, h is real.
// A failing apparatus yields a failing report, not an error.
CertificationReport certify(const LindbladSystem& sys, const MeasurementBasis& basis);

// The system L_n = Σ_α ell(n,α) Λ_α, H = Σ_α h(α) Λ_α.
LindbladSystem assemble_system(const ApparatusCoefficients& coeffs, const MeasurementBasis& basis);

// Both algebraic forms of λ are computed and must agree to 1e-12.
DecayMatrix decay_matrix(const ApparatusCoefficients& coeffs);

// ρ(t) = Σ_{αβ} Λ_α ρ0 Λ_β exp(λ(α,β) t); exact solution of the master
// equation for projector-combination systems.
DensityMatrix closed_form_evolve(const ApparatusCoefficients& coeffs, const MeasurementBasis& basis,
                                 const DensityMatrix& rho0, double t);

// Σ_α Λ_α ρ0 Λ_α with p_α = <α|ρ0|α>; the late-time limit of a complete
// measurement.
CollapseOutcome born_collapse(const MeasurementBasis& basis, const DensityMatrix& rho0);

// Σ_C Λ_C ρ0 Λ_C; reduces to the born_collapse state when every class is a
// singleton.
DensityMatrix class_collapse(const MeasurementBasis& basis, const DensityMatrix& rho0);

// Pairs α<β in different classes whose ell columns coincide within
// degeneracy_rel * (1 + max|ell|).
std::vector<std::pair<int, int>> ell_degeneracies(const ApparatusCoefficients& coeffs,
                                                  const MeasurementBasis& basis);

// min |Re λ(α,β)| over pairs in different classes; +inf when every pair
// shares a class. Sets the collapse timescale 1/gap.
double collapse_gap(const DecayMatrix& decay, const MeasurementBasis& basis);

}  // namespace lindblad

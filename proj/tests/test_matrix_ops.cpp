#include "lindblad/matrix_ops.hpp"

#include "testgen.hpp"

#include <doctest.h>

#include <complex>

using namespace lindblad;

namespace {

Matrix from_rows(Eigen::Index d, std::initializer_list<Complex> entries) {
    Matrix m(d, d);
    Eigen::Index k = 0;
    for (const Complex& z : entries) {
        m(k / d, k % d) = z;
        ++k;
    }
    return m;
}

}  // namespace

TEST_CASE("adjoint: identity, basis shift, involution") {
    CHECK((adjoint(identity(2)) - identity(2)).norm() == doctest::Approx(0.0));

    const Matrix shift = from_rows(2, {0, 1, 0, 0});
    const Matrix expected = from_rows(2, {0, 0, 1, 0});
    CHECK((adjoint(shift) - expected).norm() == doctest::Approx(0.0));

    Lcg64 rng(11);
    const Matrix a = testgen::random_matrix(rng, 4);
    CHECK((adjoint(adjoint(a)) - a).norm() == doctest::Approx(0.0));
}

TEST_CASE("commutator: self, pauli pair, orthogonal projectors") {
    Lcg64 rng(12);
    const Matrix a = testgen::random_matrix(rng, 3);
    CHECK(commutator(a, a).norm() == doctest::Approx(0.0));

    // [σ₁,σ₃] worked out entrywise: [[0,-2],[2,0]] = -2i σ₂
    const Matrix expected = from_rows(2, {0, -2, 2, 0});
    CHECK((commutator(sigma_x(), sigma_z()) - expected).norm() < 1e-15);
    CHECK((commutator(sigma_x(), sigma_z()) + Complex(0, 2) * sigma_y()).norm() < 1e-15);

    const Matrix u = testgen::random_unitary(rng, 3);
    const Matrix p0 = u.col(0) * u.col(0).adjoint();
    const Matrix p1 = u.col(1) * u.col(1).adjoint();
    CHECK(commutator(p0, p1).norm() < 1e-14);

    CHECK_THROWS_AS(commutator(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("commutator properties: antisymmetry and zero trace") {
    Lcg64 rng(13);
    for (int rep = 0; rep < 8; ++rep) {
        const Matrix a = testgen::random_matrix(rng, 4);
        const Matrix b = testgen::random_matrix(rng, 4);
        const Matrix c = commutator(a, b);
        CHECK((c + commutator(b, a)).norm() < 1e-13);
        CHECK(std::abs(c.trace()) <= 1e-12 * a.norm() * b.norm());
    }
}

TEST_CASE("frobenius_inner: identity trace, pauli orthogonality, positivity") {
    CHECK(frobenius_inner(identity(2), identity(2)).real() == doctest::Approx(2.0));
    CHECK(std::abs(frobenius_inner(identity(2), identity(2)).imag()) < 1e-15);

    // Tr(σ₁σ₂) = Tr(diag(i,-i)) = 0
    CHECK(std::abs(frobenius_inner(sigma_x(), sigma_y())) < 1e-15);

    Lcg64 rng(14);
    for (int rep = 0; rep < 8; ++rep) {
        const Matrix a = testgen::random_matrix(rng, 3);
        const Complex self = frobenius_inner(a, a);
        CHECK(self.real() >= 0.0);
        CHECK(std::abs(self.imag()) < 1e-13);

        const Matrix b = testgen::random_matrix(rng, 3);
        const Complex ab = frobenius_inner(a, b);
        const Complex ba = frobenius_inner(b, a);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
    }
    CHECK_THROWS_AS(frobenius_inner(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("hermitian_eigen: diagonal, sigma_x, rank-one projector") {
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    auto es = hermitian_eigen(diag);
    CHECK(es.eigenvalues(0) == doctest::Approx(0.3));
    CHECK(es.eigenvalues(1) == doctest::Approx(0.7));

    // char poly of σ₁ is λ² - 1
    es = hermitian_eigen(sigma_x());
    CHECK(es.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(es.eigenvalues(1) == doctest::Approx(1.0));

    Lcg64 rng(15);
    const Matrix u = testgen::random_unitary(rng, 3);
    const Matrix proj = u.col(1) * u.col(1).adjoint();
    es = hermitian_eigen(proj);
    CHECK(es.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues(2) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eigen invariants and rejection") {
    Lcg64 rng(16);
    for (int rep = 0; rep < 6; ++rep) {
        const Matrix a = testgen::random_hermitian(rng, 5);
        const auto es = hermitian_eigen(a);
        const Matrix recon = es.eigenvectors *
                             es.eigenvalues.cast<Complex>().asDiagonal() *
                             es.eigenvectors.adjoint();
        CHECK((a - recon).norm() <= 1e-10 * (1.0 + a.norm()));
        const Matrix gram = es.eigenvectors.adjoint() * es.eigenvectors;
        CHECK((gram - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
        for (Eigen::Index i = 1; i < 5; ++i) {
            CHECK(es.eigenvalues(i - 1) <= es.eigenvalues(i));
        }
    }
    const Matrix bad = from_rows(2, {0, 1, 0, 0});
    CHECK_THROWS_AS(hermitian_eigen(bad), std::invalid_argument);
}

TEST_CASE("general_eigen: diagonal, rotation, companion") {
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 1.0;
    diag(1, 1) = -2.0;
    diag(2, 2) = Complex(0, 3);
    auto es = general_eigen(diag);
    // sorted by descending Re, ties by ascending Im
    CHECK(std::abs(es.eigenvalues(0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(es.eigenvalues(1) - Complex(0, 3)) < 1e-12);
    CHECK(std::abs(es.eigenvalues(2) - Complex(-2, 0)) < 1e-12);
    for (Eigen::Index k = 0; k < 3; ++k) {
        CHECK(es.eigenvectors.col(k).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
        CHECK(es.residuals(k) < 1e-12);
    }

    // char poly λ² + 1
    const Matrix rot = from_rows(2, {0, 1, -1, 0});
    es = general_eigen(rot);
    CHECK(std::abs(es.eigenvalues(0) - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(es.eigenvalues(1) - Complex(0, 1)) < 1e-12);

    // companion of (λ+1)(λ+2)(λ+3) = λ³ + 6λ² + 11λ + 6
    Matrix comp = Matrix::Zero(3, 3);
    comp(0, 2) = -6.0;
    comp(1, 0) = 1.0;
    comp(1, 2) = -11.0;
    comp(2, 1) = 1.0;
    comp(2, 2) = -6.0;
    es = general_eigen(comp);
    CHECK(std::abs(es.eigenvalues(0) - Complex(-1, 0)) < 1e-10);
    CHECK(std::abs(es.eigenvalues(1) - Complex(-2, 0)) < 1e-10);
    CHECK(std::abs(es.eigenvalues(2) - Complex(-3, 0)) < 1e-10);
}

TEST_CASE("general_eigen agrees with hermitian_eigen and the trace") {
    Lcg64 rng(17);
    for (int rep = 0; rep < 6; ++rep) {
        const Matrix a = testgen::random_hermitian(rng, 4);
        const auto ge = general_eigen(a);
        const auto he = hermitian_eigen(a);
        for (Eigen::Index k = 0; k < 4; ++k) {
            // general sorts descending, hermitian ascending
            CHECK(std::abs(ge.eigenvalues(k) - Complex(he.eigenvalues(3 - k), 0)) < 1e-8);
        }

        const Matrix b = testgen::random_matrix(rng, 5);
        const auto gb = general_eigen(b);
        CHECK(std::abs(gb.eigenvalues.sum() - b.trace()) <= 1e-8 * (1.0 + b.norm()));
        for (Eigen::Index k = 0; k < 5; ++k) {
            CHECK(gb.residuals(k) <= 1e-8 * b.norm());
        }
    }
}

TEST_CASE("min_eigenvalue_hermitian") {
    CHECK(min_eigenvalue_hermitian(identity(3)) == doctest::Approx(1.0));

    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 0.9;
    diag(1, 1) = 0.1;
    CHECK(min_eigenvalue_hermitian(diag) == doctest::Approx(0.0));

    // eigenvalues of (1 ± 0.99)/2
    const Matrix rho = 0.5 * (identity(2) + 0.99 * sigma_x());
    CHECK(min_eigenvalue_hermitian(rho) == doctest::Approx(0.005));
}

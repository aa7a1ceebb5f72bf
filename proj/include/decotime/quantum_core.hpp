// quantum_core.hpp — Single-qubit operator algebra: density matrices, Pauli
// operators, Liouville-space superoperators and their exponentials.
//
// Vectorization is column stacking throughout:
//   vec(rho) = (rho11, rho21, rho12, rho22)^T
// which is also Eigen's native column-major storage of a 2x2 matrix. With this
// convention vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace decotime::core {

using cplx = std::complex<double>;
using Operator2 = Eigen::Matrix2cd;
using Superoperator = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

enum class Basis { Z, X };

/// Hermitian, unit-trace 2x2 state tagged with the basis its entries refer to.
class DensityMatrix {
public:
    /// Validated constructor for user-supplied states. Throws InvalidState when
    /// 0 <= rho11 <= 1 or |rho12|^2 <= rho11 (1 - rho11) + 1e-12 fails.
    static DensityMatrix make(double rho11, cplx rho12, Basis basis);

    /// Wraps a numerically propagated matrix. Hermiticity is restored by
    /// symmetrization and the trace is checked (1e-6); positivity is left to
    /// the caller to inspect via positivity_margin().
    static DensityMatrix from_propagated(const Operator2& m, Basis basis);

    const Operator2& matrix() const noexcept { return m_; }
    Basis basis() const noexcept { return basis_; }

    double rho11() const noexcept { return m_(0, 0).real(); }
    double rho22() const noexcept { return m_(1, 1).real(); }
    cplx rho12() const noexcept { return m_(0, 1); }
    cplx rho21() const noexcept { return m_(1, 0); }

    double trace() const noexcept { return rho11() + rho22(); }
    /// rho11 rho22 - |rho12|^2, i.e. the determinant; negative means not PSD.
    double positivity_margin() const noexcept;
    bool is_positive(double tol = 1e-12) const noexcept;
    /// Eigenvalues in ascending order.
    Eigen::Vector2d eigenvalues() const;

    Vec4 vec() const;

private:
    DensityMatrix(const Operator2& m, Basis basis) : m_(m), basis_(basis) {}

    Operator2 m_;
    Basis basis_;
};

/// (|+> + e^{i phase}|->)/sqrt2 in the Z basis: rho11 = 1/2, rho12 = e^{-i phase}/2.
DensityMatrix superposition_state(double phase);

Operator2 identity2();
Operator2 sigma_x();
Operator2 sigma_y();
Operator2 sigma_z();

/// Unitary H_x with |+>_x = (|+> + |->)/sqrt2, |->_x = (|+> - |->)/sqrt2 as
/// its columns. H_x is real symmetric and involutive.
Operator2 basis_change_x();

DensityMatrix change_basis(const DensityMatrix& rho, Basis to);

Vec4 vectorize(const Operator2& m);
Operator2 unvectorize(const Vec4& v);

/// X -> A X
Superoperator left_multiplication(const Operator2& a);
/// X -> X B
Superoperator right_multiplication(const Operator2& b);

bool is_hermitian(const Operator2& m, double tol = 1e-12);

/// K vec(rho) = vec(-i[H, rho] + sum_j (L_j rho L_j^dag - {L_j^dag L_j, rho}/2)).
/// Throws NonHermitianHamiltonian.
Superoperator lindblad_generator(const Operator2& hamiltonian, std::span<const Operator2> jump_operators);
Superoperator lindblad_generator(const Operator2& hamiltonian, const Operator2& jump_operator);

/// K vec(rho) = vec(-i[A, rho]). Throws NonHermitianHamiltonian.
Superoperator commutator_generator(const Operator2& a);

/// X -> A X + X A (no prefactor).
Superoperator anticommutator_superop(const Operator2& a);

/// exp(K t). Eigendecomposition when K is diagonalizable with a well
/// conditioned eigenbasis, scaling-and-squaring Pade(13) otherwise.
/// Throws NonFinite on non-finite input or overflow.
Superoperator superop_exp(const Superoperator& k, double t);

/// exp(-S t) K exp(S t)
Superoperator conjugate_picture(const Superoperator& s, double t, const Superoperator& k);

/// Pade(13) scaling-and-squaring exponential of a 4x4 matrix (exposed for tests).
Superoperator expm_pade13(const Superoperator& a);

/// Trace functional row (1, 0, 0, 1).
Eigen::RowVector4cd trace_functional();

} // namespace decotime::core

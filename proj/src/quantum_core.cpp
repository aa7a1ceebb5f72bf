#include "decotime/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "decotime/errors.hpp"

namespace decotime::core {

namespace {

constexpr cplx I{0.0, 1.0};

// Eigenbasis condition number above which the exponential falls back to Pade.
// The eigen route loses roughly cond * eps relative accuracy.
constexpr double kEigenConditionLimit = 1e4;

bool all_finite(const Superoperator& m) {
    return m.allFinite();
}

} // namespace

DensityMatrix DensityMatrix::make(double rho11, cplx rho12, Basis basis) {
    if (!std::isfinite(rho11) || !std::isfinite(rho12.real()) || !std::isfinite(rho12.imag())) {
        throw Error(ErrorCode::InvalidState, "non-finite density matrix entries");
    }
    if (rho11 < 0.0 || rho11 > 1.0) {
        throw Error(ErrorCode::InvalidState, "rho11 must lie in [0, 1], got " + std::to_string(rho11));
    }
    const double rho22 = 1.0 - rho11;
    if (std::norm(rho12) > rho11 * rho22 + 1e-12) {
        throw Error(ErrorCode::InvalidState, "|rho12|^2 exceeds rho11*rho22 (state not positive)");
    }
    Operator2 m;
    m << rho11, rho12, std::conj(rho12), rho22;
    return DensityMatrix(m, basis);
}

DensityMatrix DensityMatrix::from_propagated(const Operator2& m, Basis basis) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::NonFinite, "propagated density matrix has non-finite entries");
    }
    Operator2 h = 0.5 * (m + m.adjoint());
    h(0, 0) = h(0, 0).real();
    h(1, 1) = h(1, 1).real();
    const double tr = h(0, 0).real() + h(1, 1).real();
    if (std::abs(tr - 1.0) > 1e-6) {
        throw Error(ErrorCode::InvalidState, "propagated state has trace " + std::to_string(tr));
    }
    return DensityMatrix(h, basis);
}

double DensityMatrix::positivity_margin() const noexcept {
    return rho11() * rho22() - std::norm(rho12());
}

bool DensityMatrix::is_positive(double tol) const noexcept {
    return rho11() >= -tol && rho22() >= -tol && positivity_margin() >= -tol;
}

Eigen::Vector2d DensityMatrix::eigenvalues() const {
    const double mean = 0.5 * trace();
    const double half_gap = std::sqrt(0.25 * (rho11() - rho22()) * (rho11() - rho22()) + std::norm(rho12()));
    return {mean - half_gap, mean + half_gap};
}

Vec4 DensityMatrix::vec() const { return vectorize(m_); }

DensityMatrix superposition_state(double phase) {
    return DensityMatrix::make(0.5, 0.5 * std::polar(1.0, -phase), Basis::Z);
}

Operator2 identity2() { return Operator2::Identity(); }

Operator2 sigma_x() {
    Operator2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Operator2 sigma_y() {
    Operator2 m;
    m << 0.0, -I, I, 0.0;
    return m;
}

Operator2 sigma_z() {
    Operator2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Operator2 basis_change_x() {
    const double s = 1.0 / std::sqrt(2.0);
    Operator2 m;
    m << s, s, s, -s;
    return m;
}

DensityMatrix change_basis(const DensityMatrix& rho, Basis to) {
    if (rho.basis() == to) {
        return rho;
    }
    const Operator2 h = basis_change_x();
    return DensityMatrix::from_propagated(h * rho.matrix() * h, to);
}

Vec4 vectorize(const Operator2& m) {
    return Eigen::Map<const Vec4>(m.data());
}

Operator2 unvectorize(const Vec4& v) {
    return Eigen::Map<const Operator2>(v.data());
}

Superoperator left_multiplication(const Operator2& a) {
    Superoperator k = Superoperator::Zero();
    k.topLeftCorner<2, 2>() = a;
    k.bottomRightCorner<2, 2>() = a;
    return k;
}

Superoperator right_multiplication(const Operator2& b) {
    // B^T kron I
    Superoperator k;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            k.block<2, 2>(2 * r, 2 * c) = b(c, r) * Operator2::Identity();
        }
    }
    return k;
}

bool is_hermitian(const Operator2& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Superoperator lindblad_generator(const Operator2& hamiltonian, std::span<const Operator2> jump_operators) {
    if (!is_hermitian(hamiltonian)) {
        throw Error(ErrorCode::NonHermitianHamiltonian, "Hamiltonian is not Hermitian");
    }
    Superoperator k = -I * (left_multiplication(hamiltonian) - right_multiplication(hamiltonian));
    for (const auto& l : jump_operators) {
        const Operator2 ldl = l.adjoint() * l;
        k += left_multiplication(l) * right_multiplication(l.adjoint());
        k -= 0.5 * (left_multiplication(ldl) + right_multiplication(ldl));
    }
    return k;
}

Superoperator lindblad_generator(const Operator2& hamiltonian, const Operator2& jump_operator) {
    return lindblad_generator(hamiltonian, std::span<const Operator2>(&jump_operator, 1));
}

Superoperator commutator_generator(const Operator2& a) {
    if (!is_hermitian(a)) {
        throw Error(ErrorCode::NonHermitianHamiltonian, "commutator generator requires a Hermitian operator");
    }
    return -I * (left_multiplication(a) - right_multiplication(a));
}

Superoperator anticommutator_superop(const Operator2& a) {
    return left_multiplication(a) + right_multiplication(a);
}

Superoperator expm_pade13(const Superoperator& a) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    const Superoperator as = a / std::ldexp(1.0, squarings);
    const Superoperator id = Superoperator::Identity();
    const Superoperator a2 = as * as;
    const Superoperator a4 = a2 * a2;
    const Superoperator a6 = a4 * a2;

    const Superoperator u =
        as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Superoperator v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Superoperator r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    return r;
}

Superoperator superop_exp(const Superoperator& k, double t) {
    if (!std::isfinite(t) || !all_finite(k)) {
        throw Error(ErrorCode::NonFinite, "superop_exp: non-finite generator or time");
    }
    if (t == 0.0) {
        return Superoperator::Identity();
    }
    const Superoperator kt = k * t;
    if (kt.cwiseAbs().maxCoeff() == 0.0) {
        return Superoperator::Identity();
    }

    Superoperator result;
    Eigen::ComplexEigenSolver<Superoperator> eig(kt, true);
    bool done = false;
    if (eig.info() == Eigen::Success) {
        const Superoperator& vecs = eig.eigenvectors();
        Eigen::JacobiSVD<Superoperator> svd(vecs);
        const auto& sv = svd.singularValues();
        const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
        if (cond < kEigenConditionLimit) {
            const auto& vals = eig.eigenvalues();
            if (vals.real().maxCoeff() > 700.0) {
                throw Error(ErrorCode::NonFinite, "superop_exp: exponential overflows");
            }
            Eigen::Vector4cd e;
            for (int i = 0; i < 4; ++i) {
                e(i) = std::exp(vals(i));
            }
            result = vecs * e.asDiagonal() * vecs.inverse();
            done = true;
        }
    }
    if (!done) {
        result = expm_pade13(kt);
    }
    if (!all_finite(result)) {
        throw Error(ErrorCode::NonFinite, "superop_exp: exponential overflows");
    }
    return result;
}

Superoperator conjugate_picture(const Superoperator& s, double t, const Superoperator& k) {
    return superop_exp(s, -t) * k * superop_exp(s, t);
}

Eigen::RowVector4cd trace_functional() {
    Eigen::RowVector4cd r;
    r << 1.0, 0.0, 0.0, 1.0;
    return r;
}

} // namespace decotime::core

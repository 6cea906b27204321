#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "liegen/errors.hpp"

namespace liegen {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Structure of a Lie-algebra element, as stored.
enum class Structure {
    skew_hermitian,     // M + M^H = 0
    real_antisymmetric, // real entries, M + M^T = 0
    general,
};

enum class GroupKind {
    unitary,
    special_unitary,
    special_orthogonal,
    general_linear_component,
};

const char* structure_name(Structure s);
const char* group_kind_name(GroupKind g);

/// Numerical tolerances shared across the library. All overridable.
struct Tolerances {
    double struct_tol = 1e-9; // algebra structure defect bound
    double group_tol = 1e-9;  // group invariant defect bound
    double rank_tol = 1e-9;   // relative Gram singular value cutoff
    double branch_tol = 1e-6; // spectral distance from -1 required by the log
};

/// A Lie-algebra element: square matrix plus its structure tag.
/// Values are immutable by convention; operations return fresh values.
struct AlgebraElement {
    Matrix mat;
    Structure structure = Structure::general;
    int dim() const { return static_cast<int>(mat.rows()); }
    double norm() const { return mat.norm(); }
};

/// A group element: square matrix plus the group it is checked against.
struct GroupElement {
    Matrix mat;
    GroupKind group = GroupKind::general_linear_component;
    int dim() const { return static_cast<int>(mat.rows()); }
};

bool is_finite(const Matrix& m);
void require_finite(const Matrix& m);

/// Frobenius norm of the structure defect (0 for a perfectly structured matrix).
double structure_defect(const Matrix& m, Structure s);
/// Frobenius/abs defect of the group invariants (unitarity, det).
double group_defect(const Matrix& m, GroupKind g);

/// Validating constructors. Throw NonFinite / NotInGroup on violation.
AlgebraElement make_algebra_element(Matrix m, Structure s, const Tolerances& tol = {});
GroupElement make_group_element(Matrix m, GroupKind g, const Tolerances& tol = {});

/// The group a structured algebra element exponentiates into.
GroupKind exp_group_kind(const AlgebraElement& x, double trace_tol = 1e-9);

/// Inverse by kind: adjoint for unitary kinds, transpose for orthogonal,
/// LU inverse for the general linear component.
Matrix group_inverse(const GroupElement& k);

/// Matrix exponential, scaling-and-squaring with a fixed-order (13,13)
/// rational approximant; the squaring count comes from the 1-norm.
Matrix expm(const Matrix& x);
GroupElement expm(const AlgebraElement& x);

/// Principal matrix logarithm by inverse scaling and squaring: repeated
/// principal square roots (product-form Denman-Beavers) until near the
/// identity, then a Gregory series. Requires the spectrum to stay clear of
/// the negative real axis near -1 (branch_tol).
AlgebraElement logm_principal(const GroupElement& k, const Tolerances& tol = {});

/// K X K^{-1}. Preserves the Frobenius norm and the algebra structure.
AlgebraElement adjoint_conjugate(const GroupElement& k, const AlgebraElement& x);

/// Re(trace(X^H Y)), the real inner product all independence decisions use.
double frobenius_inner(const AlgebraElement& x, const AlgebraElement& y);

/// ||K1 - K2||_F.
double group_distance(const GroupElement& k1, const GroupElement& k2);

struct GramRank {
    int rank = 0;
    std::vector<AlgebraElement> orthonormal_span;
};

/// Numerical rank of the span: singular values of the Gram matrix above
/// rank_tol times the largest, plus a modified-Gram-Schmidt basis of the span.
GramRank gram_rank(const std::vector<AlgebraElement>& vectors, double rank_tol);

/// Flatten to a real vector (re/im stacked) so that the Euclidean inner
/// product equals frobenius_inner.
RealVector real_vectorize(const Matrix& m);

/// Modified Gram-Schmidt with one re-orthogonalization pass; vectors whose
/// residual norm falls at or below drop_tol are discarded.
std::vector<AlgebraElement> orthonormalize(const std::vector<AlgebraElement>& vectors,
                                           double drop_tol);

/// Residual of x against an orthonormal set (component orthogonal to its span).
AlgebraElement orthogonal_residual(const AlgebraElement& x,
                                   const std::vector<AlgebraElement>& orthonormal);

} // namespace liegen

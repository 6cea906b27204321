#include "liegen/matrix_core.hpp"

#include <algorithm>
#include <cmath>

namespace liegen {

const char* structure_name(Structure s) {
    switch (s) {
        case Structure::skew_hermitian: return "skew_hermitian";
        case Structure::real_antisymmetric: return "real_antisymmetric";
        case Structure::general: return "general";
    }
    return "unknown";
}

const char* group_kind_name(GroupKind g) {
    switch (g) {
        case GroupKind::unitary: return "unitary";
        case GroupKind::special_unitary: return "special_unitary";
        case GroupKind::special_orthogonal: return "special_orthogonal";
        case GroupKind::general_linear_component: return "general_linear_component";
    }
    return "unknown";
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::non_finite: return "NonFinite";
        case ErrorKind::dim_mismatch: return "DimMismatch";
        case ErrorKind::empty_input: return "EmptyInput";
        case ErrorKind::not_in_group: return "NotInGroup";
        case ErrorKind::branch_cut: return "BranchCut";
        case ErrorKind::depth_exceeded: return "DepthExceeded";
        case ErrorKind::not_generating: return "NotGenerating";
        case ErrorKind::stuck_no_independent_conjugate: return "StuckNoIndependentConjugate";
        case ErrorKind::no_convergence: return "NoConvergence";
        case ErrorKind::coverage_not_reached: return "CoverageNotReached";
        case ErrorKind::budget_exhausted: return "BudgetExhausted";
        case ErrorKind::index_out_of_range: return "IndexOutOfRange";
        case ErrorKind::invalid_dims: return "InvalidDims";
        case ErrorKind::parse_error: return "ParseError";
    }
    return "Error";
}

bool is_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex& c = m(i, j);
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        }
    return true;
}

void require_finite(const Matrix& m) {
    if (!is_finite(m)) throw Error(ErrorKind::non_finite, "matrix has NaN/Inf entries");
}

double structure_defect(const Matrix& m, Structure s) {
    switch (s) {
        case Structure::skew_hermitian:
            return (m + m.adjoint()).norm();
        case Structure::real_antisymmetric:
            return std::hypot(m.imag().norm(), (m + m.transpose()).norm());
        case Structure::general:
            return 0.0;
    }
    return 0.0;
}

double group_defect(const Matrix& m, GroupKind g) {
    const Eigen::Index d = m.rows();
    const Matrix eye = Matrix::Identity(d, d);
    switch (g) {
        case GroupKind::unitary:
            return (m.adjoint() * m - eye).norm();
        case GroupKind::special_unitary:
            return std::max((m.adjoint() * m - eye).norm(),
                            std::abs(m.determinant() - Complex(1.0, 0.0)));
        case GroupKind::special_orthogonal:
            return std::max({(m.adjoint() * m - eye).norm(), m.imag().norm(),
                             std::abs(m.determinant() - Complex(1.0, 0.0))});
        case GroupKind::general_linear_component:
            return 0.0;
    }
    return 0.0;
}

AlgebraElement make_algebra_element(Matrix m, Structure s, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw Error(ErrorKind::invalid_dims, "algebra element must be square, dim >= 1");
    require_finite(m);
    const double defect = structure_defect(m, s);
    if (defect > tol.struct_tol)
        throw Error(ErrorKind::invalid_dims,
                    std::string("matrix violates ") + structure_name(s) + " structure",
                    defect);
    return AlgebraElement{std::move(m), s};
}

GroupElement make_group_element(Matrix m, GroupKind g, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw Error(ErrorKind::invalid_dims, "group element must be square, dim >= 1");
    require_finite(m);
    const double defect = group_defect(m, g);
    if (defect > tol.group_tol)
        throw Error(ErrorKind::not_in_group,
                    std::string("matrix violates ") + group_kind_name(g) + " invariant",
                    defect);
    return GroupElement{std::move(m), g};
}

GroupKind exp_group_kind(const AlgebraElement& x, double trace_tol) {
    switch (x.structure) {
        case Structure::skew_hermitian:
            return std::abs(x.mat.trace()) <= trace_tol * std::max(1.0, x.norm())
                       ? GroupKind::special_unitary
                       : GroupKind::unitary;
        case Structure::real_antisymmetric:
            return GroupKind::special_orthogonal;
        case Structure::general:
            return GroupKind::general_linear_component;
    }
    return GroupKind::general_linear_component;
}

Matrix group_inverse(const GroupElement& k) {
    switch (k.group) {
        case GroupKind::unitary:
        case GroupKind::special_unitary:
            return k.mat.adjoint();
        case GroupKind::special_orthogonal:
            return k.mat.transpose();
        case GroupKind::general_linear_component:
            return k.mat.partialPivLu().inverse();
    }
    return k.mat.adjoint();
}

// ---------------------------------------------------------------------------
// expm: (13,13) rational approximant after 2^-s scaling, then s squarings.

Matrix expm(const Matrix& x) {
    require_finite(x);
    const Eigen::Index d = x.rows();
    if (d != x.cols()) throw Error(ErrorKind::invalid_dims, "expm needs a square matrix");

    static const double pade_coeff[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    // Largest 1-norm for which the order-13 approximant is accurate unscaled.
    static const double theta13 = 5.371920351148152;

    const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));

    const Matrix a = x / std::pow(2.0, squarings);
    const Matrix eye = Matrix::Identity(d, d);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;

    const Matrix u = a * (a6 * (pade_coeff[13] * a6 + pade_coeff[11] * a4 + pade_coeff[9] * a2) +
                          pade_coeff[7] * a6 + pade_coeff[5] * a4 + pade_coeff[3] * a2 +
                          pade_coeff[1] * eye);
    const Matrix v = a6 * (pade_coeff[12] * a6 + pade_coeff[10] * a4 + pade_coeff[8] * a2) +
                     pade_coeff[6] * a6 + pade_coeff[4] * a4 + pade_coeff[2] * a2 +
                     pade_coeff[0] * eye;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

GroupElement expm(const AlgebraElement& x) {
    return GroupElement{expm(x.mat), exp_group_kind(x)};
}

// ---------------------------------------------------------------------------
// logm_principal

namespace {

// Principal square root via the product form of the Denman-Beavers iteration.
// Valid for matrices with no eigenvalue on the closed negative real axis.
Matrix sqrtm_principal(const Matrix& a) {
    const Eigen::Index d = a.rows();
    const Matrix eye = Matrix::Identity(d, d);
    Matrix m = a;
    Matrix y = a;
    for (int iter = 0; iter < 60; ++iter) {
        if ((m - eye).norm() <= 1e-14 * static_cast<double>(d)) break;
        const Matrix minv = m.partialPivLu().inverse();
        y = 0.5 * (y + y * minv);
        m = 0.5 * (eye + 0.5 * (m + minv));
    }
    return y;
}

Structure log_structure_for(GroupKind g) {
    switch (g) {
        case GroupKind::unitary:
        case GroupKind::special_unitary:
            return Structure::skew_hermitian;
        case GroupKind::special_orthogonal:
            return Structure::real_antisymmetric;
        case GroupKind::general_linear_component:
            return Structure::general;
    }
    return Structure::general;
}

Matrix project_to_structure(const Matrix& m, Structure s) {
    switch (s) {
        case Structure::skew_hermitian:
            return 0.5 * (m - m.adjoint());
        case Structure::real_antisymmetric: {
            const RealMatrix re = m.real();
            return (0.5 * (re - re.transpose())).cast<Complex>();
        }
        case Structure::general:
            return m;
    }
    return m;
}

} // namespace

AlgebraElement logm_principal(const GroupElement& k, const Tolerances& tol) {
    require_finite(k.mat);
    const Eigen::Index d = k.mat.rows();
    const Matrix eye = Matrix::Identity(d, d);

    const double defect = group_defect(k.mat, k.group);
    if (defect > tol.group_tol)
        throw Error(ErrorKind::not_in_group, "log input violates the group invariant", defect);

    // Principal branch is ill-defined (and ill-conditioned) with spectrum at -1.
    // For the normal matrices handled here sigma_min(K + I) = min_j |lambda_j + 1|.
    const double dist_minus_one =
        Eigen::JacobiSVD<Matrix>(k.mat + eye).singularValues().minCoeff();
    if (dist_minus_one < tol.branch_tol)
        throw Error(ErrorKind::branch_cut,
                    "eigenvalue too close to -1 for the principal branch", dist_minus_one);

    // Inverse scaling: square-root until close to the identity.
    Matrix a = k.mat;
    int sqrt_count = 0;
    while ((a - eye).cwiseAbs().colwise().sum().maxCoeff() > 0.25 && sqrt_count < 60) {
        a = sqrtm_principal(a);
        ++sqrt_count;
    }

    // Gregory series: log A = 2 * atanh(W), W = (A + I)^{-1}(A - I).
    // A - I and A + I commute, so the one-sided solve matches both orderings.
    const Matrix w = (a + eye).partialPivLu().solve(a - eye);
    const Matrix w2 = w * w;
    Matrix term = w;
    Matrix sum = w;
    for (int j = 3; j <= 27; j += 2) {
        term = term * w2;
        sum += term / static_cast<double>(j);
    }
    Matrix result = std::pow(2.0, sqrt_count) * 2.0 * sum;

    const Structure s = log_structure_for(k.group);
    result = project_to_structure(result, s);

    return AlgebraElement{std::move(result), s};
}

// ---------------------------------------------------------------------------

AlgebraElement adjoint_conjugate(const GroupElement& k, const AlgebraElement& x) {
    if (k.mat.rows() != x.mat.rows())
        throw Error(ErrorKind::dim_mismatch, "conjugation needs matching dimensions");
    Matrix r = k.mat * x.mat * group_inverse(k);
    r = project_to_structure(r, x.structure);
    return AlgebraElement{std::move(r), x.structure};
}

double frobenius_inner(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.mat.rows() != y.mat.rows())
        throw Error(ErrorKind::dim_mismatch, "inner product needs matching dimensions");
    return (x.mat.adjoint() * y.mat).trace().real();
}

double group_distance(const GroupElement& k1, const GroupElement& k2) {
    if (k1.mat.rows() != k2.mat.rows())
        throw Error(ErrorKind::dim_mismatch, "distance needs matching dimensions");
    return (k1.mat - k2.mat).norm();
}

RealVector real_vectorize(const Matrix& m) {
    const Eigen::Index n = m.size();
    RealVector v(2 * n);
    const Complex* data = m.data();
    for (Eigen::Index i = 0; i < n; ++i) {
        v(2 * i) = data[i].real();
        v(2 * i + 1) = data[i].imag();
    }
    return v;
}

std::vector<AlgebraElement> orthonormalize(const std::vector<AlgebraElement>& vectors,
                                           double drop_tol) {
    std::vector<AlgebraElement> basis;
    for (const AlgebraElement& x : vectors) {
        AlgebraElement v = x;
        for (int pass = 0; pass < 2; ++pass)
            for (const AlgebraElement& e : basis)
                v.mat -= frobenius_inner(e, v) * e.mat;
        const double nrm = v.norm();
        if (nrm > drop_tol) {
            v.mat /= nrm;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

AlgebraElement orthogonal_residual(const AlgebraElement& x,
                                   const std::vector<AlgebraElement>& orthonormal) {
    AlgebraElement v = x;
    for (int pass = 0; pass < 2; ++pass)
        for (const AlgebraElement& e : orthonormal)
            v.mat -= frobenius_inner(e, v) * e.mat;
    return v;
}

GramRank gram_rank(const std::vector<AlgebraElement>& vectors, double rank_tol) {
    if (vectors.empty()) throw Error(ErrorKind::empty_input, "gram_rank needs vectors");
    if (rank_tol <= 0.0) throw Error(ErrorKind::invalid_dims, "rank_tol must be positive");
    const Eigen::Index dim = vectors.front().mat.rows();
    for (const AlgebraElement& v : vectors)
        if (v.mat.rows() != dim)
            throw Error(ErrorKind::dim_mismatch, "gram_rank needs a common dimension");

    const int count = static_cast<int>(vectors.size());
    RealMatrix gram(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j) gram(i, j) = frobenius_inner(vectors[i], vectors[j]);
    gram = 0.5 * (gram + gram.transpose());

    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(gram);
    const RealVector values = eig.eigenvalues();
    const double largest = std::max(values.maxCoeff(), 0.0);

    GramRank result;
    for (int i = 0; i < count; ++i)
        if (values(i) > rank_tol * largest && values(i) > 0.0) ++result.rank;

    const double drop = std::sqrt(std::max(largest, 0.0) * rank_tol);
    result.orthonormal_span = orthonormalize(vectors, drop);
    return result;
}

} // namespace liegen

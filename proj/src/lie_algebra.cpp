#include "liegen/lie_algebra.hpp"

#include <algorithm>

namespace liegen {

GeneratorSet make_generator_set(std::vector<AlgebraElement> elements,
                                std::vector<std::string> labels,
                                const Tolerances& tol) {
    if (elements.empty())
        throw Error(ErrorKind::empty_input, "generator set needs at least one element");
    const int dim = elements.front().dim();
    const Structure structure = elements.front().structure;
    for (const AlgebraElement& e : elements) {
        if (e.dim() != dim)
            throw Error(ErrorKind::dim_mismatch, "generators must share the matrix dimension");
        if (e.structure != structure)
            throw Error(ErrorKind::dim_mismatch, "generators must share the structure");
        require_finite(e.mat);
    }
    const GramRank rank = gram_rank(elements, tol.rank_tol);
    if (rank.rank != static_cast<int>(elements.size()))
        throw Error(ErrorKind::invalid_dims, "generators are linearly dependent",
                    static_cast<double>(rank.rank));
    if (!labels.empty() && labels.size() != elements.size())
        throw Error(ErrorKind::invalid_dims, "label count must match generator count");
    if (labels.empty())
        for (size_t i = 0; i < elements.size(); ++i)
            labels.push_back("X" + std::to_string(i + 1));
    return GeneratorSet{std::move(elements), std::move(labels), dim, structure};
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.dim() != y.dim())
        throw Error(ErrorKind::dim_mismatch, "bracket needs matching dimensions");
    if (x.structure != y.structure)
        throw Error(ErrorKind::dim_mismatch, "bracket needs matching structure");
    return AlgebraElement{x.mat * y.mat - y.mat * x.mat, x.structure};
}

AlgebraBasis bracket_closure(const GeneratorSet& gens, const ClosureConfig& cfg) {
    if (cfg.max_depth < 1)
        throw Error(ErrorKind::invalid_dims, "max_depth must be at least 1");

    // The working basis is kept orthonormal, so candidate brackets have norm
    // at most 2 and the growth threshold needs no input-scale correction.
    const double grow_tol = cfg.closure_tol;

    std::vector<AlgebraElement> basis = orthonormalize(gens.elements, 1e-14);
    size_t new_begin = 0; // first element added by the previous sweep

    for (int depth = 0; depth < cfg.max_depth; ++depth) {
        const size_t old_size = basis.size();
        const size_t sweep_begin = new_begin;
        new_begin = old_size;
        bool grew = false;
        // Brackets of (new x all); older pairs were already swept.
        for (size_t i = sweep_begin; i < old_size; ++i) {
            for (size_t j = 0; j < old_size; ++j) {
                if (j >= sweep_begin && j >= i) continue; // [a,b] covers [b,a]
                AlgebraElement cand = bracket(basis[i], basis[j]);
                AlgebraElement resid = orthogonal_residual(cand, basis);
                const double rnorm = resid.norm();
                if (rnorm > grow_tol) {
                    resid.mat /= rnorm;
                    basis.push_back(std::move(resid));
                    grew = true;
                }
            }
        }
        if (!grew) {
            AlgebraBasis result;
            result.dim_algebra = static_cast<int>(basis.size());
            result.elements = std::move(basis);
            return result;
        }
    }
    throw Error(ErrorKind::depth_exceeded, "bracket closure still growing at max_depth",
                static_cast<double>(basis.size()));
}

bool is_generating(const GeneratorSet& gens, int expected_dim, const ClosureConfig& cfg) {
    return bracket_closure(gens, cfg).dim_algebra == expected_dim;
}

bool is_generating(const GeneratorSet& gens, const AlgebraBasis& ambient,
                   const ClosureConfig& cfg) {
    return is_generating(gens, ambient.dim_algebra, cfg);
}

GroupKind natural_group_kind(const GeneratorSet& gens) {
    switch (gens.structure) {
        case Structure::skew_hermitian: {
            for (const AlgebraElement& e : gens.elements)
                if (std::abs(e.mat.trace()) > 1e-9 * std::max(1.0, e.norm()))
                    return GroupKind::unitary;
            return GroupKind::special_unitary;
        }
        case Structure::real_antisymmetric:
            return GroupKind::special_orthogonal;
        case Structure::general:
            return GroupKind::general_linear_component;
    }
    return GroupKind::general_linear_component;
}

SpanCheck in_span(const AlgebraElement& x, const std::vector<AlgebraElement>& basis,
                  double tol) {
    if (basis.empty()) throw Error(ErrorKind::empty_input, "in_span needs a basis");
    for (const AlgebraElement& b : basis)
        if (b.dim() != x.dim())
            throw Error(ErrorKind::dim_mismatch, "in_span needs matching dimensions");

    // Real least squares on the vectorized matrices; the algebras here are
    // real forms, so real coefficients are the meaningful span.
    const Eigen::Index rows = 2 * static_cast<Eigen::Index>(x.dim()) * x.dim();
    RealMatrix a(rows, static_cast<Eigen::Index>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = real_vectorize(basis[j].mat);
    const RealVector b = real_vectorize(x.mat);

    SpanCheck result;
    result.coefficients = a.colPivHouseholderQr().solve(b);
    result.residual_norm = (a * result.coefficients - b).norm();
    result.inside = result.residual_norm <= tol * std::max(1.0, x.norm());
    return result;
}

} // namespace liegen

#pragma once

#include <string>
#include <vector>

#include "liegen/matrix_core.hpp"

namespace liegen {

/// A validated set of linearly independent algebra elements with a shared
/// dimension and structure. Construction is the only gate; afterwards the
/// invariants are assumed everywhere.
struct GeneratorSet {
    std::vector<AlgebraElement> elements;
    std::vector<std::string> labels;
    int dim = 0;                              // matrix dimension
    Structure structure = Structure::general; // shared by all elements
    int count() const { return static_cast<int>(elements.size()); }
};

/// Throws InvalidDims / DimMismatch on structural violations and
/// InvalidDims when the elements are linearly dependent.
GeneratorSet make_generator_set(std::vector<AlgebraElement> elements,
                                std::vector<std::string> labels = {},
                                const Tolerances& tol = {});

/// Orthonormal basis of a bracket-closed subspace.
struct AlgebraBasis {
    std::vector<AlgebraElement> elements;
    int dim_algebra = 0;
};

/// XY - YX. Structure is preserved (skew-Hermitian and real antisymmetric
/// matrices are closed under the commutator).
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

struct ClosureConfig {
    double closure_tol = 1e-8; // relative residual needed to enlarge the span
    int max_depth = 16;        // bracket sweeps before giving up
};

/// Smallest bracket-closed subspace containing the generators, grown by
/// breadth-first sweeps of (new x all) brackets. Deterministic sweep order.
/// Throws DepthExceeded if the span is still growing after max_depth sweeps.
AlgebraBasis bracket_closure(const GeneratorSet& gens, const ClosureConfig& cfg = {});

/// True iff the bracket closure of gens reaches expected_dim.
bool is_generating(const GeneratorSet& gens, int expected_dim,
                   const ClosureConfig& cfg = {});
bool is_generating(const GeneratorSet& gens, const AlgebraBasis& ambient,
                   const ClosureConfig& cfg = {});

/// Group kind the generators exponentiate into: traceless skew-Hermitian
/// sets give special_unitary, skew-Hermitian gives unitary, real
/// antisymmetric gives special_orthogonal. Conjugation preserves traces, so
/// the kind extends to every element a completion derives from the set.
GroupKind natural_group_kind(const GeneratorSet& gens);

struct SpanCheck {
    bool inside = false;
    RealVector coefficients; // real coefficients, one per basis element
    double residual_norm = 0.0;
};

/// Least-squares membership test over the real scalar field (the algebras
/// handled here are real forms, so real combinations are the honest span).
/// inside = residual <= tol * max(1, ||X||_F).
SpanCheck in_span(const AlgebraElement& x, const std::vector<AlgebraElement>& basis,
                  double tol);

} // namespace liegen

#pragma once

#include "liegen/basis_completion.hpp"

namespace liegen {

/// Coordinates in the ordered-exponential chart
/// F(t) = expm(t_1 X_1) ... expm(t_n X_n) around the identity.
struct ChartCoordinates {
    RealVector times;
    double residual = 0.0; // Frobenius distance of F(times) to the target
    int iterations = 0;    // Newton steps the solve took
};

struct WordMeta {
    long long length = 0;
    long long bound_used = 0;    // schedule bound the word was built under
    double product_error = 0.0;  // replay-vs-intended-target Frobenius bound
};

/// A product of generator exponentials: replaying
/// expm(time_1 X_{g_1}) ... expm(time_l X_{g_l}) left to right reproduces
/// the intended group element within meta.product_error.
struct GeneratorWord {
    std::vector<WordLetter> letters;
    WordMeta meta;
};

struct SolverConfig {
    double chart_radius = 0.5;    // Frobenius ball around I the chart accepts
    int max_iters = 50;
    double final_tol = 1e-10;     // chart residual target
    double prune_tol = 1e-12;     // letters below this |time| are dropped
    double max_condition = 1e8;   // Jacobian condition abort threshold
    double final_tol_total = 1e-6; // end-to-end synthesized word error
};

/// Evaluate the chart map at the given coordinates.
GroupElement chart_forward(const RealVector& times, const CompletedBasis& basis);

/// Invert the chart by a damped Newton iteration on the multiplicative
/// residual target * F(t)^{-1}: the update solves J dt = coords(logm(R))
/// where column j of J holds the basis coordinates of Ad_{prefix_j}(X_j).
/// Throws NoConvergence (value = best residual, or the condition estimate
/// when the Jacobian degenerates) and propagates BranchCut from the log.
ChartCoordinates chart_solve(const GroupElement& target, const CompletedBasis& basis,
                             const SolverConfig& cfg = {});

/// Expand chart coordinates into a word over original generators only.
/// Coordinates on extensions become conjugator ++ core ++ reversed-negated
/// conjugator blocks; a whole block is dropped when |t_i| < prune_tol, with
/// the skipped rotation charged to meta.product_error.
GeneratorWord substitute_conjugations(const ChartCoordinates& coords,
                                      const CompletedBasis& basis,
                                      const SolverConfig& cfg = {});

} // namespace liegen

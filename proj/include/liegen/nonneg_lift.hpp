#pragma once

#include "liegen/global_synthesis.hpp"

namespace liegen {

struct ReverseApprox {
    double t_pos = 0.0;
    double achieved_error = 0.0;
    long long search_budget_used = 0;
};

struct RecurrenceConfig {
    double commensurate_tol = 1e-9; // relative gcd remainder cutoff
    double t_max_factor = 1e4;      // grid horizon = factor * (2*pi / ||X||_2)
    long long max_evals = 1000000;  // distance evaluations per letter
};

/// Replace a backward flow time t < 0 by a forward time t_pos >= 0 with
/// ||expm(t_pos X) - expm(t X)||_F <= tol. Commensurate spectra take the
/// closed-form period route (error at machine level); otherwise a coarse
/// grid over [0, T_max] plus golden-section refinement of the best cell.
/// Nonnegative t returns immediately with error 0.
/// Throws BudgetExhausted (value = best error found) when the grid budget
/// runs out before reaching tol.
ReverseApprox reverse_time_approx(const AlgebraElement& x, double t, double tol,
                                  const RecurrenceConfig& cfg = {});

struct NonnegWord {
    std::vector<WordLetter> letters; // every time >= 0
    double lift_error = 0.0;         // additive replay-error bound vs original
    long long original_length = 0;
};

/// Rewrite every negative-time letter via reverse_time_approx. Letter count
/// is unchanged; per-letter errors add (unitary factors, so the product
/// perturbation telescopes). Throws BudgetExhausted with index = offending
/// letter position.
NonnegWord lift_word_nonneg(const GeneratorWord& word, const GeneratorSet& gens,
                            double per_factor_tol, const RecurrenceConfig& cfg = {});

/// synthesize followed by lift_word_nonneg.
NonnegWord nonneg_synthesize(const GroupElement& target, const CoverNet& net,
                             const CompletedBasis& basis, double per_factor_tol,
                             const SolverConfig& solver_cfg = {},
                             const RecurrenceConfig& rec_cfg = {});

} // namespace liegen

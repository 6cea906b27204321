#pragma once

#include <vector>

#include "liegen/lie_algebra.hpp"

namespace liegen {

/// One exponential factor over the original generators. Indices are 0-based
/// in memory; the file formats use 1-based indices and the serialization
/// layer converts at the boundary.
struct WordLetter {
    int generator = 0;
    double time = 0.0;
};

/// Conjugation recipe for one completed-basis element, fully expanded over
/// the original generators: element = A X_core A^{-1} with
/// A = expm(g_1 t_1) ... expm(g_r t_r), factors stored outermost first.
/// Empty factors means the element is an original generator.
struct ConjugationWord {
    std::vector<WordLetter> factors;
    int core_index = 0; // original generator being conjugated, 0-based
};

struct ExtendedElement {
    AlgebraElement element;
    ConjugationWord word;
};

/// Basis of the full algebra built from a generator set by adjoint
/// conjugations. Elements are ordered originals first, then extensions in
/// acceptance order; element(i) spans both ranges.
struct CompletedBasis {
    GeneratorSet generators;
    std::vector<ExtendedElement> extended;
    int n = 0;                        // algebra dimension
    std::vector<long long> achieved_r; // conjugator count per extension step

    int m() const { return generators.count(); }
    const AlgebraElement& element(int i) const {
        if (i < 0 || i >= n)
            throw Error(ErrorKind::index_out_of_range, "basis element index", 0.0, i);
        return i < m() ? generators.elements[static_cast<size_t>(i)]
                       : extended[static_cast<size_t>(i - m())].element;
    }
};

/// Worst-case conjugator counts r_1..r_{n-m} and the resulting factor bound
/// n + 2*sum(r_k). Values grow exponentially, hence 64-bit with overflow
/// checks.
struct RkSchedule {
    std::vector<long long> values;
    long long bound = 0;
};

/// r_1 = 1, r_2 = 2, r_k = 2 r_{k-2} + r_{k-1} + 1.
/// Throws InvalidDims for m < 1 or m > n, or on 64-bit overflow.
RkSchedule rk_schedule(int n, int m);

struct CompletionConfig {
    /// Candidate conjugation times, coarse log spacing across [0.05, 1.5].
    std::vector<double> t_grid = {0.05, 0.0808, 0.1307, 0.2115,
                                  0.3421, 0.5534, 0.8952, 1.5};
    /// Minimum relative out-of-span component for acceptance.
    double accept_score = 0.1;
};

/// Greedy basis completion by adjoint conjugation. Each step scans
/// (conjugator, core, t) candidates among all currently available elements,
/// keeps the best score whose expanded word stays within the r_k schedule,
/// and stops at dimension n. Deterministic.
/// Throws StuckNoIndependentConjugate (value = best score seen) when no
/// candidate reaches cfg.accept_score.
CompletedBasis complete_basis(const GeneratorSet& gens, const AlgebraBasis& algebra,
                              const CompletionConfig& cfg = {},
                              const Tolerances& tol = {});

/// Conjugator letters of entry i (0-based over the full basis). Original
/// generators yield an empty sequence. Re-verifies that the conjugation
/// reproduces the stored element before returning.
std::vector<WordLetter> expand_word(int entry_index, const CompletedBasis& basis);

/// Exponential factors one chart coordinate of entry i costs in a final
/// word: 2r + 1 for extensions, 1 for originals.
long long exp_factor_count(int entry_index, const CompletedBasis& basis);

} // namespace liegen

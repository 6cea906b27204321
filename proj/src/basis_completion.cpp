#include "liegen/basis_completion.hpp"

#include <algorithm>
#include <limits>

namespace liegen {

namespace {

long long checked_add(long long a, long long b) {
    long long r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorKind::invalid_dims, "schedule value overflows 64 bits");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorKind::invalid_dims, "schedule value overflows 64 bits");
    return r;
}

/// Conjugator matrix A of a word: ordered product of the factor
/// exponentials, outermost first. The represented element is A X_core A^-1.
Matrix conjugator_matrix(const std::vector<WordLetter>& factors,
                         const GeneratorSet& gens) {
    Matrix a = Matrix::Identity(gens.dim, gens.dim);
    for (const WordLetter& f : factors)
        a = a * expm(f.time * gens.elements[static_cast<size_t>(f.generator)].mat);
    return a;
}

Matrix conjugator_inverse(const std::vector<WordLetter>& factors,
                          const GeneratorSet& gens) {
    Matrix a = Matrix::Identity(gens.dim, gens.dim);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        a = a * expm(-it->time * gens.elements[static_cast<size_t>(it->generator)].mat);
    return a;
}

AlgebraElement apply_word(const ConjugationWord& word, const GeneratorSet& gens) {
    const Matrix a = conjugator_matrix(word.factors, gens);
    const Matrix ainv = conjugator_inverse(word.factors, gens);
    const AlgebraElement& core = gens.elements[static_cast<size_t>(word.core_index)];
    return AlgebraElement{a * core.mat * ainv, core.structure};
}

} // namespace

RkSchedule rk_schedule(int n, int m) {
    if (m < 1 || m > n)
        throw Error(ErrorKind::invalid_dims, "need 1 <= m <= n", 0.0, m);
    RkSchedule s;
    long long sum = 0;
    for (int k = 1; k <= n - m; ++k) {
        long long rk = 0;
        if (k == 1) rk = 1;
        else if (k == 2) rk = 2;
        else
            rk = checked_add(checked_add(checked_mul(2, s.values[static_cast<size_t>(k - 3)]),
                                         s.values[static_cast<size_t>(k - 2)]),
                             1);
        s.values.push_back(rk);
        sum = checked_add(sum, rk);
    }
    s.bound = checked_add(static_cast<long long>(n), checked_mul(2, sum));
    return s;
}

CompletedBasis complete_basis(const GeneratorSet& gens, const AlgebraBasis& algebra,
                              const CompletionConfig& cfg, const Tolerances& tol) {
    const int m = gens.count();
    const int n = algebra.dim_algebra;
    if (n < m)
        throw Error(ErrorKind::invalid_dims, "algebra dimension below generator count");
    if (!cfg.t_grid.size())
        throw Error(ErrorKind::empty_input, "completion needs a nonempty time grid");

    const RkSchedule schedule = rk_schedule(n, m);

    CompletedBasis basis;
    basis.generators = gens;
    basis.n = n;

    // Working pool: the element, its expanded word, its conjugator count.
    struct Entry {
        AlgebraElement element;
        ConjugationWord word;
        long long r = 0;
    };
    std::vector<Entry> pool;
    for (int i = 0; i < m; ++i)
        pool.push_back(Entry{gens.elements[static_cast<size_t>(i)],
                             ConjugationWord{{}, i}, 0});

    std::vector<AlgebraElement> span = orthonormalize(gens.elements, 1e-14);

    for (int step = 1; step <= n - m; ++step) {
        const long long r_limit = schedule.values[static_cast<size_t>(step - 1)];

        double best_score = -1.0;
        int best_c = -1, best_p = -1;
        double best_t = 0.0;

        for (size_t c = 0; c < pool.size(); ++c) {
            for (size_t p = 0; p < pool.size(); ++p) {
                if (c == p) continue; // conjugating an element by itself is the identity map
                const long long cost = 2 * pool[c].r + 1 + pool[p].r;
                // Staying at or below r_limit keeps every achieved_r within
                // the schedule; the cheaper ordering of any pair always
                // qualifies, so this filter cannot block progress.
                if (cost > r_limit) continue;
                for (double t : cfg.t_grid) {
                    const GroupElement k = expm(AlgebraElement{
                        t * pool[c].element.mat, pool[c].element.structure});
                    const AlgebraElement cand = adjoint_conjugate(k, pool[p].element);
                    const double denom = std::max(cand.norm(), 1e-300);
                    const double score = orthogonal_residual(cand, span).norm() / denom;
                    if (score > best_score + 1e-15) {
                        best_score = score;
                        best_c = static_cast<int>(c);
                        best_p = static_cast<int>(p);
                        best_t = t;
                    }
                }
            }
        }

        if (best_score < cfg.accept_score)
            throw Error(ErrorKind::stuck_no_independent_conjugate,
                        "no conjugate leaves the current span", best_score, step);

        // Expand over original generators. With A_c the conjugator of the
        // chosen element X_c = A_c X_{c0} A_c^{-1},
        //   e^{t X_c} = A_c e^{t X_{c0}} A_c^{-1},
        // so the new conjugator word is
        //   factors_c ++ [(c0, t)] ++ reversed-negated factors_c ++ factors_p.
        const Entry& ec = pool[static_cast<size_t>(best_c)];
        const Entry& ep = pool[static_cast<size_t>(best_p)];
        ConjugationWord word;
        word.factors = ec.word.factors;
        word.factors.push_back(WordLetter{ec.word.core_index, best_t});
        for (auto it = ec.word.factors.rbegin(); it != ec.word.factors.rend(); ++it)
            word.factors.push_back(WordLetter{it->generator, -it->time});
        word.factors.insert(word.factors.end(), ep.word.factors.begin(),
                            ep.word.factors.end());
        word.core_index = ep.word.core_index;

        const long long r_new = static_cast<long long>(word.factors.size());
        if (r_new != 2 * ec.r + 1 + ep.r || r_new > r_limit)
            throw Error(ErrorKind::invalid_dims, "conjugation word length left the schedule",
                        static_cast<double>(r_new), step);

        const GroupElement k = expm(
            AlgebraElement{best_t * ec.element.mat, ec.element.structure});
        AlgebraElement accepted = adjoint_conjugate(k, ep.element);

        // The expanded word must rebuild the same element; this guards the
        // expansion algebra, not the numerics.
        const AlgebraElement rebuilt = apply_word(word, gens);
        if ((rebuilt.mat - accepted.mat).norm() > 1e-10 * std::max(1.0, accepted.norm()))
            throw Error(ErrorKind::no_convergence,
                        "expanded conjugation word fails to reproduce its element",
                        (rebuilt.mat - accepted.mat).norm(), step);

        AlgebraElement resid = orthogonal_residual(accepted, span);
        resid.mat /= resid.norm();
        span.push_back(std::move(resid));

        basis.extended.push_back(ExtendedElement{accepted, word});
        basis.achieved_r.push_back(r_new);
        pool.push_back(Entry{std::move(accepted), std::move(word), r_new});
    }

    // Final independence check across all n elements.
    std::vector<AlgebraElement> all;
    for (int i = 0; i < n; ++i) all.push_back(basis.element(i));
    if (gram_rank(all, tol.rank_tol).rank != n)
        throw Error(ErrorKind::stuck_no_independent_conjugate,
                    "completed set is not full rank", static_cast<double>(n));
    return basis;
}

std::vector<WordLetter> expand_word(int entry_index, const CompletedBasis& basis) {
    if (entry_index < 0 || entry_index >= basis.n)
        throw Error(ErrorKind::index_out_of_range, "basis entry index", 0.0, entry_index);
    if (entry_index < basis.m()) return {};
    const ExtendedElement& ext = basis.extended[static_cast<size_t>(entry_index - basis.m())];
    const AlgebraElement rebuilt = apply_word(ext.word, basis.generators);
    if ((rebuilt.mat - ext.element.mat).norm() >
        1e-10 * std::max(1.0, ext.element.norm()))
        throw Error(ErrorKind::no_convergence,
                    "stored conjugation word fails to reproduce its element",
                    (rebuilt.mat - ext.element.mat).norm(), entry_index);
    return ext.word.factors;
}

long long exp_factor_count(int entry_index, const CompletedBasis& basis) {
    if (entry_index < 0 || entry_index >= basis.n)
        throw Error(ErrorKind::index_out_of_range, "basis entry index", 0.0, entry_index);
    if (entry_index < basis.m()) return 1;
    return 2 * basis.achieved_r[static_cast<size_t>(entry_index - basis.m())] + 1;
}

} // namespace liegen

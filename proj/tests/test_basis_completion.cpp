#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "liegen/basis_completion.hpp"
#include "oracles.hpp"

using namespace liegen;

namespace {

CompletedBasis complete(const GeneratorSet& gens) {
    return complete_basis(gens, bracket_closure(gens));
}

/// Replay a conjugation word with fresh exponentials and apply it to the
/// core generator. Independent of the library's internal expansion helpers.
AlgebraElement replay_conjugation(const ConjugationWord& word, const GeneratorSet& gens) {
    Matrix a = Matrix::Identity(gens.dim, gens.dim);
    for (const WordLetter& f : word.factors)
        a = a * oracles::expm_taylor(f.time * gens.elements[static_cast<size_t>(f.generator)].mat);
    const Matrix core = gens.elements[static_cast<size_t>(word.core_index)].mat;
    Matrix ainv = Matrix::Identity(gens.dim, gens.dim);
    for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it)
        ainv = ainv * oracles::expm_taylor(
                          -it->time * gens.elements[static_cast<size_t>(it->generator)].mat);
    return AlgebraElement{a * core * ainv, gens.structure};
}

} // namespace

TEST_CASE("schedule frozen values") {
    const RkSchedule s32 = rk_schedule(3, 2);
    REQUIRE(s32.values.size() == 1);
    CHECK(s32.values[0] == 1);
    CHECK(s32.bound == 5);

    const RkSchedule s33 = rk_schedule(3, 3);
    CHECK(s33.values.empty());
    CHECK(s33.bound == 3);

    const RkSchedule s82 = rk_schedule(8, 2);
    const std::vector<long long> expected{1, 2, 5, 10, 21, 42};
    CHECK(s82.values == expected);
    CHECK(s82.bound == 170);
}

TEST_CASE("schedule recursion holds exactly out to k = 20") {
    const RkSchedule s = rk_schedule(22, 2);
    REQUIRE(s.values.size() == 20);
    CHECK(s.values[0] == 1);
    CHECK(s.values[1] == 2);
    for (size_t k = 2; k < 20; ++k)
        CHECK(s.values[k] == 2 * s.values[k - 2] + s.values[k - 1] + 1);
    CHECK(s.values == oracles::reference_rk(22, 2));
    CHECK(s.bound == oracles::reference_bound(22, 2));
}

TEST_CASE("schedule monotonicity") {
    for (int n = 3; n <= 10; ++n)
        CHECK(rk_schedule(n + 1, 2).bound > rk_schedule(n, 2).bound);
    for (int m = 2; m < 8; ++m)
        CHECK(rk_schedule(8, m + 1).bound <= rk_schedule(8, m).bound);
}

TEST_CASE("schedule rejects bad dimensions and overflow") {
    CHECK_THROWS_AS(rk_schedule(2, 3), Error);
    CHECK_THROWS_AS(rk_schedule(3, 0), Error);
    // The recursion grows like 2.27^k; a few hundred steps cannot fit.
    CHECK_THROWS_AS(rk_schedule(300, 1), Error);
}

TEST_CASE("su(2) pair completes with one conjugation") {
    const GeneratorSet gens =
        make_generator_set({oracles::su2_e1(), oracles::su2_e2()}, {"e1", "e2"});
    const CompletedBasis basis = complete(gens);

    CHECK(basis.n == 3);
    CHECK(basis.m() == 2);
    REQUIRE(basis.achieved_r.size() == 1);
    CHECK(basis.achieved_r[0] == 1);
    REQUIRE(basis.extended.size() == 1);

    // The new element must have a component along e3 (the direction the
    // generators do not span).
    const double e3_part =
        frobenius_inner(basis.extended[0].element, oracles::su2_e3()) /
        frobenius_inner(oracles::su2_e3(), oracles::su2_e3());
    CHECK(std::abs(e3_part) > 0.05);

    // Reproduction from the stored word, via an independent replay.
    const AlgebraElement replayed = replay_conjugation(basis.extended[0].word, gens);
    CHECK((replayed.mat - basis.extended[0].element.mat).norm() < 1e-10);
}

TEST_CASE("so(3) rotation pair completes") {
    const GeneratorSet gens =
        make_generator_set({oracles::so3_lx(), oracles::so3_ly()}, {"Lx", "Ly"});
    const CompletedBasis basis = complete(gens);
    CHECK(basis.n == 3);
    REQUIRE(basis.achieved_r.size() == 1);
    CHECK(basis.achieved_r[0] == 1);
    const AlgebraElement replayed = replay_conjugation(basis.extended[0].word, gens);
    CHECK((replayed.mat - basis.extended[0].element.mat).norm() < 1e-10);
}

TEST_CASE("generic su(3) pair completes within the schedule") {
    const GeneratorSet gens =
        make_generator_set({oracles::su3_gen_a(), oracles::su3_gen_b()});
    const CompletedBasis basis = complete(gens);
    CHECK(basis.n == 8);
    CHECK(basis.m() == 2);
    REQUIRE(basis.achieved_r.size() == 6);

    const RkSchedule schedule = rk_schedule(8, 2);
    for (size_t k = 0; k < basis.achieved_r.size(); ++k)
        CHECK(basis.achieved_r[k] <= schedule.values[k]);

    for (const ExtendedElement& e : basis.extended) {
        const AlgebraElement replayed = replay_conjugation(e.word, gens);
        CHECK((replayed.mat - e.element.mat).norm() <
              1e-9 * std::max(1.0, e.element.norm()));
    }

    // All n elements are simultaneously independent.
    std::vector<AlgebraElement> all;
    for (int i = 0; i < basis.n; ++i) all.push_back(basis.element(i));
    CHECK(gram_rank(all, 1e-9).rank == 8);
}

TEST_CASE("already-full generator set completes trivially") {
    const GeneratorSet full = make_generator_set(
        {oracles::su2_e1(), oracles::su2_e2(), oracles::su2_e3()});
    const CompletedBasis basis = complete(full);
    CHECK(basis.n == 3);
    CHECK(basis.extended.empty());
    CHECK(basis.achieved_r.empty());
}

TEST_CASE("random generic pairs stay within the schedule") {
    Rng rng(31);
    for (int trial = 0; trial < 2; ++trial) {
        const GeneratorSet su_pair = make_generator_set(
            {oracles::random_su(3, rng), oracles::random_su(3, rng)});
        if (bracket_closure(su_pair).dim_algebra != 8) continue; // degenerate draw
        const CompletedBasis basis = complete(su_pair);
        const RkSchedule schedule = rk_schedule(basis.n, basis.m());
        for (size_t k = 0; k < basis.achieved_r.size(); ++k)
            CHECK(basis.achieved_r[k] <= schedule.values[k]);
    }
    for (int trial = 0; trial < 2; ++trial) {
        const GeneratorSet so_pair = make_generator_set(
            {oracles::random_so(4, rng), oracles::random_so(4, rng)});
        const int dim = bracket_closure(so_pair).dim_algebra;
        if (dim != 6) continue;
        const CompletedBasis basis = complete(so_pair);
        const RkSchedule schedule = rk_schedule(basis.n, basis.m());
        for (size_t k = 0; k < basis.achieved_r.size(); ++k)
            CHECK(basis.achieved_r[k] <= schedule.values[k]);
    }
}

TEST_CASE("expand_word flattens and verifies") {
    const GeneratorSet gens =
        make_generator_set({oracles::su2_e1(), oracles::su2_e2()});
    const CompletedBasis basis = complete(gens);

    // Original generators have empty conjugator words.
    CHECK(expand_word(0, basis).empty());
    CHECK(expand_word(1, basis).empty());

    const std::vector<WordLetter> w = expand_word(2, basis);
    REQUIRE(w.size() == 1);
    CHECK(w[0].generator >= 0);
    CHECK(w[0].generator < 2);

    CHECK_THROWS_AS(expand_word(3, basis), Error);
    CHECK_THROWS_AS(expand_word(-1, basis), Error);
}

TEST_CASE("nested words multiply lengths as the recursion predicts") {
    const GeneratorSet gens =
        make_generator_set({oracles::su3_gen_a(), oracles::su3_gen_b()});
    const CompletedBasis basis = complete(gens);
    // Each stored word's length must equal its achieved_r entry, and the
    // nested expansion is already flattened over original generators.
    for (size_t k = 0; k < basis.extended.size(); ++k) {
        const std::vector<WordLetter> w = expand_word(static_cast<int>(k) + basis.m(), basis);
        CHECK(static_cast<long long>(w.size()) == basis.achieved_r[k]);
        for (const WordLetter& letter : w) {
            CHECK(letter.generator >= 0);
            CHECK(letter.generator < basis.m());
        }
    }
}

TEST_CASE("exp factor counts") {
    const GeneratorSet gens =
        make_generator_set({oracles::su2_e1(), oracles::su2_e2()});
    const CompletedBasis basis = complete(gens);
    CHECK(exp_factor_count(0, basis) == 1);
    CHECK(exp_factor_count(1, basis) == 1);
    CHECK(exp_factor_count(2, basis) == 3); // 2*1 + 1

    long long total = 0;
    for (int i = 0; i < basis.n; ++i) total += exp_factor_count(i, basis);
    CHECK(total <= rk_schedule(basis.n, basis.m()).bound);
    CHECK_THROWS_AS(exp_factor_count(3, basis), Error);
}

TEST_CASE("ledger sums stay within the bound for su(3)") {
    const GeneratorSet gens =
        make_generator_set({oracles::su3_gen_a(), oracles::su3_gen_b()});
    const CompletedBasis basis = complete(gens);
    long long total = 0;
    for (int i = 0; i < basis.n; ++i) total += exp_factor_count(i, basis);
    CHECK(total <= rk_schedule(8, 2).bound);
}

TEST_CASE("completion is deterministic bit for bit") {
    const GeneratorSet gens =
        make_generator_set({oracles::su3_gen_a(), oracles::su3_gen_b()});
    const CompletedBasis a = complete(gens);
    const CompletedBasis b = complete(gens);
    REQUIRE(a.extended.size() == b.extended.size());
    CHECK(a.achieved_r == b.achieved_r);
    for (size_t i = 0; i < a.extended.size(); ++i) {
        CHECK((a.extended[i].element.mat - b.extended[i].element.mat).norm() == 0.0);
        CHECK(a.extended[i].word.core_index == b.extended[i].word.core_index);
        REQUIRE(a.extended[i].word.factors.size() == b.extended[i].word.factors.size());
        for (size_t j = 0; j < a.extended[i].word.factors.size(); ++j) {
            CHECK(a.extended[i].word.factors[j].generator ==
                  b.extended[i].word.factors[j].generator);
            CHECK(a.extended[i].word.factors[j].time == b.extended[i].word.factors[j].time);
        }
    }
}

TEST_CASE("stuck completion reports the best score") {
    // Force failure with an absurd acceptance threshold.
    const GeneratorSet gens =
        make_generator_set({oracles::su2_e1(), oracles::su2_e2()});
    CompletionConfig cfg;
    cfg.accept_score = 2.0; // relative scores cannot exceed 1
    try {
        complete_basis(gens, bracket_closure(gens), cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::stuck_no_independent_conjugate);
        CHECK(e.value() > 0.0);
        CHECK(e.value() <= 1.0 + 1e-12);
    }
}

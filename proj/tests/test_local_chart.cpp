#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "liegen/global_synthesis.hpp"
#include "liegen/local_chart.hpp"
#include "oracles.hpp"

using namespace liegen;

namespace {

CompletedBasis su2_basis() {
    const GeneratorSet gens =
        make_generator_set({oracles::su2_e1(), oracles::su2_e2()}, {"e1", "e2"});
    return complete_basis(gens, bracket_closure(gens));
}

CompletedBasis su3_basis() {
    const GeneratorSet gens =
        make_generator_set({oracles::su3_gen_a(), oracles::su3_gen_b()});
    return complete_basis(gens, bracket_closure(gens));
}

/// Random target guaranteed inside the principal-log ball of radius `s`.
GroupElement small_target(const CompletedBasis& basis, Rng& rng, double s) {
    AlgebraElement x = basis.generators.structure == Structure::real_antisymmetric
                           ? oracles::random_so(basis.generators.dim, rng)
                           : oracles::random_su(basis.generators.dim, rng);
    x.mat *= s / std::max(x.norm(), 1e-12);
    return expm(x);
}

} // namespace

TEST_CASE("chart forward basics") {
    const CompletedBasis basis = su2_basis();
    const RealVector zero = RealVector::Zero(3);
    CHECK((chart_forward(zero, basis).mat - Matrix::Identity(2, 2)).norm() < 1e-15);

    RealVector axis = RealVector::Zero(3);
    axis(0) = 0.37;
    const Matrix direct = expm(0.37 * basis.element(0).mat);
    CHECK((chart_forward(axis, basis).mat - direct).norm() < 1e-14);

    CHECK(chart_forward(zero, basis).group == GroupKind::special_unitary);
}

TEST_CASE("chart solve at the identity") {
    const CompletedBasis basis = su2_basis();
    const GroupElement eye{Matrix::Identity(2, 2), GroupKind::special_unitary};
    const ChartCoordinates coords = chart_solve(eye, basis);
    CHECK(coords.times.norm() < 1e-12);
    CHECK(coords.residual < 1e-12);
    CHECK(coords.iterations <= 1);
}

TEST_CASE("chart solve recovers a coordinate axis point") {
    const CompletedBasis basis = su2_basis();
    const GroupElement target = expm(AlgebraElement{0.05 * basis.element(2).mat,
                                                    basis.generators.structure});
    const ChartCoordinates coords = chart_solve(target, basis);
    CHECK(coords.residual <= 1e-10);
    CHECK(std::abs(coords.times(2) - 0.05) < 1e-9);
    CHECK(std::abs(coords.times(0)) < 1e-9);
    CHECK(std::abs(coords.times(1)) < 1e-9);
}

TEST_CASE("chart solve converges on random small targets") {
    const CompletedBasis basis = su2_basis();
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const GroupElement target = small_target(basis, rng, 0.2);
        const ChartCoordinates coords = chart_solve(target, basis);
        CHECK(coords.residual <= 1e-10);
        CHECK(coords.iterations <= 12);
        // Forward evaluation confirms the residual claim.
        CHECK((chart_forward(coords.times, basis).mat - target.mat).norm() <=
              coords.residual + 1e-13);
    }
}

TEST_CASE("chart solve converges on su(3) targets") {
    const CompletedBasis basis = su3_basis();
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const GroupElement target = small_target(basis, rng, 0.2);
        const ChartCoordinates coords = chart_solve(target, basis);
        CHECK(coords.residual <= 1e-10);
        CHECK(coords.iterations <= 20);
    }
}

TEST_CASE("targets outside the chart radius are refused") {
    const CompletedBasis basis = su2_basis();
    // -I sits at the SU(2) diameter, far outside the chart ball.
    Matrix far = -Matrix::Identity(2, 2);
    const GroupElement target{far, GroupKind::special_unitary};
    try {
        chart_solve(target, basis);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_convergence);
        CHECK(e.value() > SolverConfig{}.chart_radius);
    }
}

TEST_CASE("analytic Jacobian matches finite differences") {
    const CompletedBasis basis = su3_basis();
    const int n = basis.n;
    Rng rng(44);
    const double fd_step = 1e-5;
    for (int point = 0; point < 20; ++point) {
        RealVector t(n);
        for (int i = 0; i < n; ++i) t(i) = rng.uniform(-0.2, 0.2);

        // Analytic: column j = vectorized Ad_{P_{j-1}}(X_j) where P_j is the
        // left prefix product, matching dF/dt_j * F^{-1}.
        const GroupKind kind = natural_group_kind(basis.generators);
        Matrix prefix = Matrix::Identity(3, 3);
        RealMatrix analytic(2 * 9, n);
        std::vector<Matrix> prefixes;
        for (int j = 0; j < n; ++j) {
            prefixes.push_back(prefix);
            analytic.col(j) = real_vectorize(
                adjoint_conjugate(GroupElement{prefix, kind}, basis.element(j)).mat);
            prefix = prefix * expm(t(j) * basis.element(j).mat);
        }
        const Matrix f_inv = group_inverse(GroupElement{prefix, kind});

        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            RealVector tp = t, tm = t;
            tp(j) += fd_step;
            tm(j) -= fd_step;
            const Matrix fd = (chart_forward(tp, basis).mat -
                               chart_forward(tm, basis).mat) /
                              (2.0 * fd_step);
            const RealVector fd_col = real_vectorize((fd * f_inv).eval());
            const double rel = (fd_col - analytic.col(j)).norm() /
                               std::max(1.0, analytic.col(j).norm());
            worst = std::max(worst, rel);
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("substitution produces bounded words that replay") {
    const CompletedBasis basis = su2_basis();
    const long long bound = rk_schedule(3, 2).bound; // 5
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        RealVector t(3);
        for (int i = 0; i < 3; ++i) t(i) = rng.uniform(-0.3, 0.3);
        const ChartCoordinates coords{t, 0.0, 0};
        const GeneratorWord word = substitute_conjugations(coords, basis);
        CHECK(word.meta.length <= bound);
        CHECK(word.meta.bound_used == bound);
        const GroupElement replayed = replay(word, basis.generators);
        const GroupElement direct = chart_forward(t, basis);
        CHECK(group_distance(replayed, direct) < 1e-9);
    }
}

TEST_CASE("substitution prunes zero coordinates") {
    const CompletedBasis basis = su2_basis();
    const ChartCoordinates zero{RealVector::Zero(3), 0.0, 0};
    const GeneratorWord empty = substitute_conjugations(zero, basis);
    CHECK(empty.letters.empty());
    CHECK(empty.meta.length == 0);
    CHECK(empty.meta.product_error < 3 * 1e-12 * 2.0);

    // Only original-generator coordinates set: no conjugator blocks appear.
    RealVector t = RealVector::Zero(3);
    t(0) = 0.2;
    t(1) = -0.1;
    const GeneratorWord plain = substitute_conjugations({t, 0.0, 0}, basis);
    CHECK(plain.meta.length == 2);
    for (const WordLetter& l : plain.letters) CHECK(l.generator < 2);
}

TEST_CASE("substituted extension blocks carry the conjugation structure") {
    const CompletedBasis basis = su2_basis();
    RealVector t = RealVector::Zero(3);
    t(2) = 0.25; // only the extension coordinate
    const GeneratorWord word = substitute_conjugations({t, 0.0, 0}, basis);
    // One conjugator letter, the core letter, and the reversed conjugator.
    REQUIRE(word.meta.length == 3);
    CHECK(word.letters[0].generator == word.letters[2].generator);
    CHECK(word.letters[0].time == -word.letters[2].time);
    CHECK(word.letters[1].time == 0.25);
}

#include "liegen/nonneg_lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace liegen {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Eigenphases h_j of a skew-Hermitian X (eigenvalues of the Hermitian iX),
/// giving the exact flow distance
///   ||expm(sX) - expm(tX)||_F^2 = sum_j 4 sin^2((s - t) h_j / 2).
RealVector eigenphases(const AlgebraElement& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(
        (Complex(0.0, 1.0) * x.mat).eval(), Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

double flow_distance(const RealVector& phases, double ds) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < phases.size(); ++j) {
        const double s = std::sin(0.5 * ds * phases(j));
        sum += 4.0 * s * s;
    }
    return std::sqrt(sum);
}

/// Positive real gcd by the Euclidean algorithm with a symmetric remainder,
/// stopping at eps. Returns 0 when the data is consistent with "no common
/// divisor above eps".
double real_gcd(const std::vector<double>& values, double eps) {
    double g = 0.0;
    for (double v : values) {
        double a = std::max(g, v), b = std::min(g, v);
        while (b > eps) {
            double r = std::fmod(a, b);
            if (r > 0.5 * b) r = b - r;
            a = b;
            b = r;
        }
        g = a;
    }
    return g;
}

} // namespace

ReverseApprox reverse_time_approx(const AlgebraElement& x, double t, double tol,
                                  const RecurrenceConfig& cfg) {
    if (!(tol > 0.0))
        throw Error(ErrorKind::invalid_dims, "tolerance must be positive", tol);
    if (x.structure == Structure::general)
        throw Error(ErrorKind::invalid_dims,
                    "reverse-time search needs a compact one-parameter subgroup");
    if (t >= 0.0) return ReverseApprox{t, 0.0, 0};

    const RealVector phases = eigenphases(x);
    const double h_max = phases.cwiseAbs().maxCoeff();
    if (h_max == 0.0) return ReverseApprox{0.0, 0.0, 0}; // X = 0 flows nowhere

    const double t_horizon = cfg.t_max_factor * (2.0 * kPi / h_max);
    long long evals = 0;

    const auto measured = [&](double t_pos) {
        const Matrix forward = expm(t_pos * x.mat);
        const Matrix backward = expm(t * x.mat);
        return (forward - backward).norm();
    };

    // Commensurate spectrum: a common phase divisor g gives the exact period
    // T = 2 pi / g, and the backward flow is the forward flow at t mod T.
    std::vector<double> abs_phases;
    for (Eigen::Index j = 0; j < phases.size(); ++j)
        if (std::abs(phases(j)) > cfg.commensurate_tol * h_max)
            abs_phases.push_back(std::abs(phases(j)));
    const double g = real_gcd(abs_phases, cfg.commensurate_tol * h_max);
    if (g > 0.0) {
        const double period = 2.0 * kPi / g;
        ++evals;
        if (period <= t_horizon && flow_distance(phases, period) <= 1e-10) {
            double t_pos = t - period * std::floor(t / period);
            t_pos = std::max(0.0, t_pos);
            const double err = measured(t_pos);
            if (err <= std::min(tol, 1e-10))
                return ReverseApprox{t_pos, err, evals};
        }
    }

    // Incommensurate (or failed shortcut): Lipschitz grid over the horizon,
    // then golden-section polish of the winning cell. The grid step makes a
    // miss of the true minimizer cost at most ||X||_F * step / 2.
    const double step = tol / (2.0 * h_max);
    double best_s = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
    for (double s = 0.0; s <= t_horizon && evals < cfg.max_evals; s += step) {
        const double f = flow_distance(phases, s - t);
        ++evals;
        if (f < best_f) {
            best_f = f;
            best_s = s;
        }
        if (f <= 0.9 * tol) break; // polish the cell, keep slack for roundoff
    }

    // Golden-section refinement on [best_s - step, best_s + step].
    {
        const double inv_phi = 0.6180339887498949;
        double lo = std::max(0.0, best_s - step);
        double hi = std::min(t_horizon, best_s + step);
        double c = hi - inv_phi * (hi - lo);
        double d = lo + inv_phi * (hi - lo);
        double fc = flow_distance(phases, c - t);
        double fd = flow_distance(phases, d - t);
        evals += 2;
        for (int i = 0; i < 80 && hi - lo > 1e-15 * std::max(1.0, best_s); ++i) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = flow_distance(phases, c - t);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = flow_distance(phases, d - t);
            }
            ++evals;
        }
        const double mid = 0.5 * (lo + hi);
        const double fmid = flow_distance(phases, mid - t);
        ++evals;
        if (fmid < best_f) {
            best_f = fmid;
            best_s = mid;
        }
    }

    const double err = measured(std::max(0.0, best_s));
    if (err <= tol) return ReverseApprox{std::max(0.0, best_s), err, evals};
    throw Error(ErrorKind::budget_exhausted,
                "no forward time within tolerance inside the search horizon", err);
}

NonnegWord lift_word_nonneg(const GeneratorWord& word, const GeneratorSet& gens,
                            double per_factor_tol, const RecurrenceConfig& cfg) {
    NonnegWord out;
    out.letters = word.letters;
    out.original_length = static_cast<long long>(word.letters.size());

    std::map<std::pair<int, double>, ReverseApprox> memo;
    for (size_t i = 0; i < out.letters.size(); ++i) {
        WordLetter& letter = out.letters[i];
        if (letter.generator < 0 || letter.generator >= gens.count())
            throw Error(ErrorKind::index_out_of_range, "word letter generator index",
                        0.0, static_cast<long>(i));
        if (letter.time >= 0.0) continue;

        const std::pair<int, double> key{letter.generator, letter.time};
        auto found = memo.find(key);
        if (found == memo.end()) {
            try {
                const ReverseApprox ra = reverse_time_approx(
                    gens.elements[static_cast<size_t>(letter.generator)], letter.time,
                    per_factor_tol, cfg);
                found = memo.emplace(key, ra).first;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::budget_exhausted)
                    throw Error(ErrorKind::budget_exhausted, e.what(), e.value(),
                                static_cast<long>(i));
                throw;
            }
        }
        letter.time = found->second.t_pos;
        out.lift_error += found->second.achieved_error;
    }
    return out;
}

NonnegWord nonneg_synthesize(const GroupElement& target, const CoverNet& net,
                             const CompletedBasis& basis, double per_factor_tol,
                             const SolverConfig& solver_cfg,
                             const RecurrenceConfig& rec_cfg) {
    // lift_error stays the lift-vs-original bound; the total error against
    // the target is synth.target_error + lift_error by the additive
    // composition of unitary perturbations.
    const SynthesisResult synth = synthesize(target, net, basis, solver_cfg);
    return lift_word_nonneg(synth.word, basis.generators, per_factor_tol, rec_cfg);
}

} // namespace liegen

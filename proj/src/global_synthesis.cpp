#include "liegen/global_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace liegen {

GroupElement replay(const std::vector<WordLetter>& letters, const GeneratorSet& gens) {
    Matrix prod = Matrix::Identity(gens.dim, gens.dim);
    for (size_t i = 0; i < letters.size(); ++i) {
        const WordLetter& l = letters[i];
        if (l.generator < 0 || l.generator >= gens.count())
            throw Error(ErrorKind::index_out_of_range, "word letter generator index",
                        0.0, static_cast<long>(i));
        prod = prod * expm(l.time * gens.elements[static_cast<size_t>(l.generator)].mat);
    }
    return GroupElement{std::move(prod), natural_group_kind(gens)};
}

GroupElement replay(const GeneratorWord& word, const GeneratorSet& gens) {
    return replay(word.letters, gens);
}

GroupElement haar_random(GroupKind kind, int dim, Rng& rng) {
    if (dim < 1) throw Error(ErrorKind::invalid_dims, "dimension must be positive");
    switch (kind) {
        case GroupKind::unitary:
        case GroupKind::special_unitary: {
            Matrix g(dim, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
            Eigen::HouseholderQR<Matrix> qr(g);
            Matrix q = qr.householderQ();
            const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
            // Fixing the R diagonal phases makes the factorization unique,
            // which is what turns QR of a Gaussian into exact Haar.
            for (int j = 0; j < dim; ++j) {
                const Complex rjj = r(j, j);
                const double a = std::abs(rjj);
                q.col(j) *= (a > 1e-300) ? rjj / a : Complex(1.0, 0.0);
            }
            if (kind == GroupKind::special_unitary) {
                const double phase = std::arg(q.determinant());
                q *= std::polar(1.0, -phase / static_cast<double>(dim));
            }
            return GroupElement{std::move(q), kind};
        }
        case GroupKind::special_orthogonal: {
            RealMatrix g(dim, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i) g(i, j) = rng.normal();
            Eigen::HouseholderQR<RealMatrix> qr(g);
            RealMatrix q = qr.householderQ();
            const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < dim; ++j)
                if (r(j, j) < 0.0) q.col(j) = -q.col(j);
            // Reflecting one column carries the det = -1 component of the
            // orthogonal group onto SO(dim) without disturbing the measure.
            if (q.determinant() < 0.0) q.col(0) = -q.col(0);
            return GroupElement{q.cast<Complex>(), kind};
        }
        case GroupKind::general_linear_component:
            throw Error(ErrorKind::invalid_dims,
                        "no invariant sampler for a noncompact group");
    }
    throw Error(ErrorKind::invalid_dims, "unknown group kind");
}

CoverNet build_net(const CompletedBasis& basis, double radius, const NetConfig& cfg) {
    if (!(radius > 0.0))
        throw Error(ErrorKind::invalid_dims, "net radius must be positive", radius);
    const GeneratorSet& gens = basis.generators;
    const GroupKind kind = natural_group_kind(gens);
    if (kind == GroupKind::general_linear_component)
        throw Error(ErrorKind::invalid_dims, "net construction needs a compact group");
    const int d = gens.dim;
    const int m = gens.count();

    Rng rng(cfg.seed);
    CoverNet net;
    net.radius = radius;
    net.seed = cfg.seed;

    // The identity (empty word) is always the first point, so targets near I
    // resolve with a pure chart word.
    net.points.push_back(NetPoint{GroupElement{Matrix::Identity(d, d), kind},
                                  GeneratorWord{{}, WordMeta{0, 0, 0.0}}});

    int stall = 0;
    while (stall < cfg.stall_count &&
           static_cast<int>(net.points.size()) < cfg.max_points) {
        GeneratorWord word;
        word.letters.reserve(static_cast<size_t>(cfg.walk_length));
        for (int i = 0; i < cfg.walk_length; ++i) {
            const int g = rng.uniform_int(0, m - 1);
            const double t = rng.uniform(-cfg.t_max, cfg.t_max);
            word.letters.push_back(WordLetter{g, t});
        }
        word.meta.length = cfg.walk_length;
        GroupElement candidate = replay(word, gens);

        double min_dist = std::numeric_limits<double>::infinity();
        for (const NetPoint& p : net.points)
            min_dist = std::min(min_dist, group_distance(candidate, p.element));
        if (min_dist > radius) {
            net.points.push_back(NetPoint{std::move(candidate), std::move(word)});
            stall = 0;
        } else {
            ++stall;
        }
    }

    net.coverage.samples_tested = cfg.validation_samples;
    net.coverage.max_gap_observed = 0.0;
    for (int s = 0; s < cfg.validation_samples; ++s) {
        const GroupElement sample = haar_random(kind, d, rng);
        double min_dist = std::numeric_limits<double>::infinity();
        for (const NetPoint& p : net.points)
            min_dist = std::min(min_dist, group_distance(sample, p.element));
        net.coverage.max_gap_observed = std::max(net.coverage.max_gap_observed, min_dist);
    }
    net.coverage.covered = net.coverage.max_gap_observed <= radius;
    return net;
}

SynthesisResult synthesize(const GroupElement& target, const CoverNet& net,
                           const CompletedBasis& basis, const SolverConfig& cfg) {
    if (net.points.empty()) throw Error(ErrorKind::empty_input, "net has no points");
    const GeneratorSet& gens = basis.generators;
    if (target.dim() != gens.dim)
        throw Error(ErrorKind::dim_mismatch, "target dimension mismatch");
    const GroupKind kind = natural_group_kind(gens);
    const Matrix eye = Matrix::Identity(gens.dim, gens.dim);

    // Rank net points by the residual each would leave for the chart.
    std::vector<std::pair<double, int>> order;
    order.reserve(net.points.size());
    for (size_t i = 0; i < net.points.size(); ++i) {
        const Matrix residual = target.mat * group_inverse(net.points[i].element);
        order.emplace_back((residual - eye).norm(), static_cast<int>(i));
    }
    std::sort(order.begin(), order.end());

    const int attempts = std::min<int>(3, static_cast<int>(order.size()));
    double best_residual = order.empty() ? 0.0 : order.front().first;
    std::string last_failure = "no net point leaves a solvable residual";

    for (int a = 0; a < attempts; ++a) {
        const int idx = order[static_cast<size_t>(a)].second;
        const NetPoint& point = net.points[static_cast<size_t>(idx)];
        const GroupElement residual{target.mat * group_inverse(point.element), kind};
        try {
            const ChartCoordinates coords = chart_solve(residual, basis, cfg);
            const GeneratorWord chart_word = substitute_conjugations(coords, basis, cfg);

            SynthesisResult result;
            result.word.letters = chart_word.letters;
            result.word.letters.insert(result.word.letters.end(),
                                       point.word.letters.begin(),
                                       point.word.letters.end());
            result.word.meta.length = static_cast<long long>(result.word.letters.size());
            result.word.meta.bound_used = chart_word.meta.bound_used;
            result.word.meta.product_error = coords.residual +
                                             chart_word.meta.product_error +
                                             point.word.meta.product_error;
            result.net_point_index = idx;
            result.chart_word_length = chart_word.meta.length;
            result.target_error = group_distance(replay(result.word, gens), target);
            if (result.target_error > cfg.final_tol_total) {
                last_failure = "replayed word misses the target tolerance";
                best_residual = result.target_error;
                continue;
            }
            return result;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_convergence && e.kind() != ErrorKind::branch_cut)
                throw;
            last_failure = e.what();
            best_residual = e.value();
        }
    }
    throw Error(ErrorKind::no_convergence, last_failure, best_residual);
}

} // namespace liegen

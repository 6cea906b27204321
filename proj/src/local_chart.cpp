#include "liegen/local_chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liegen {

namespace {

/// Prefix products P_j = expm(t_1 X_1) ... expm(t_j X_j), with P_0 = I.
std::vector<Matrix> prefix_products(const RealVector& times, const CompletedBasis& basis) {
    const int d = basis.generators.dim;
    std::vector<Matrix> prefixes;
    prefixes.reserve(static_cast<size_t>(basis.n) + 1);
    prefixes.push_back(Matrix::Identity(d, d));
    for (int i = 0; i < basis.n; ++i)
        prefixes.push_back(prefixes.back() * expm(times(i) * basis.element(i).mat));
    return prefixes;
}

} // namespace

GroupElement chart_forward(const RealVector& times, const CompletedBasis& basis) {
    if (times.size() != basis.n)
        throw Error(ErrorKind::dim_mismatch, "chart needs one time per basis element",
                    0.0, times.size());
    return GroupElement{prefix_products(times, basis).back(),
                        natural_group_kind(basis.generators)};
}

ChartCoordinates chart_solve(const GroupElement& target, const CompletedBasis& basis,
                             const SolverConfig& cfg) {
    const int n = basis.n;
    const int d = basis.generators.dim;
    if (target.dim() != d)
        throw Error(ErrorKind::dim_mismatch, "target dimension mismatch");
    const GroupKind kind = natural_group_kind(basis.generators);

    const Matrix eye = Matrix::Identity(d, d);
    const double dist_to_identity = (target.mat - eye).norm();
    if (dist_to_identity > cfg.chart_radius)
        throw Error(ErrorKind::no_convergence, "target outside the chart radius",
                    dist_to_identity);

    RealVector t = RealVector::Zero(n);
    double residual = dist_to_identity; // F(0) = I

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        if (residual <= cfg.final_tol) return ChartCoordinates{t, residual, iter};

        const std::vector<Matrix> prefixes = prefix_products(t, basis);
        const Matrix& f = prefixes.back();
        const GroupElement f_elem{f, kind};

        // Multiplicative residual on the right: R = target * F(t)^{-1}.
        const GroupElement r_elem{target.mat * group_inverse(f_elem), kind};
        const AlgebraElement log_r = logm_principal(r_elem);

        // dF/dt_j * F^{-1} = Ad_{P_{j-1}}(X_j); solve sum dt_j A_j = log R
        // as a real least-squares system over the vectorized algebra.
        RealMatrix jac(2 * d * d, n);
        for (int j = 0; j < n; ++j) {
            const GroupElement p{prefixes[static_cast<size_t>(j)], kind};
            jac.col(j) = real_vectorize(adjoint_conjugate(p, basis.element(j)).mat);
        }
        Eigen::JacobiSVD<RealMatrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin <= 0.0 || smax / smin > cfg.max_condition)
            throw Error(ErrorKind::no_convergence, "chart Jacobian is ill-conditioned",
                        smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
        const RealVector dt = svd.solve(real_vectorize(log_r.mat));

        // Damped update: halve the step until the residual decreases.
        double alpha = 1.0;
        bool stepped = false;
        for (int halvings = 0; halvings < 30; ++halvings, alpha *= 0.5) {
            const RealVector t_try = t + alpha * dt;
            const double res_try =
                (prefix_products(t_try, basis).back() - target.mat).norm();
            if (res_try < residual) {
                t = t_try;
                residual = res_try;
                stepped = true;
                break;
            }
        }
        if (!stepped)
            throw Error(ErrorKind::no_convergence,
                        "chart residual stalled under full damping", residual);
    }
    if (residual <= cfg.final_tol) return ChartCoordinates{t, residual, cfg.max_iters};
    throw Error(ErrorKind::no_convergence, "chart solve ran out of iterations", residual);
}

GeneratorWord substitute_conjugations(const ChartCoordinates& coords,
                                      const CompletedBasis& basis,
                                      const SolverConfig& cfg) {
    if (coords.times.size() != basis.n)
        throw Error(ErrorKind::dim_mismatch, "coordinate count mismatch", 0.0,
                    coords.times.size());
    const int m = basis.m();

    GeneratorWord word;
    double product_error = 0.0;
    for (int i = 0; i < basis.n; ++i) {
        const double ti = coords.times(i);
        if (std::abs(ti) < cfg.prune_tol) {
            // Dropping the whole factor expm(ti X_i) perturbs the product by
            // at most |ti| ||X_i||_F to first order; at prune scale the
            // higher-order part is far below double precision.
            product_error += std::abs(ti) * basis.element(i).norm();
            continue;
        }
        if (i < m) {
            word.letters.push_back(WordLetter{i, ti});
        } else {
            const std::vector<WordLetter> conj = expand_word(i, basis);
            word.letters.insert(word.letters.end(), conj.begin(), conj.end());
            word.letters.push_back(WordLetter{
                basis.extended[static_cast<size_t>(i - m)].word.core_index, ti});
            for (auto it = conj.rbegin(); it != conj.rend(); ++it)
                word.letters.push_back(WordLetter{it->generator, -it->time});
        }
    }

    word.meta.length = static_cast<long long>(word.letters.size());
    word.meta.bound_used = rk_schedule(basis.n, m).bound;
    word.meta.product_error = product_error;
    if (word.meta.length > word.meta.bound_used)
        throw Error(ErrorKind::invalid_dims, "substituted word exceeds the factor bound",
                    static_cast<double>(word.meta.length));
    return word;
}

} // namespace liegen

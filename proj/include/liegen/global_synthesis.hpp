#pragma once

#include "liegen/local_chart.hpp"
#include "liegen/rng.hpp"

namespace liegen {

struct NetPoint {
    GroupElement element;
    GeneratorWord word;
};

struct CoverageStats {
    long long samples_tested = 0;
    double max_gap_observed = 0.0;
    bool covered = false;
};

/// Finite set of group elements with known generator words such that every
/// group element lies within `radius` of some point (validated statistically
/// on Haar samples, not proved).
struct CoverNet {
    std::vector<NetPoint> points;
    double radius = 0.0;
    CoverageStats coverage;
    uint64_t seed = 0;
};

struct NetConfig {
    int walk_length = 6;        // letters per random candidate word
    double t_max = 3.0;         // candidate times drawn from [-t_max, t_max]
    int stall_count = 500;      // consecutive rejections that end the greedy phase
    int validation_samples = 2000;
    uint64_t seed = 0;
    int max_points = 20000;     // hard cap, guards against radius misconfiguration
};

/// Ordered product of generator exponentials; the verification oracle every
/// word in the library is checked against.
GroupElement replay(const GeneratorWord& word, const GeneratorSet& gens);
GroupElement replay(const std::vector<WordLetter>& letters, const GeneratorSet& gens);

/// Haar-distributed random element: QR of a Gaussian matrix with the R
/// diagonal phase fixed; determinant corrected for the special kinds.
GroupElement haar_random(GroupKind kind, int dim, Rng& rng);

/// Greedy packing net: stream random candidate words, insert a candidate
/// whenever it is farther than `radius` from every existing point, stop after
/// cfg.stall_count consecutive rejections, then validate coverage on fresh
/// Haar samples. The identity (empty word) is seeded as the first point.
/// Never throws for coverage; the flag rides in coverage.covered.
CoverNet build_net(const CompletedBasis& basis, double radius, const NetConfig& cfg = {});

struct SynthesisResult {
    GeneratorWord word;
    double target_error = 0.0;
    int net_point_index = -1;
    long long chart_word_length = 0;
};

/// Express target as (chart word for target * K_i^{-1}) ++ (word of K_i),
/// trying the three nearest net points before giving up.
/// Throws NoConvergence when no nearby net point leaves a solvable residual.
SynthesisResult synthesize(const GroupElement& target, const CoverNet& net,
                           const CompletedBasis& basis, const SolverConfig& cfg = {});

} // namespace liegen

#include "liegen/cli.hpp"

#include <chrono>
#include <ostream>

#include "CLI11.hpp"
#include "liegen/serialization.hpp"

namespace liegen {

namespace {

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::parse_error:
        case ErrorKind::invalid_dims:
        case ErrorKind::dim_mismatch:
        case ErrorKind::empty_input:
        case ErrorKind::non_finite:
        case ErrorKind::not_in_group:
        case ErrorKind::index_out_of_range:
            return 2;
        case ErrorKind::not_generating:
            return 3;
        case ErrorKind::no_convergence:
        case ErrorKind::branch_cut:
            return 4;
        case ErrorKind::coverage_not_reached:
            return 5;
        case ErrorKind::budget_exhausted:
            return 6;
        case ErrorKind::depth_exceeded:
        case ErrorKind::stuck_no_independent_conjugate:
            return 1;
    }
    return 1;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
}

struct ProblemBundle {
    ProblemFile file;
    GeneratorSet gens;
};

ProblemBundle load_bundle(const std::string& path) {
    ProblemBundle b{load_problem(path), {}};
    b.gens = to_generator_set(b.file);
    return b;
}

Json problem_summary(const std::string& path, const ProblemBundle& b) {
    Json j;
    j["file"] = path;
    j["dim"] = b.gens.dim;
    j["structure"] = structure_name(b.gens.structure);
    j["group"] = group_kind_name(natural_group_kind(b.gens));
    j["generator_count"] = b.gens.count();
    return j;
}

/// Shared by every command that needs the full pipeline up to a completed
/// basis. Throws Error; not_in_group style exits are mapped by the caller.
struct Pipeline {
    ProblemBundle problem;
    AlgebraBasis algebra;
    CompletedBasis basis;
};

Pipeline run_pipeline(const std::string& problem_path, const ClosureConfig& closure_cfg,
                      int expected_override) {
    Pipeline p{load_bundle(problem_path), {}, {}};
    p.algebra = bracket_closure(p.problem.gens, closure_cfg);
    const int expected = expected_override > 0 ? expected_override
                                               : p.problem.file.expected_algebra_dim;
    if (expected > 0 && p.algebra.dim_algebra != expected)
        throw Error(ErrorKind::not_generating,
                    "generators do not generate the expected algebra",
                    static_cast<double>(p.algebra.dim_algebra), expected);
    p.basis = complete_basis(p.problem.gens, p.algebra);
    return p;
}

// ---------------------------------------------------------------------------

struct ValidateOpts {
    std::string problem;
    double closure_tol = ClosureConfig{}.closure_tol;
    int max_depth = ClosureConfig{}.max_depth;
    int expected = -1;
};

int cmd_validate(const ValidateOpts& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const ProblemBundle b = load_bundle(o.problem);
    const ClosureConfig cfg{o.closure_tol, o.max_depth};
    const AlgebraBasis closure = bracket_closure(b.gens, cfg);
    const int expected = o.expected > 0 ? o.expected : b.file.expected_algebra_dim;

    Json report;
    report["command"] = "validate";
    report["problem"] = problem_summary(o.problem, b);
    report["config"] = Json{{"closure_tol", cfg.closure_tol}, {"max_depth", cfg.max_depth}};
    report["closure_dim"] = closure.dim_algebra;
    if (expected > 0) {
        report["expected_algebra_dim"] = expected;
        report["generating"] = closure.dim_algebra == expected;
    } else {
        report["expected_algebra_dim"] = nullptr;
        report["generating"] = nullptr;
    }
    report["elapsed_ms"] = elapsed_ms(start);
    out << canonical_dump(report);
    if (expected > 0 && closure.dim_algebra != expected) return 3;
    return 0;
}

struct BoundOpts {
    std::string problem;
    int n = -1;
    int m = -1;
};

int cmd_bound(const BoundOpts& o, std::ostream& out) {
    int n = o.n, m = o.m;
    Json report;
    report["command"] = "bound";
    if (!o.problem.empty()) {
        const ProblemBundle b = load_bundle(o.problem);
        const AlgebraBasis closure = bracket_closure(b.gens);
        n = closure.dim_algebra;
        m = b.gens.count();
        report["problem"] = problem_summary(o.problem, b);
    }
    if (n < 0 || m < 0)
        throw Error(ErrorKind::invalid_dims, "need --problem or both --n and --m");
    const RkSchedule schedule = rk_schedule(n, m);
    report["n"] = n;
    report["m"] = m;
    report["values"] = schedule.values;
    report["bound"] = schedule.bound;
    out << canonical_dump(report);
    return 0;
}

struct CompleteOpts {
    std::string problem;
    std::string out_path;
    int expected = -1;
};

int cmd_complete(const CompleteOpts& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const Pipeline p = run_pipeline(o.problem, {}, o.expected);
    const RkSchedule schedule = rk_schedule(p.basis.n, p.basis.m());

    Json report;
    report["command"] = "complete";
    report["problem"] = problem_summary(o.problem, p.problem);
    report["n"] = p.basis.n;
    report["m"] = p.basis.m();
    report["achieved_r"] = p.basis.achieved_r;
    report["schedule_r"] = schedule.values;
    report["bound"] = schedule.bound;
    report["basis"] = basis_to_json(p.basis);
    report["elapsed_ms"] = elapsed_ms(start);
    if (!o.out_path.empty()) write_text_file(o.out_path, canonical_dump(basis_to_json(p.basis)));
    out << canonical_dump(report);
    return 0;
}

struct NetOpts {
    std::string problem;
    std::string out_path;
    double radius = 0.4;
    NetConfig cfg;
    int expected = -1;
};

int cmd_net(const NetOpts& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const Pipeline p = run_pipeline(o.problem, {}, o.expected);
    const CoverNet net = build_net(p.basis, o.radius, o.cfg);
    const GroupKind kind = natural_group_kind(p.problem.gens);

    Json report;
    report["command"] = "net";
    report["problem"] = problem_summary(o.problem, p.problem);
    report["config"] = Json{{"radius", o.radius},
                            {"walk_length", o.cfg.walk_length},
                            {"t_max", o.cfg.t_max},
                            {"stall_count", o.cfg.stall_count},
                            {"validation_samples", o.cfg.validation_samples},
                            {"seed", o.cfg.seed},
                            {"max_points", o.cfg.max_points}};
    report["points"] = static_cast<long long>(net.points.size());
    report["coverage"] = Json{{"samples_tested", net.coverage.samples_tested},
                              {"max_gap_observed", net.coverage.max_gap_observed},
                              {"covered", net.coverage.covered}};
    report["elapsed_ms"] = elapsed_ms(start);
    if (!o.out_path.empty())
        write_text_file(o.out_path,
                        canonical_dump(net_to_json(net, o.cfg, kind, p.problem.gens.dim)));
    out << canonical_dump(report);
    return net.coverage.covered ? 0 : 5;
}

struct SynthesizeOpts {
    std::string problem;
    std::string target;
    std::string net_cache;
    std::string out_path;
    std::string nonneg_out_path;
    double radius = 0.4;
    double tol = SolverConfig{}.final_tol_total;
    bool nonneg = false;
    double per_factor_tol = 1e-8;
    NetConfig net_cfg;
    RecurrenceConfig rec_cfg;
    int expected = -1;
};

int cmd_synthesize(const SynthesizeOpts& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const Pipeline p = run_pipeline(o.problem, {}, o.expected);
    const GroupKind kind = natural_group_kind(p.problem.gens);

    SolverConfig solver_cfg;
    solver_cfg.final_tol_total = o.tol;

    // Net: reuse the cache when it parses, rebuild (and refresh the cache)
    // otherwise. A cache whose radius disagrees with the request is rebuilt.
    CoverNet net;
    bool from_cache = false;
    if (!o.net_cache.empty()) {
        try {
            net = load_net(o.net_cache, p.problem.gens);
            from_cache = net.radius == o.radius;
        } catch (const Error&) {
            from_cache = false;
        }
    }
    const auto net_start = std::chrono::steady_clock::now();
    if (!from_cache) {
        net = build_net(p.basis, o.radius, o.net_cfg);
        if (!o.net_cache.empty())
            write_text_file(o.net_cache, canonical_dump(net_to_json(
                                             net, o.net_cfg, kind, p.problem.gens.dim)));
    }
    const double net_ms = elapsed_ms(net_start);

    Json report;
    report["command"] = "synthesize";
    report["problem"] = problem_summary(o.problem, p.problem);
    report["target"] = o.target;
    report["config"] = Json{{"radius", o.radius},
                            {"tol", o.tol},
                            {"seed", o.net_cfg.seed},
                            {"nonneg", o.nonneg},
                            {"per_factor_tol", o.per_factor_tol}};
    report["net"] = Json{{"points", static_cast<long long>(net.points.size())},
                         {"radius", net.radius},
                         {"from_cache", from_cache},
                         {"covered", net.coverage.covered},
                         {"max_gap_observed", net.coverage.max_gap_observed}};
    if (!net.coverage.covered) {
        report["error"] = "net coverage not reached";
        out << canonical_dump(report);
        return 5;
    }

    const GroupElement target = make_group_element(load_target(o.target), kind);
    const SynthesisResult result = synthesize(target, net, p.basis, solver_cfg);

    long long max_net_word = 0;
    for (const NetPoint& point : net.points)
        max_net_word = std::max(max_net_word, point.word.meta.length);
    const RkSchedule schedule = rk_schedule(p.basis.n, p.basis.m());

    Json res;
    res["word_length"] = result.word.meta.length;
    res["chart_word_length"] = result.chart_word_length;
    res["net_point_index"] = result.net_point_index;
    res["target_error"] = result.target_error;
    res["bound"] = schedule.bound;
    res["max_net_word_length"] = max_net_word;
    res["uniform_length_bound"] = max_net_word + schedule.bound;
    res["within_uniform_bound"] = result.word.meta.length <= max_net_word + schedule.bound;
    report["result"] = std::move(res);
    report["word"] = word_to_json(result.word, result.target_error);
    if (!o.out_path.empty())
        write_text_file(o.out_path,
                        canonical_dump(word_to_json(result.word, result.target_error)));

    if (o.nonneg) {
        const NonnegWord lifted = lift_word_nonneg(result.word, p.problem.gens,
                                                   o.per_factor_tol, o.rec_cfg);
        const GroupElement lifted_replay = replay(lifted.letters, p.problem.gens);
        const double lifted_error = group_distance(lifted_replay, target);
        double min_time = 0.0;
        for (const WordLetter& l : lifted.letters) min_time = std::min(min_time, l.time);
        Json nn;
        nn["lift_error"] = lifted.lift_error;
        nn["total_error"] = lifted_error;
        nn["min_time"] = min_time;
        report["nonneg"] = std::move(nn);
        const Json file_json = nonneg_word_to_json(
            lifted, result.word.meta, result.target_error + lifted.lift_error);
        report["nonneg_word"] = file_json;
        if (!o.nonneg_out_path.empty())
            write_text_file(o.nonneg_out_path, canonical_dump(file_json));
    }

    report["timing_ms"] = Json{{"net", net_ms}, {"total", elapsed_ms(start)}};
    out << canonical_dump(report);
    return 0;
}

struct VerifyOpts {
    std::string word;
    std::string problem;
    std::string target;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
    const ProblemBundle b = load_bundle(o.problem);
    const ParsedWord pw = load_word(o.word);
    const GroupKind kind = natural_group_kind(b.gens);
    const GroupElement target = make_group_element(load_target(o.target), kind);

    const GroupElement replayed = replay(pw.word, b.gens);
    const double recomputed = group_distance(replayed, target);
    // 10% slack over the stated error, plus an absolute floor so that words
    // stated at machine precision are not rejected for roundoff noise.
    const bool pass = recomputed <= pw.stated_error * 1.1 + 1e-12;

    Json report;
    report["command"] = "verify";
    report["word_file"] = o.word;
    report["kind"] = pw.nonneg ? "nonneg_word" : "word";
    report["length"] = static_cast<long long>(pw.word.letters.size());
    report["stated_error"] = pw.stated_error;
    report["recomputed_error"] = recomputed;
    report["pass"] = pass;
    out << canonical_dump(report);
    return pass ? 0 : 7;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bounded-length generator words on compact matrix groups"};
    app.require_subcommand(1);

    ValidateOpts vo;
    CLI::App* validate = app.add_subcommand(
        "validate", "check that the generators generate the expected algebra");
    validate->add_option("--problem", vo.problem, "problem JSON file")->required();
    validate->add_option("--closure-tol", vo.closure_tol, "bracket closure growth tolerance");
    validate->add_option("--max-depth", vo.max_depth, "bracket closure sweep limit");
    validate->add_option("--expected-dim", vo.expected,
                         "override the file's expected_algebra_dim");

    BoundOpts bo;
    CLI::App* bound = app.add_subcommand("bound", "print the factor-count schedule and bound");
    bound->add_option("--problem", bo.problem, "derive n and m from a problem file");
    bound->add_option("--n", bo.n, "algebra dimension");
    bound->add_option("--m", bo.m, "generator count");

    CompleteOpts co;
    CLI::App* complete = app.add_subcommand(
        "complete", "extend the generators to a full basis by conjugation");
    complete->add_option("--problem", co.problem, "problem JSON file")->required();
    complete->add_option("--out", co.out_path, "write the completed basis JSON here");
    complete->add_option("--expected-dim", co.expected,
                         "override the file's expected_algebra_dim");

    NetOpts no;
    CLI::App* net = app.add_subcommand("net", "build and validate a covering net");
    net->add_option("--problem", no.problem, "problem JSON file")->required();
    net->add_option("--radius", no.radius, "covering radius");
    net->add_option("--out", no.out_path, "write the net cache JSON here");
    net->add_option("--seed", no.cfg.seed, "RNG seed");
    net->add_option("--walk-length", no.cfg.walk_length, "letters per candidate word");
    net->add_option("--t-max", no.cfg.t_max, "candidate time range half-width");
    net->add_option("--stall-count", no.cfg.stall_count,
                    "consecutive rejections ending the greedy phase");
    net->add_option("--validation-samples", no.cfg.validation_samples,
                    "Haar samples for coverage validation");
    net->add_option("--max-points", no.cfg.max_points, "hard cap on net size");
    net->add_option("--expected-dim", no.expected,
                    "override the file's expected_algebra_dim");

    SynthesizeOpts so;
    CLI::App* synth = app.add_subcommand(
        "synthesize", "express a target as a bounded product of generator exponentials");
    synth->add_option("--problem", so.problem, "problem JSON file")->required();
    synth->add_option("--target", so.target, "target matrix JSON file")->required();
    synth->add_option("--net-cache", so.net_cache, "net cache path (read, or written on rebuild)");
    synth->add_option("--out", so.out_path, "write the word JSON here");
    synth->add_option("--nonneg-out", so.nonneg_out_path,
                      "write the nonnegative-time word JSON here");
    synth->add_option("--radius", so.radius, "net covering radius");
    synth->add_option("--tol", so.tol, "total replay-error tolerance");
    synth->add_flag("--nonneg", so.nonneg, "also lift the word to nonnegative times");
    synth->add_option("--per-factor-tol", so.per_factor_tol,
                      "per-letter tolerance for the nonnegative lift");
    synth->add_option("--seed", so.net_cfg.seed, "RNG seed for the net build");
    synth->add_option("--walk-length", so.net_cfg.walk_length, "letters per net candidate");
    synth->add_option("--stall-count", so.net_cfg.stall_count,
                      "consecutive rejections ending the net's greedy phase");
    synth->add_option("--validation-samples", so.net_cfg.validation_samples,
                      "Haar samples for net validation");
    synth->add_option("--max-evals", so.rec_cfg.max_evals,
                      "search budget per lifted letter");
    synth->add_option("--t-max-factor", so.rec_cfg.t_max_factor,
                      "search horizon multiplier for the lift");
    synth->add_option("--expected-dim", so.expected,
                      "override the file's expected_algebra_dim");

    VerifyOpts ro;
    CLI::App* verify = app.add_subcommand(
        "verify", "independently replay a word file against its target");
    verify->add_option("--word", ro.word, "word JSON file")->required();
    verify->add_option("--problem", ro.problem, "problem JSON file")->required();
    verify->add_option("--target", ro.target, "target matrix JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(vo, out);
        if (bound->parsed()) return cmd_bound(bo, out);
        if (complete->parsed()) return cmd_complete(co, out);
        if (net->parsed()) return cmd_net(no, out);
        if (synth->parsed()) return cmd_synthesize(so, out);
        if (verify->parsed()) return cmd_verify(ro, out);
        err << "no command\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace liegen

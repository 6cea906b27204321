#pragma once

#include <string>

#include "json.hpp"
#include "liegen/nonneg_lift.hpp"

namespace liegen {

using Json = nlohmann::ordered_json;

/// Parsed problem description: the generator matrices plus their declared
/// structure. File indices are 1-based; conversion to the 0-based in-memory
/// convention happens in this layer and nowhere else.
struct ProblemFile {
    int dim = 0;
    Structure structure = Structure::general;
    std::vector<Matrix> generators;
    std::vector<std::string> labels;
    int expected_algebra_dim = -1; // -1 when the file omits it
};

/// All parse_* functions throw Error(parse_error) with a field-precise
/// message; load_* variants add file reading.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
GeneratorSet to_generator_set(const ProblemFile& pf, const Tolerances& tol = {});

/// Target files hold one matrix, optionally with "dim"/"group" echoes.
Matrix parse_target(const std::string& text);
Matrix load_target(const std::string& path);

/// Complex entries encode as [re, im]; matrices as row-major nested lists.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Word files. stated_error is the producer's total replay-vs-target claim,
/// which the verify command re-derives from scratch.
Json word_to_json(const GeneratorWord& word, double stated_error);
Json nonneg_word_to_json(const NonnegWord& word, const WordMeta& meta,
                         double stated_error);
struct ParsedWord {
    GeneratorWord word;
    double stated_error = 0.0;
    bool nonneg = false;
    double lift_error = 0.0;
    long long original_length = 0;
};
ParsedWord word_from_json(const Json& j);
ParsedWord load_word(const std::string& path);

/// Completed-basis cache files. Reload replays each stored conjugation word
/// against the generator set and cross-checks the stored matrix.
Json basis_to_json(const CompletedBasis& basis);
CompletedBasis basis_from_json(const Json& j, const GeneratorSet& gens);
CompletedBasis load_basis(const std::string& path, const GeneratorSet& gens);

/// Net cache files carry everything needed for exact reload: points with
/// their words, radius, seed, config echo, coverage stats.
Json net_to_json(const CoverNet& net, const NetConfig& cfg, GroupKind kind, int dim);
CoverNet net_from_json(const Json& j, const GeneratorSet& gens);
CoverNet load_net(const std::string& path, const GeneratorSet& gens);

/// Canonical text form: 2-space indent, insertion field order, doubles at 17
/// significant digits, integral doubles printed as integers, no negative
/// zero. parse(canonical_dump(x)) re-dumps byte-identically.
std::string canonical_dump(const Json& j);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace liegen

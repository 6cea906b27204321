#include "liegen/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "liegen/global_synthesis.hpp"

namespace liegen {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::parse_error, where + ": " + what);
}

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

long long integer_at(const Json& j, const std::string& where) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        fail(where, "expected an integer");
    return j.get<long long>();
}

std::string string_at(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object() || !j.contains(name)) fail(where, std::string("missing field '") + name + "'");
    return j.at(name);
}

Structure structure_from_name(const std::string& name, const std::string& where) {
    if (name == "skew_hermitian") return Structure::skew_hermitian;
    if (name == "real_antisymmetric") return Structure::real_antisymmetric;
    if (name == "general") return Structure::general;
    fail(where, "unknown structure '" + name + "'");
}

GroupKind group_from_name(const std::string& name, const std::string& where) {
    if (name == "unitary") return GroupKind::unitary;
    if (name == "special_unitary") return GroupKind::special_unitary;
    if (name == "special_orthogonal") return GroupKind::special_orthogonal;
    if (name == "general_linear_component") return GroupKind::general_linear_component;
    fail(where, "unknown group '" + name + "'");
}

Matrix matrix_from_json_at(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
    const size_t rows = j.size();
    Matrix m(static_cast<Eigen::Index>(rows), 0);
    for (size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        const std::string rwhere = where + "[" + std::to_string(r) + "]";
        if (!row.is_array()) fail(rwhere, "expected an array of entries");
        if (r == 0) {
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row.size()));
        } else if (row.size() != static_cast<size_t>(m.cols())) {
            fail(rwhere, "ragged row");
        }
        for (size_t c = 0; c < row.size(); ++c) {
            const Json& entry = row[c];
            const std::string ewhere = rwhere + "[" + std::to_string(c) + "]";
            if (!entry.is_array() || entry.size() != 2)
                fail(ewhere, "expected a [re, im] pair");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(number_at(entry[0], ewhere + "[0]"),
                        number_at(entry[1], ewhere + "[1]"));
        }
    }
    return m;
}

Json letters_to_json(const std::vector<WordLetter>& letters) {
    Json arr = Json::array();
    for (const WordLetter& l : letters)
        arr.push_back(Json{{"generator", l.generator + 1}, {"time", l.time}});
    return arr;
}

std::vector<WordLetter> letters_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of letters");
    std::vector<WordLetter> letters;
    letters.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string lwhere = where + "[" + std::to_string(i) + "]";
        const long long g = integer_at(field(j[i], "generator", lwhere), lwhere + ".generator");
        if (g < 1) fail(lwhere + ".generator", "indices are 1-based");
        const double t = number_at(field(j[i], "time", lwhere), lwhere + ".time");
        letters.push_back(WordLetter{static_cast<int>(g - 1), t});
    }
    return letters;
}

// --- canonical writer ------------------------------------------------------

void dump_value(const Json& j, std::string& out, int indent);

void dump_number(const Json& j, std::string& out) {
    if (j.is_number_integer()) {
        out += std::to_string(j.get<long long>());
        return;
    }
    if (j.is_number_unsigned()) {
        out += std::to_string(j.get<unsigned long long>());
        return;
    }
    double v = j.get<double>();
    if (!std::isfinite(v))
        throw Error(ErrorKind::parse_error, "cannot serialize a non-finite number");
    if (v == 0.0) v = 0.0; // drop the sign of -0 for stable bytes
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

bool contains_object(const Json& j) {
    if (j.is_object()) return true;
    if (j.is_array())
        for (const Json& e : j)
            if (contains_object(e)) return true;
    return false;
}

void dump_inline(const Json& j, std::string& out) {
    if (j.is_array()) {
        out += '[';
        bool first = true;
        for (const Json& e : j) {
            if (!first) out += ", ";
            first = false;
            dump_inline(e, out);
        }
        out += ']';
    } else {
        dump_value(j, out, 0); // scalars only reach here
    }
}

void dump_value(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += Json(it.key()).dump(); // proper string escaping
                out += ": ";
                dump_value(it.value(), out, indent + 1);
            }
            out += '\n';
            out += pad;
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (!contains_object(j)) {
                std::string flat;
                dump_inline(j, flat);
                if (flat.size() <= 100) {
                    out += flat;
                    return;
                }
            }
            out += "[\n";
            bool first = true;
            for (const Json& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_value(e, out, indent + 1);
            }
            out += '\n';
            out += pad;
            out += ']';
            return;
        }
        case Json::value_t::string:
            out += j.dump();
            return;
        case Json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case Json::value_t::null:
            out += "null";
            return;
        default:
            dump_number(j, out);
            return;
    }
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

} // namespace

std::string canonical_dump(const Json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += '\n';
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Complex& z = m(r, c);
            row.push_back(Json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) { return matrix_from_json_at(j, "matrix"); }

ProblemFile parse_problem(const std::string& text) {
    const Json j = parse_json(text);
    ProblemFile pf;
    pf.dim = static_cast<int>(integer_at(field(j, "dim", "problem"), "dim"));
    if (pf.dim < 1) fail("dim", "must be at least 1");
    pf.structure = structure_from_name(string_at(field(j, "structure", "problem"), "structure"),
                                       "structure");
    const Json& gens = field(j, "generators", "problem");
    if (!gens.is_array() || gens.empty()) fail("generators", "expected a nonempty array");
    for (size_t i = 0; i < gens.size(); ++i) {
        Matrix m = matrix_from_json_at(gens[i], "generators[" + std::to_string(i) + "]");
        if (m.rows() != pf.dim || m.cols() != pf.dim)
            fail("generators[" + std::to_string(i) + "]", "matrix does not match dim");
        pf.generators.push_back(std::move(m));
    }
    if (j.contains("labels")) {
        const Json& labels = j.at("labels");
        if (!labels.is_array()) fail("labels", "expected an array of strings");
        for (size_t i = 0; i < labels.size(); ++i)
            pf.labels.push_back(string_at(labels[i], "labels[" + std::to_string(i) + "]"));
        if (pf.labels.size() != pf.generators.size())
            fail("labels", "label count must match generator count");
    }
    if (j.contains("expected_algebra_dim")) {
        pf.expected_algebra_dim = static_cast<int>(
            integer_at(j.at("expected_algebra_dim"), "expected_algebra_dim"));
        if (pf.expected_algebra_dim < 1) fail("expected_algebra_dim", "must be at least 1");
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    return parse_problem(read_text_file(path));
}

GeneratorSet to_generator_set(const ProblemFile& pf, const Tolerances& tol) {
    std::vector<AlgebraElement> elements;
    elements.reserve(pf.generators.size());
    for (size_t i = 0; i < pf.generators.size(); ++i) {
        try {
            elements.push_back(make_algebra_element(pf.generators[i], pf.structure, tol));
        } catch (const Error& e) {
            throw Error(ErrorKind::parse_error,
                        "generators[" + std::to_string(i) + "]: " + e.what(), e.value());
        }
    }
    return make_generator_set(std::move(elements), pf.labels, tol);
}

Matrix parse_target(const std::string& text) {
    const Json j = parse_json(text);
    if (j.is_array()) return matrix_from_json_at(j, "target");
    return matrix_from_json_at(field(j, "matrix", "target"), "target.matrix");
}

Matrix load_target(const std::string& path) { return parse_target(read_text_file(path)); }

Json word_to_json(const GeneratorWord& word, double stated_error) {
    Json j;
    j["kind"] = "word";
    j["letters"] = letters_to_json(word.letters);
    j["meta"] = Json{{"length", word.meta.length},
                     {"bound_used", word.meta.bound_used},
                     {"product_error", word.meta.product_error},
                     {"stated_error", stated_error}};
    return j;
}

Json nonneg_word_to_json(const NonnegWord& word, const WordMeta& meta,
                         double stated_error) {
    Json j;
    j["kind"] = "nonneg_word";
    j["letters"] = letters_to_json(word.letters);
    j["meta"] = Json{{"length", static_cast<long long>(word.letters.size())},
                     {"bound_used", meta.bound_used},
                     {"product_error", meta.product_error},
                     {"stated_error", stated_error}};
    j["lift"] = Json{{"lift_error", word.lift_error},
                     {"original_length", word.original_length}};
    return j;
}

ParsedWord word_from_json(const Json& j) {
    ParsedWord pw;
    const std::string kind = string_at(field(j, "kind", "word file"), "kind");
    if (kind != "word" && kind != "nonneg_word")
        fail("kind", "expected 'word' or 'nonneg_word'");
    pw.nonneg = kind == "nonneg_word";
    pw.word.letters = letters_from_json(field(j, "letters", "word file"), "letters");
    const Json& meta = field(j, "meta", "word file");
    pw.word.meta.length = integer_at(field(meta, "length", "meta"), "meta.length");
    pw.word.meta.bound_used =
        integer_at(field(meta, "bound_used", "meta"), "meta.bound_used");
    pw.word.meta.product_error =
        number_at(field(meta, "product_error", "meta"), "meta.product_error");
    pw.stated_error = number_at(field(meta, "stated_error", "meta"), "meta.stated_error");
    if (pw.word.meta.length != static_cast<long long>(pw.word.letters.size()))
        fail("meta.length", "does not match the letter count");
    if (pw.nonneg) {
        const Json& lift = field(j, "lift", "word file");
        pw.lift_error = number_at(field(lift, "lift_error", "lift"), "lift.lift_error");
        pw.original_length =
            integer_at(field(lift, "original_length", "lift"), "lift.original_length");
        for (size_t i = 0; i < pw.word.letters.size(); ++i)
            if (pw.word.letters[i].time < 0.0)
                fail("letters[" + std::to_string(i) + "]",
                     "nonneg_word carries a negative time");
    }
    return pw;
}

ParsedWord load_word(const std::string& path) {
    return word_from_json(parse_json(read_text_file(path)));
}

Json basis_to_json(const CompletedBasis& basis) {
    Json j;
    j["kind"] = "completed_basis";
    j["dim"] = basis.generators.dim;
    j["structure"] = structure_name(basis.generators.structure);
    j["m"] = basis.m();
    j["n"] = basis.n;
    j["achieved_r"] = basis.achieved_r;
    Json ext = Json::array();
    for (const ExtendedElement& e : basis.extended) {
        Json ej;
        ej["core"] = e.word.core_index + 1;
        ej["factors"] = letters_to_json(e.word.factors);
        ej["matrix"] = matrix_to_json(e.element.mat);
        ext.push_back(std::move(ej));
    }
    j["extended"] = std::move(ext);
    return j;
}

CompletedBasis basis_from_json(const Json& j, const GeneratorSet& gens) {
    if (string_at(field(j, "kind", "basis file"), "kind") != "completed_basis")
        fail("kind", "expected 'completed_basis'");
    if (integer_at(field(j, "dim", "basis file"), "dim") != gens.dim)
        fail("dim", "basis dimension does not match the generator set");
    if (structure_from_name(string_at(field(j, "structure", "basis file"), "structure"),
                            "structure") != gens.structure)
        fail("structure", "basis structure does not match the generator set");
    if (integer_at(field(j, "m", "basis file"), "m") != gens.count())
        fail("m", "generator count does not match");

    CompletedBasis basis;
    basis.generators = gens;
    basis.n = static_cast<int>(integer_at(field(j, "n", "basis file"), "n"));
    const Json& rs = field(j, "achieved_r", "basis file");
    if (!rs.is_array()) fail("achieved_r", "expected an array");
    for (size_t i = 0; i < rs.size(); ++i)
        basis.achieved_r.push_back(integer_at(rs[i], "achieved_r[" + std::to_string(i) + "]"));

    const Json& ext = field(j, "extended", "basis file");
    if (!ext.is_array()) fail("extended", "expected an array");
    if (basis.n != gens.count() + static_cast<int>(ext.size()) ||
        ext.size() != rs.size())
        fail("extended", "entry count inconsistent with n and achieved_r");
    for (size_t i = 0; i < ext.size(); ++i) {
        const std::string where = "extended[" + std::to_string(i) + "]";
        ExtendedElement e;
        const long long core = integer_at(field(ext[i], "core", where), where + ".core");
        if (core < 1 || core > gens.count()) fail(where + ".core", "core index out of range");
        e.word.core_index = static_cast<int>(core - 1);
        e.word.factors = letters_from_json(field(ext[i], "factors", where), where + ".factors");
        if (static_cast<long long>(e.word.factors.size()) != basis.achieved_r[i])
            fail(where + ".factors", "factor count disagrees with achieved_r");
        Matrix m = matrix_from_json_at(field(ext[i], "matrix", where), where + ".matrix");
        if (m.rows() != gens.dim || m.cols() != gens.dim)
            fail(where + ".matrix", "matrix does not match dim");
        e.element = AlgebraElement{std::move(m), gens.structure};
        basis.extended.push_back(std::move(e));
    }
    // Replaying every stored word re-derives its element; expand_word throws
    // if the stored matrix drifted from its recipe.
    for (int i = gens.count(); i < basis.n; ++i) {
        try {
            expand_word(i, basis);
        } catch (const Error& e) {
            fail("extended[" + std::to_string(i - gens.count()) + "]", e.what());
        }
    }
    return basis;
}

CompletedBasis load_basis(const std::string& path, const GeneratorSet& gens) {
    return basis_from_json(parse_json(read_text_file(path)), gens);
}

Json net_to_json(const CoverNet& net, const NetConfig& cfg, GroupKind kind, int dim) {
    Json j;
    j["kind"] = "net";
    j["group"] = group_kind_name(kind);
    j["dim"] = dim;
    j["radius"] = net.radius;
    j["seed"] = net.seed;
    j["config"] = Json{{"walk_length", cfg.walk_length},
                       {"t_max", cfg.t_max},
                       {"stall_count", cfg.stall_count},
                       {"validation_samples", cfg.validation_samples},
                       {"max_points", cfg.max_points}};
    j["coverage"] = Json{{"samples_tested", net.coverage.samples_tested},
                         {"max_gap_observed", net.coverage.max_gap_observed},
                         {"covered", net.coverage.covered}};
    Json points = Json::array();
    for (const NetPoint& p : net.points) {
        Json pj;
        pj["letters"] = letters_to_json(p.word.letters);
        pj["product_error"] = p.word.meta.product_error;
        pj["matrix"] = matrix_to_json(p.element.mat);
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    return j;
}

CoverNet net_from_json(const Json& j, const GeneratorSet& gens) {
    if (string_at(field(j, "kind", "net file"), "kind") != "net")
        fail("kind", "expected 'net'");
    const GroupKind kind = group_from_name(string_at(field(j, "group", "net file"), "group"),
                                           "group");
    if (kind != natural_group_kind(gens))
        fail("group", "net group does not match the generator set");
    if (integer_at(field(j, "dim", "net file"), "dim") != gens.dim)
        fail("dim", "net dimension does not match the generator set");

    CoverNet net;
    net.radius = number_at(field(j, "radius", "net file"), "radius");
    net.seed = field(j, "seed", "net file").get<uint64_t>();
    const Json& cov = field(j, "coverage", "net file");
    net.coverage.samples_tested =
        integer_at(field(cov, "samples_tested", "coverage"), "coverage.samples_tested");
    net.coverage.max_gap_observed = number_at(field(cov, "max_gap_observed", "coverage"),
                                              "coverage.max_gap_observed");
    const Json& covered = field(cov, "covered", "coverage");
    if (!covered.is_boolean()) fail("coverage.covered", "expected a boolean");
    net.coverage.covered = covered.get<bool>();

    const Json& points = field(j, "points", "net file");
    if (!points.is_array() || points.empty()) fail("points", "expected a nonempty array");
    for (size_t i = 0; i < points.size(); ++i) {
        const std::string where = "points[" + std::to_string(i) + "]";
        NetPoint p;
        p.word.letters = letters_from_json(field(points[i], "letters", where),
                                           where + ".letters");
        p.word.meta.length = static_cast<long long>(p.word.letters.size());
        p.word.meta.product_error =
            number_at(field(points[i], "product_error", where), where + ".product_error");
        Matrix m = matrix_from_json_at(field(points[i], "matrix", where), where + ".matrix");
        if (m.rows() != gens.dim || m.cols() != gens.dim)
            fail(where + ".matrix", "matrix does not match dim");
        // Cache integrity: the stored matrix must be the word's replay.
        const GroupElement replayed = replay(p.word.letters, gens);
        if ((replayed.mat - m).norm() > 1e-9)
            fail(where, "stored matrix does not replay from its word");
        p.element = GroupElement{std::move(m), kind};
        net.points.push_back(std::move(p));
    }
    return net;
}

CoverNet load_net(const std::string& path, const GeneratorSet& gens) {
    return net_from_json(parse_json(read_text_file(path)), gens);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::parse_error, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::parse_error, "cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw Error(ErrorKind::parse_error, "cannot write '" + path + "'");
}

} // namespace liegen

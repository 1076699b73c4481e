#ifndef QHIER_IO_HPP
#define QHIER_IO_HPP

#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "groups.hpp"

namespace qhier {

using Json = nlohmann::ordered_json;

/// Decimal string with 17 significant digits: round-trips a double exactly.
inline std::string format_double17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// FNV-1a over raw bytes; digests identify check inputs in reports.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a_matrix(const Matrix& m, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex v = m(i, j);
            h = fnv1a(&v, sizeof(v), h);
        }
    return h;
}

inline std::string hex_digest(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// JSON (de)serialization. Complex numbers are [re, im] pairs; matrices are
// row-major with an explicit side, so files are self-describing.
// ---------------------------------------------------------------------------

inline Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return Json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

namespace detail {

inline const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object())
        throw IoError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw IoError(path + "." + key + ": missing required field");
    return *it;
}

inline double require_number(const Json& j, const std::string& path) {
    if (!j.is_number())
        throw IoError(path + ": expected a number");
    return j.get<double>();
}

inline long require_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw IoError(path + ": expected an integer");
    return j.get<long>();
}

} // namespace detail

inline Matrix matrix_from_json(const Json& j, const std::string& path) {
    const long dim = detail::require_integer(detail::require_field(j, "dim", path), path + ".dim");
    if (dim < 1) throw IoError(path + ".dim: must be >= 1");
    const Json& entries = detail::require_field(j, "entries", path);
    if (!entries.is_array() || long(entries.size()) != dim * dim)
        throw IoError(path + ".entries: expected " + std::to_string(dim * dim) +
                      " [re, im] pairs");
    Matrix m(dim, dim);
    for (long k = 0; k < dim * dim; ++k) {
        const Json& e = entries[k];
        const std::string epath = path + ".entries[" + std::to_string(k) + "]";
        if (!e.is_array() || e.size() != 2)
            throw IoError(epath + ": expected [re, im]");
        m(k / dim, k % dim) = Complex(detail::require_number(e[0], epath + "[0]"),
                                      detail::require_number(e[1], epath + "[1]"));
    }
    return m;
}

inline Json system_to_json(const SystemSpec& spec) {
    Json pots = Json::array();
    for (const auto& [k, phi] : spec.potentials)
        pots.push_back(Json{{"k", k}, {"matrix", matrix_to_json(phi)}});
    return Json{{"d", spec.d},
                {"hbar", spec.hbar},
                {"n_max", spec.n_max},
                {"dim_cap", spec.dim_cap},
                {"one_body", matrix_to_json(spec.one_body)},
                {"potentials", std::move(pots)}};
}

inline SystemSpec system_from_json(const Json& j, const std::string& path) {
    SystemSpec spec;
    spec.d = int(detail::require_integer(detail::require_field(j, "d", path), path + ".d"));
    spec.hbar = detail::require_number(detail::require_field(j, "hbar", path), path + ".hbar");
    spec.n_max =
        int(detail::require_integer(detail::require_field(j, "n_max", path), path + ".n_max"));
    if (j.contains("dim_cap"))
        spec.dim_cap = detail::require_integer(j["dim_cap"], path + ".dim_cap");
    spec.one_body = matrix_from_json(detail::require_field(j, "one_body", path), path + ".one_body");
    if (j.contains("potentials")) {
        const Json& pots = j["potentials"];
        if (!pots.is_array()) throw IoError(path + ".potentials: expected an array");
        for (std::size_t i = 0; i < pots.size(); ++i) {
            const std::string ppath = path + ".potentials[" + std::to_string(i) + "]";
            const int k = int(detail::require_integer(
                detail::require_field(pots[i], "k", ppath), ppath + ".k"));
            spec.potentials[k] =
                matrix_from_json(detail::require_field(pots[i], "matrix", ppath),
                                 ppath + ".matrix");
        }
    }
    return spec;
}

inline Json sequence_to_json(const OperatorSequence& seq) {
    Json entries = Json::array();
    for (int n = 0; n <= seq.n_max(); ++n)
        entries.push_back(Json{{"n", n}, {"matrix", matrix_to_json(seq.entry(n).data)}});
    return Json{{"kind", seq.kind() == SequenceKind::State ? "state" : "observable"},
                {"weight", seq.weight()},
                {"d", seq.spec().d},
                {"n_max", seq.n_max()},
                {"entries", std::move(entries)}};
}

/// Parse a sequence against the given system. Missing entries are zero;
/// entries beyond n_max are a schema violation.
inline OperatorSequence sequence_from_json(const Json& j, std::shared_ptr<const SystemSpec> spec,
                                           const std::string& path) {
    const Json& kindj = detail::require_field(j, "kind", path);
    if (!kindj.is_string()) throw IoError(path + ".kind: expected \"state\" or \"observable\"");
    const std::string kind_str = kindj.get<std::string>();
    SequenceKind kind;
    if (kind_str == "state")
        kind = SequenceKind::State;
    else if (kind_str == "observable")
        kind = SequenceKind::Observable;
    else
        throw IoError(path + ".kind: expected \"state\" or \"observable\", got \"" + kind_str +
                      "\"");
    double weight = kind == SequenceKind::State ? 3.0 : 0.3;
    if (j.contains("weight")) weight = detail::require_number(j["weight"], path + ".weight");
    if (j.contains("d") &&
        detail::require_integer(j["d"], path + ".d") != spec->d)
        throw IoError(path + ".d: does not match the configured system dimension");
    if (j.contains("n_max") &&
        detail::require_integer(j["n_max"], path + ".n_max") != spec->n_max)
        throw IoError(path + ".n_max: does not match the configured truncation");

    std::vector<NParticleOperator> entries;
    for (int n = 0; n <= spec->n_max; ++n)
        entries.push_back(NParticleOperator::zero(range_labels(1, n), spec->d));
    const Json& ej = detail::require_field(j, "entries", path);
    if (!ej.is_array()) throw IoError(path + ".entries: expected an array");
    for (std::size_t i = 0; i < ej.size(); ++i) {
        const std::string epath = path + ".entries[" + std::to_string(i) + "]";
        const int n =
            int(detail::require_integer(detail::require_field(ej[i], "n", epath), epath + ".n"));
        if (n < 0 || n > spec->n_max)
            throw IoError(epath + ".n: entry index " + std::to_string(n) +
                          " outside [0, n_max=" + std::to_string(spec->n_max) + "]");
        Matrix m = matrix_from_json(detail::require_field(ej[i], "matrix", epath),
                                    epath + ".matrix");
        const long side = int_pow(spec->d, n);
        if (m.rows() != side)
            throw IoError(epath + ".matrix.dim: expected d^n = " + std::to_string(side) +
                          ", got " + std::to_string(m.rows()));
        entries[n] = NParticleOperator(range_labels(1, n), spec->d, std::move(m));
    }
    try {
        return OperatorSequence::make(std::move(spec), kind, std::move(entries), weight);
    } catch (const ValidationError& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline Json load_json_file(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw IoError(file_path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(file_path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& file_path, const std::string& content) {
    std::ofstream out(file_path);
    if (!out) throw IoError(file_path + ": cannot open file for writing");
    out << content;
    if (!out) throw IoError(file_path + ": write failed");
}

} // namespace qhier

#endif

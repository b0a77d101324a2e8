#include "aind/io.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

#include "aind/errors.hpp"

namespace aind {

using nlohmann::json;

namespace {

const char* norm_key(CoordNorm n) {
    switch (n) {
        case CoordNorm::Euclidean: return "euclidean";
        case CoordNorm::L1: return "l1";
        case CoordNorm::Max: return "max";
        case CoordNorm::Unchecked: return "unchecked";
    }
    return "unchecked";
}

CoordNorm parse_norm(const std::string& s) {
    if (s == "euclidean") return CoordNorm::Euclidean;
    if (s == "l1") return CoordNorm::L1;
    if (s == "max") return CoordNorm::Max;
    if (s == "unchecked") return CoordNorm::Unchecked;
    throw InputError("unknown coordinate norm '" + s + "'");
}

json space_json(const FiniteMetricSpace& s) {
    json out;
    out["labels"] = s.labels();
    if (s.has_coords()) {
        json coords = json::array();
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto r = s.coords(i);
            coords.push_back(std::vector<double>(r.begin(), r.end()));
        }
        out["coords"] = std::move(coords);
        out["norm"] = norm_key(s.norm());
    }
    if (!s.has_coords() || s.norm() == CoordNorm::Unchecked || s.size() <= kJsonDistLimit) {
        json dist = json::array();
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<double> row(s.size());
            for (std::size_t j = 0; j < s.size(); ++j) row[j] = s.dist(i, j);
            dist.push_back(std::move(row));
        }
        out["dist"] = std::move(dist);
    }
    return out;
}

DenseMatrix<double> real_matrix(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    DenseMatrix<double> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InputError(std::string(what) + " rows have unequal lengths");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) throw InputError(std::string(what) + " entries must be numbers");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

SpacePtr space_from_json(const json& j, const JsonReadOptions& opt, const char* what) {
    if (!j.is_object()) throw InputError(std::string(what) + " must be an object");
    if (!j.contains("labels") || !j["labels"].is_array()) throw InputError(std::string(what) + " needs a labels array");
    std::vector<std::string> labels;
    for (const auto& l : j["labels"]) {
        if (l.is_string())
            labels.push_back(l.get<std::string>());
        else if (l.is_number())
            labels.push_back(l.dump());
        else
            throw InputError(std::string(what) + " labels must be strings or numbers");
    }
    std::optional<DenseMatrix<double>> coords;
    if (j.contains("coords")) coords = real_matrix(j["coords"], "coords");
    CoordNorm norm = CoordNorm::Euclidean;
    if (j.contains("norm")) norm = parse_norm(j["norm"].get<std::string>());
    if (j.contains("dist")) {
        // Agreement with a true norm already implies the triangle inequality.
        const bool triangle = opt.check_triangle && !(coords && norm != CoordNorm::Unchecked);
        return FiniteMetricSpace::from_matrix(std::move(labels), real_matrix(j["dist"], "dist"), std::move(coords),
                                              norm, triangle);
    }
    if (!coords) throw InputError(std::string(what) + " needs dist or coords");
    return FiniteMetricSpace::from_coords(std::move(labels), std::move(*coords), norm);
}

std::vector<Rational> flat_weights(const std::vector<const json*>& entries) {
    bool numeric = false;
    for (const auto* e : entries) {
        if (!e->is_string() && !e->is_number()) throw InputError("weights must be \"p/q\" strings or numbers");
        numeric = numeric || e->is_number();
    }
    std::vector<Rational> out;
    if (numeric) {
        std::vector<double> d;
        for (const auto* e : entries)
            d.push_back(e->is_number() ? e->get<double>() : to_double(parse_rational(e->get<std::string>())));
        return normalize_float_weights(d);
    }
    for (const auto* e : entries) out.push_back(parse_rational(e->get<std::string>()));
    return out;
}

json read_document(std::istream& is) {
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::size_t> label_indices(const json& arr, const FiniteMetricSpace& s, const char* what) {
    std::vector<std::size_t> out;
    if (!arr.is_array()) throw InputError(std::string(what) + " must be an array of labels");
    for (const auto& l : arr) {
        const std::string key = l.is_string() ? l.get<std::string>() : l.dump();
        auto idx = s.find(key);
        if (!idx) throw InputError(std::string(what) + " names unknown label '" + key + "'");
        out.push_back(*idx);
    }
    return out;
}

json rectangle_json(const RectangleCertificate& r, const JointMeasure& j) {
    json a = json::array(), b = json::array();
    for (auto i : r.a) a.push_back(j.space1()->label(i));
    for (auto i : r.b) b.push_back(j.space2()->label(i));
    return {{"a", a}, {"b", b}};
}

json matrix_json(const DenseMatrix<double>& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        out.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return out;
}

}  // namespace

LoadedJoint read_joint_json(std::istream& is, const JsonReadOptions& opt) {
    const json doc = read_document(is);
    try {
        if (!doc.is_object() || !doc.contains("space1") || !doc.contains("space2") || !doc.contains("weights"))
            throw InputError("joint JSON needs space1, space2 and weights");
        auto s1 = space_from_json(doc["space1"], opt, "space1");
        auto s2 = space_from_json(doc["space2"], opt, "space2");
        const json& w = doc["weights"];
        if (!w.is_array() || w.size() != s1->size()) throw InputError("weights must have one row per point of space1");
        std::vector<const json*> entries;
        for (const auto& row : w) {
            if (!row.is_array() || row.size() != s2->size())
                throw InputError("weights rows must have one entry per point of space2");
            for (const auto& e : row) entries.push_back(&e);
        }
        const auto flat = flat_weights(entries);
        DenseMatrix<Rational> m(s1->size(), s2->size());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = flat[i * m.cols() + k];
        LoadedJoint out{JointMeasure(s1, s2, std::move(m)), "", std::nullopt, std::nullopt};
        if (doc.contains("family") && doc["family"].is_string()) out.family = doc["family"].get<std::string>();
        if (doc.contains("n")) {
            if (!doc["n"].is_number_unsigned()) throw InputError("n must be a nonnegative integer");
            out.n = doc["n"].get<unsigned>();
        }
        if (doc.contains("rectangle")) {
            const json& r = doc["rectangle"];
            if (!r.is_object() || !r.contains("a") || !r.contains("b"))
                throw InputError("rectangle needs a and b label lists");
            out.rectangle = RectangleCertificate{label_indices(r["a"], *s1, "rectangle.a"),
                                                 label_indices(r["b"], *s2, "rectangle.b")};
        }
        return out;
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid joint JSON: ") + e.what());
    }
}

void write_joint_json(std::ostream& os, const JointMeasure& j, const std::string& family, std::optional<unsigned> n,
                      const std::optional<RectangleCertificate>& rectangle) {
    json doc;
    if (!family.empty()) doc["family"] = family;
    if (n) doc["n"] = *n;
    doc["space1"] = space_json(*j.space1());
    doc["space2"] = space_json(*j.space2());
    json w = json::array();
    for (std::size_t i = 0; i < j.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < j.cols(); ++k) row.push_back(to_string(j(i, k)));
        w.push_back(std::move(row));
    }
    doc["weights"] = std::move(w);
    if (rectangle) doc["rectangle"] = rectangle_json(*rectangle, j);
    os << doc.dump() << '\n';
}

DiscreteMeasure read_measure_json(std::istream& is, const JsonReadOptions& opt) {
    const json doc = read_document(is);
    try {
        if (!doc.is_object() || !doc.contains("space1") || !doc.contains("weights"))
            throw InputError("measure JSON needs space1 and weights");
        if (doc.contains("space2")) throw InputError("single-measure JSON must not contain space2");
        auto s = space_from_json(doc["space1"], opt, "space1");
        const json& w = doc["weights"];
        if (!w.is_array() || w.size() != s->size()) throw InputError("weights must have one entry per point");
        std::vector<const json*> entries;
        for (const auto& e : w) entries.push_back(&e);
        return DiscreteMeasure(s, flat_weights(entries));
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid measure JSON: ") + e.what());
    }
}

void write_measure_json(std::ostream& os, const DiscreteMeasure& m) {
    json doc;
    doc["space1"] = space_json(*m.space());
    json w = json::array();
    for (const auto& q : m.weights()) w.push_back(to_string(q));
    doc["weights"] = std::move(w);
    os << doc.dump() << '\n';
}

void write_family_json(std::ostream& os, const FamilyInstance& inst) {
    if (inst.joint) {
        write_joint_json(os, *inst.joint, family_key(inst.family), inst.n, inst.rectangle);
        return;
    }
    if (!inst.gaussian) throw InputError("family instance has neither a joint nor a Gaussian block");
    const auto& g = *inst.gaussian;
    json doc;
    doc["family"] = family_key(inst.family);
    doc["n"] = inst.n;
    doc["params"] = inst.params;
    doc["gaussian"] = {{"mean1", g.mean1},
                       {"mean2", g.mean2},
                       {"cov11", matrix_json(g.cov11)},
                       {"cov22", matrix_json(g.cov22)},
                       {"cov12", matrix_json(g.cov12)}};
    os << doc.dump() << '\n';
}

}  // namespace aind

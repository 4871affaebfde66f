#include "qinv/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qinv {

namespace {

// nlohmann reports a byte offset; convert it to line:column for diagnostics.
std::pair<int, int> line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const Json& field(const Json& j, const std::string& key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(what + ": missing required key \"" + key + "\"");
    }
    return j.at(key);
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
        throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw InputError(what + ": expected a non-empty array of arrays of numbers");
    }
    const auto rows = j.size();
    const auto cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw InputError(what + ": row " + std::to_string(i) + " has inconsistent length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) {
                throw InputError(what + ": entry (" + std::to_string(i) + "," +
                                 std::to_string(c) + ") is not a number");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                j[i][c].get<double>();
        }
    }
    return m;
}

Json to_json(const Pattern& p) {
    Json rows = Json::array();
    for (int i = 0; i < p.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < p.cols; ++j) row.push_back(p.at(i, j) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    return rows;
}

Pattern pattern_from_json(const Json& j, const std::string& what) {
    const Matrix m = matrix_from_json(j, what);
    Pattern p(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < p.rows; ++i) {
        for (int c = 0; c < p.cols; ++c) {
            const double v = m(i, c);
            if (v != 0.0 && v != 1.0) {
                throw InputError(what + ": pattern entries must be 0 or 1");
            }
            p.set(i, c, v != 0.0);
        }
    }
    return p;
}

Json to_json(const StaticPlant& p) {
    return Json{{"P11", to_json(p.p11)},
                {"P12", to_json(p.p12)},
                {"P21", to_json(p.p21)},
                {"G", to_json(p.g)}};
}

StaticPlant static_plant_from_json(const Json& j) {
    StaticPlant p;
    p.p11 = matrix_from_json(field(j, "P11", "plant"), "plant.P11");
    p.p12 = matrix_from_json(field(j, "P12", "plant"), "plant.P12");
    p.p21 = matrix_from_json(field(j, "P21", "plant"), "plant.P21");
    p.g = matrix_from_json(field(j, "G", "plant"), "plant.G");
    try {
        p.validate();
    } catch (const DimensionError& e) {
        throw InputError(std::string("plant: ") + e.what());
    }
    return p;
}

Json to_json(const SubspaceBasis& b) {
    Json arr = Json::array();
    for (const auto& e : b.elements) arr.push_back(to_json(e));
    return Json{{"basis", std::move(arr)}};
}

SubspaceBasis basis_from_json(const Json& j) {
    const Json& arr = field(j, "basis", "subspace");
    if (!arr.is_array()) throw InputError("subspace.basis: expected an array of matrices");
    std::vector<Matrix> elements;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        elements.push_back(matrix_from_json(arr[i], "subspace.basis[" + std::to_string(i) + "]"));
    }
    try {
        return SubspaceBasis(std::move(elements));
    } catch (const DimensionError& e) {
        throw InputError(std::string("subspace: ") + e.what());
    }
}

Json to_json(const FirTransferMatrix& x) {
    Json taps = Json::array();
    for (const auto& t : x.taps) taps.push_back(to_json(t));
    return Json{{"horizon", x.horizon()}, {"taps", std::move(taps)}};
}

FirTransferMatrix fir_from_json(const Json& j, const std::string& what) {
    const Json& taps = field(j, "taps", what);
    if (!taps.is_array() || taps.empty()) {
        throw InputError(what + ".taps: expected a non-empty array of matrices");
    }
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        out.push_back(matrix_from_json(taps[k], what + ".taps[" + std::to_string(k) + "]"));
    }
    if (j.contains("horizon") && j["horizon"].is_number_integer()) {
        const int h = j["horizon"].get<int>();
        if (h + 1 != static_cast<int>(out.size())) {
            throw InputError(what + ": horizon " + std::to_string(h) + " does not match " +
                             std::to_string(out.size()) + " taps");
        }
    }
    try {
        return FirTransferMatrix(std::move(out));
    } catch (const DimensionError& e) {
        throw InputError(what + ": " + e.what());
    }
}

Json to_json(const FirSubspace& s) {
    Json arr = Json::array();
    for (const auto& e : s.elements) arr.push_back(to_json(e));
    return Json{{"basis", std::move(arr)}};
}

FirSubspace fir_subspace_from_json(const Json& j) {
    const Json& arr = field(j, "basis", "subspace");
    if (!arr.is_array()) throw InputError("subspace.basis: expected an array of FIR systems");
    std::vector<FirTransferMatrix> elements;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        elements.push_back(fir_from_json(arr[i], "subspace.basis[" + std::to_string(i) + "]"));
    }
    try {
        return FirSubspace(std::move(elements));
    } catch (const DimensionError& e) {
        throw InputError(std::string("subspace: ") + e.what());
    }
}

Json to_json(const FirPlant& p) {
    return Json{{"P11", to_json(p.p11)},
                {"P12", to_json(p.p12)},
                {"P21", to_json(p.p21)},
                {"G", to_json(p.g)}};
}

FirPlant fir_plant_from_json(const Json& j) {
    FirPlant p;
    p.p11 = fir_from_json(field(j, "P11", "plant"), "plant.P11");
    p.p12 = fir_from_json(field(j, "P12", "plant"), "plant.P12");
    p.p21 = fir_from_json(field(j, "P21", "plant"), "plant.P21");
    p.g = fir_from_json(field(j, "G", "plant"), "plant.G");
    try {
        p.validate();
    } catch (const DimensionError& e) {
        throw InputError(std::string("plant: ") + e.what());
    }
    return p;
}

Json to_json(const QiReport& r) {
    Json j{{"qi", r.qi},
           {"witness_residual", r.witness_residual},
           {"detail", r.detail}};
    if (r.witness_controller) j["witness_controller"] = to_json(*r.witness_controller);
    if (!r.witness_indices.empty()) j["witness_indices"] = r.witness_indices;
    return j;
}

Json to_json(const FirQiReport& r) {
    Json j{{"qi", r.qi},
           {"witness_residual", r.witness_residual},
           {"detail", r.detail}};
    if (r.witness_controller) j["witness_controller"] = to_json(*r.witness_controller);
    if (!r.witness_indices.empty()) j["witness_indices"] = r.witness_indices;
    return j;
}

Json to_json(const InertnessReport& r) {
    return Json{{"inert", r.inert},
                {"certificate",
                 r.certificate == InertnessCertificate::structural ? "structural" : "sampled"},
                {"worst_radius", r.worst_radius},
                {"offending_element", r.offending_element},
                {"detail", r.detail}};
}

Json to_json(const AssumptionReport& r) {
    auto samples = [](const std::vector<std::pair<double, double>>& v) {
        Json arr = Json::array();
        for (const auto& [w, s] : v) arr.push_back(Json{{"frequency", w}, {"sigma_min", s}});
        return arr;
    };
    return Json{{"p12_left_invertible", r.p12_left_invertible},
                {"p21_right_invertible", r.p21_right_invertible},
                {"d12_full_column_rank", r.d12_full_column_rank},
                {"d21_full_row_rank", r.d21_full_row_rank},
                {"p12_frequency_samples", samples(r.p12_frequency_samples)},
                {"p21_frequency_samples", samples(r.p21_frequency_samples)},
                {"tolerance", r.tolerance}};
}

Json to_json(const SynthesisResult& r) {
    return Json{{"q_opt", to_json(r.q_opt)},
                {"objective", r.objective},
                {"controller", to_json(r.controller)},
                {"q_membership_residual", r.q_membership_residual},
                {"normal_equation_residual", r.normal_equation_residual}};
}

namespace {

std::string verdict_name(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::pass: return "pass";
        case ProbeVerdict::nonconvex_witness: return "nonconvex_witness";
        case ProbeVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace

Json to_json(const ProbeReport& r) {
    Json j{{"verdict", verdict_name(r.verdict)},
           {"coverage_radius", r.coverage_radius},
           {"reject_tol", r.reject_tol},
           {"bbox_diagonal", r.bbox_diagonal},
           {"hull_margin", r.hull_margin},
           {"detail", r.detail}};
    if (r.witness) {
        Json mid = Json::array();
        for (Eigen::Index i = 0; i < r.witness->midpoint.size(); ++i) {
            mid.push_back(r.witness->midpoint[i]);
        }
        j["witness"] = Json{{"index_a", r.witness->index_a},
                            {"index_b", r.witness->index_b},
                            {"midpoint", std::move(mid)},
                            {"gap", r.witness->gap}};
    }
    return j;
}

Json to_json(const EqualityReport& r) {
    Json j{{"equal", r.equal},
           {"hausdorff", r.hausdorff},
           {"tol", r.tol},
           {"detail", r.detail}};
    if (r.max_pointwise) j["max_pointwise"] = *r.max_pointwise;
    return j;
}

Json to_json(const ExampleReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return Json{{"example", r.id},
                {"checks", std::move(checks)},
                {"all_pass", r.all_pass},
                {"elapsed_seconds", r.elapsed_seconds}};
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (Eigen::Index j = 0; j < cloud.params.cols(); ++j) {
        os << "param_" << j << ",";
    }
    for (Eigen::Index j = 0; j < cloud.dim(); ++j) {
        os << "point_" << j << (j + 1 < cloud.dim() ? "," : "\n");
    }
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        for (Eigen::Index j = 0; j < cloud.params.cols(); ++j) {
            os << cloud.params(i, j) << ",";
        }
        for (Eigen::Index j = 0; j < cloud.dim(); ++j) {
            os << cloud.points(i, j) << (j + 1 < cloud.dim() ? "," : "\n");
        }
    }
    return os.str();
}

}  // namespace qinv

// Copyright 2026 The gaussmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gaussmetro/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
    return s;
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            throw ValidationError("matrix rows have unequal lengths");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

Json vector_to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec vector_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("vector must be an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

Json to_json(const GaussianState& s) {
    Json j;
    j["n"] = s.modes;
    j["m"] = s.probe_modes;
    j["mean"] = vector_to_json(s.mean);
    j["cov"] = matrix_to_json(s.cov);
    j["n_t"] = s.thermal_occupation ? Json(*s.thermal_occupation) : Json(nullptr);
    return j;
}

GaussianState state_from_json(const Json& j) {
    try {
        GaussianState s;
        s.modes = j.at("n").get<int>();
        s.probe_modes = j.value("m", s.modes);
        s.mean = vector_from_json(j.at("mean"));
        s.cov = matrix_from_json(j.at("cov"));
        if (j.contains("n_t") && !j["n_t"].is_null()) s.thermal_occupation = j["n_t"].get<double>();
        if (s.mean.size() != 2 * s.modes || s.cov.rows() != 2 * s.modes || s.cov.cols() != 2 * s.modes)
            throw DimensionError("state moments do not match the mode count");
        validate(s);
        return s;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed state: ") + e.what());
    }
}

Json to_json(const PassiveTransform& t) {
    Json j;
    j["n"] = t.modes();
    j["m"] = t.probe_modes;
    j["L"] = matrix_to_json(t.L);
    return j;
}

PassiveTransform transform_from_json(const Json& j) {
    try {
        const Mat L = matrix_from_json(j.at("L"));
        const int n = j.value("n", static_cast<int>(L.rows() / 2));
        if (L.rows() != 2 * n) throw DimensionError("transform size does not match n");
        return make_passive(L, j.value("m", n));
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed transform: ") + e.what());
    }
}

Json to_json(const GeneraldyneMeasurement& m) {
    Json j;
    j["m"] = m.probe_modes;
    j["K"] = m.is_ideal() ? Json(nullptr) : matrix_to_json(m.K);
    j["r"] = m.r;
    j["ideal"] = m.ideal ? Json(to_string(*m.ideal)) : Json(nullptr);
    j["eta_eff"] = m.eta_eff;
    return j;
}

GeneraldyneMeasurement measurement_from_json(const Json& j) {
    try {
        GeneraldyneMeasurement m;
        const int modes = j.at("m").get<int>();
        if (j.contains("ideal") && !j["ideal"].is_null()) {
            m = GeneraldyneMeasurement::homodyne(modes, parse_quadrature(j["ideal"].get<std::string>()));
        } else {
            const auto r = j.at("r").get<std::vector<double>>();
            if (j.contains("K") && !j["K"].is_null())
                m = GeneraldyneMeasurement::general(matrix_from_json(j["K"]), r);
            else
                m = GeneraldyneMeasurement::diagonal(r);
            if (m.probe_modes != modes) throw DimensionError("measurement size does not match m");
        }
        m.eta_eff = j.value("eta_eff", 1.0);
        m.validate();
        return m;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed measurement: ") + e.what());
    }
}

Json to_json(const PhaseGenerator& g) {
    Json j;
    j["kind"] = g.is_mono() ? "mono" : "poly";
    j["eps"] = g.eps;
    return j;
}

Json to_json(const NoiseModel& n) {
    Json j;
    j["eta_loss"] = n.eta_loss;
    j["eta_eff"] = n.eta_eff;
    j["n_th"] = n.n_th;
    j["gamma"] = n.gamma;
    return j;
}

Json to_json(const Scheme& s) {
    Json j;
    j["state"] = to_json(s.state);
    j["transform"] = to_json(s.transform);
    j["generator"] = to_json(s.generator);
    j["measurement"] = to_json(s.measurement);
    j["noise"] = s.noise ? to_json(*s.noise) : Json(nullptr);
    return j;
}

std::string fingerprint(const Json& config) { return hex64(fnv1a(config.dump())); }
std::string fingerprint(const Scheme& s) { return fingerprint(to_json(s)); }

Json to_json(const FisherBreakdown& b) {
    Json j;
    j["total"] = b.total;
    j["decomposed"] = b.decomposed;
    j["probe_qfi"] = b.probe_qfi;
    j["probe_fisher"] = b.probe_fisher;
    j["ancilla"] = b.ancilla;
    j["interference"] = b.interference;
    j["measurement"] = b.measurement;
    j["residual"] = b.residual;
    j["sigma_tilde"] = matrix_to_json(b.sigma_tilde);
    j["ancilla_tilde"] = matrix_to_json(b.ancilla_tilde);
    j["delta"] = matrix_to_json(b.delta);
    j["schur"] = matrix_to_json(b.schur);
    return j;
}

Json to_json(const DecoherentFisher& d) {
    Json j;
    j["value"] = d.value;
    j["ideal"] = d.ideal;
    j["decomposed"] = d.decomposed;
    j["substituted"] = d.substituted;
    j["printed_equal_eta"] = d.printed_equal_eta ? Json(*d.printed_equal_eta) : Json(nullptr);
    j["printed_matches"] = d.printed_matches;
    j["qfi"] = d.qfi;
    return j;
}

namespace {

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const WorkingPointReport& r) {
    Json j;
    j["kind"] = to_string(r.kind);
    j["feasible"] = r.feasible;
    j["saturated"] = r.saturated;
    j["flat"] = r.flat;
    j["max_relative_gap"] = optional_number(r.max_relative_gap);
    Json cands = Json::array();
    for (const auto& c : r.candidates)
        cands.push_back({{"phi", c.phi}, {"fisher", c.fisher}, {"qfi", c.qfi}, {"saturating", c.saturating},
                         {"label", c.label}});
    j["candidates"] = std::move(cands);
    Json roots = Json::array();
    for (const auto& z : r.roots)
        roots.push_back({{"value", complex_to_json(z.value)}, {"real", z.real}, {"feasible", z.feasible}});
    j["roots"] = std::move(roots);
    Json disc = Json::array();
    for (const auto& d : r.discrepancies)
        disc.push_back({{"quantity", d.quantity}, {"printed", d.printed}, {"computed", d.computed}, {"note", d.note}});
    j["discrepancies"] = std::move(disc);
    j["notes"] = r.notes;
    return j;
}

Json to_json(const EmpiricalFisher& e) {
    return {{"empirical", e.value}, {"stderr", e.stderr_},      {"analytic", e.analytic}, {"z", e.z()},
            {"score_mean", e.score_mean}, {"score_stderr", e.score_stderr}, {"samples", e.samples},
            {"seed", e.seed}};
}

Json to_json(const MleResult& m) {
    return {{"variance", m.variance}, {"mean_estimate", m.mean_estimate}, {"fisher", m.fisher},
            {"crb", m.crb},           {"efficiency", m.efficiency},       {"accepted", m.accepted},
            {"flagged", m.flagged},   {"seed", m.seed}};
}

Json to_json(const CrbAudit& a) {
    Json rows = Json::array();
    for (const auto& r : a.rows)
        rows.push_back({{"phi", r.phi}, {"F_analytic", r.fisher}, {"QFI", r.qfi}, {"F_empirical", r.empirical},
                        {"SE", r.stderr_}, {"violation", r.violation}, {"saturating", r.saturating}});
    return {{"violations", a.violations}, {"saturating", a.saturating}, {"rows", std::move(rows)}};
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void CsvTable::add(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_cells(std::move(cells));
}

void CsvTable::add_cells(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) throw DimensionError("row width does not match the header");
    rows.push_back(std::move(cells));
}

std::string CsvTable::render(const Provenance& p) const {
    std::ostringstream os;
    os << "# gaussmetro " << GAUSSMETRO_VERSION << " config=" << p.config_hash << " seed=" << p.seed << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

Json CsvTable::to_json() const {
    Json out = Json::array();
    for (const auto& row : rows) {
        Json o = Json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::string& c = row[i];
            double v = 0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec == std::errc() && res.ptr == c.data() + c.size())
                o[columns[i]] = v;
            else
                o[columns[i]] = c;
        }
        out.push_back(std::move(o));
    }
    return out;
}

CsvTable outcomes_table(const Mat& outcomes) {
    CsvTable t;
    for (Eigen::Index k = 0; k < outcomes.cols(); ++k)
        t.columns.push_back(std::string("lambda_") + (k % 2 == 0 ? "q" : "p") + std::to_string(k / 2 + 1));
    for (Eigen::Index i = 0; i < outcomes.rows(); ++i) {
        std::vector<double> row(outcomes.cols());
        for (Eigen::Index k = 0; k < outcomes.cols(); ++k) row[k] = outcomes(i, k);
        t.add(row);
    }
    return t;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace gaussmetro

#pragma once

// JSON reports with insertion-ordered keys. Identical inputs give
// byte-identical output; wall time is only recorded on request.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parahoric/chains.hpp"
#include "parahoric/errors.hpp"
#include "parahoric/orbit.hpp"
#include "parahoric/sweep.hpp"

namespace parahoric {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "parahoric_lab";
inline constexpr const char* kToolVersion = "1.0.0";

inline Json weyl_json(const AffineWeylElem& x) { return x.to_string(); }

inline Json lemma_record(const LemmaReport& r) {
    Json params;
    params["q"] = r.q;
    params["f"] = r.f;
    params["e0"] = r.e0;
    params["shape"] = r.shape.parts();
    params["rho"] = r.rho_index;
    params["tau"] = r.tau_index.empty() ? Json(nullptr) : Json(r.tau_index);
    params["x"] = weyl_json(r.x);
    params["mode"] = r.mode;
    Json j;
    j["params"] = params;
    j["left"] = r.left;
    j["right"] = r.right;
    j["equal"] = r.equal;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline Json orbit_record(const OrbitReport& r) {
    Json params;
    params["q"] = r.q;
    params["f"] = r.f;
    params["e0"] = r.e0;
    params["rho"] = r.rho_index;
    params["face"] = r.face;
    params["shape"] = r.shape.parts();
    params["y"] = weyl_json(r.y);
    params["x"] = weyl_json(r.x);
    params["xy"] = weyl_json(r.xy);
    params["taus"] = r.taus;
    Json j;
    j["params"] = params;
    j["module_dimension"] = r.module_dimension;
    j["direct"] = r.direct;
    j["predicted"] = r.predicted;
    j["at_identity"] = r.at_identity;
    j["equal"] = r.equal;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline Json simplicial_record(const SimplicialCheckReport& r) {
    Json j;
    j["R"] = r.R;
    j["q"] = r.q;
    j["radius"] = r.radius;
    j["system"] = r.system;
    j["vertices"] = r.vertices;
    j["simplex_counts"] = r.simplex_counts;
    j["dd_basis"] = r.dd_basis;
    j["dd_failures"] = r.dd_failures;
    j["eps_basis"] = r.eps_basis;
    j["eps_failures"] = r.eps_failures;
    j["sign_checks"] = r.sign_checks;
    j["sign_failures"] = r.sign_failures;
    j["inclusion_checks"] = r.inclusion_checks;
    j["inclusion_failures"] = r.inclusion_failures;
    j["reversal_pairs"] = r.reversal_pairs;
    j["reversal_failures"] = r.reversal_failures;
    j["passed"] = r.passed();
    return j;
}

/// Vertices with their normal forms and simplices as vertex-index lists.
inline Json complex_json(const TruncatedComplex& X) {
    Json j;
    j["R"] = X.R();
    j["q"] = X.field()->q();
    j["radius"] = X.radius();
    j["precision"] = X.ring().precision();
    Json verts = Json::array();
    for (std::size_t v = 0; v < X.vertices().size(); ++v) {
        Json e;
        e["index"] = v;
        e["diagonal_exponents"] = X.vertices()[v].k;
        e["normal_form"] = X.vertices()[v].key();
        e["distance"] = X.distances()[v];
        verts.push_back(e);
    }
    j["vertices"] = verts;
    Json simp = Json::array();
    for (const auto& level : X.simplices()) simp.push_back(level);
    j["simplices"] = simp;
    return j;
}

/// Tool header, configuration echo, records, failing records and summary.
class Report {
public:
    Report(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

    void add(Json record, bool passed) {
        if (!passed) failures_.push_back(record);
        records_.push_back(std::move(record));
        ++cells_;
        if (passed) ++passes_;
    }
    void set_extra(const std::string& key, Json value) { extra_[key] = std::move(value); }
    void set_wall_ms(double ms) { wall_ms_ = ms; }
    /// A line for the human summary only.
    void note(std::string line) { notes_.push_back(std::move(line)); }
    const std::vector<std::string>& notes() const { return notes_; }

    std::size_t cells() const { return cells_; }
    std::size_t failures() const { return cells_ - passes_; }
    const Json& failing_records() const { return failures_; }

    Json to_json() const {
        Json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["command"] = command_;
        j["config"] = config_;
        for (const auto& [k, v] : extra_.items()) j[k] = v;
        j["records"] = records_;
        j["failures"] = failures_;
        Json s;
        s["cells"] = cells_;
        s["passes"] = passes_;
        s["failures"] = cells_ - passes_;
        if (wall_ms_) s["wall_ms"] = *wall_ms_;
        j["summary"] = s;
        return j;
    }

private:
    std::string command_;
    Json config_;
    Json extra_ = Json::object();
    Json records_ = Json::array();
    Json failures_ = Json::array();
    std::size_t cells_ = 0, passes_ = 0;
    std::optional<double> wall_ms_;
    std::vector<std::string> notes_;
};

/// Writes the report as indented JSON with a trailing newline.
inline void emit_report(const Json& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open report file for writing: " + path);
    out << report.dump(2) << '\n';
    out.flush();
    if (!out) throw Error("failed writing report file: " + path);
}

}  // namespace parahoric

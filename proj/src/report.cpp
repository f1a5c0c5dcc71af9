#include "onesided/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "onesided/errors.hpp"

namespace onesided {

namespace {

using ordered_json = nlohmann::ordered_json;

double finite_or_throw(double v, const std::string& field) {
    if (!std::isfinite(v)) throw NonFiniteEvaluation("report field '" + field + "' is not finite");
    return v;
}

ordered_json case_to_json(const CaseRecord& c) {
    ordered_json j;
    j["case"] = c.case_id;
    j["grid_n"] = c.grid_n;
    j["lhs"] = finite_or_throw(c.lhs, "lhs");
    j["rhs"] = finite_or_throw(c.rhs, "rhs");
    j["ratio"] = finite_or_throw(c.ratio, "ratio");
    j["fitted_C"] = finite_or_throw(c.fitted_C, "fitted_C");
    j["margin"] = finite_or_throw(c.margin, "margin");
    if (!c.witness.empty()) {
        ordered_json w = ordered_json::object();
        for (const auto& [k, v] : c.witness) w[k] = finite_or_throw(v, "witness." + k);
        j["witness"] = std::move(w);
    }
    if (!c.truncations.empty()) j["truncations"] = c.truncations;
    j["pass"] = c.pass;
    return j;
}

}  // namespace

std::string report_to_json(const VerificationReport& r, bool include_timing) {
    ordered_json j;
    j["schema_version"] = r.schema_version;
    j["config"] = ordered_json::parse(r.config_echo_json);
    ordered_json suites = ordered_json::array();
    for (const auto& s : r.suites) {
        ordered_json js;
        js["suite"] = s.name;
        ordered_json cases = ordered_json::array();
        for (const auto& c : s.cases) cases.push_back(case_to_json(c));
        js["cases"] = std::move(cases);
        ordered_json refinement = ordered_json::array();
        for (const auto& row : s.refinement) {
            ordered_json jr;
            jr["quantity"] = row.quantity;
            ordered_json vals = ordered_json::array();
            for (double v : row.values) vals.push_back(finite_or_throw(v, row.quantity));
            jr["values"] = std::move(vals);
            jr["drift_pct"] = finite_or_throw(row.drift_pct, "drift_pct");
            jr["pass"] = row.pass;
            refinement.push_back(std::move(jr));
        }
        js["refinement"] = std::move(refinement);
        if (!s.notes.empty()) js["notes"] = s.notes;
        js["pass"] = s.pass;
        suites.push_back(std::move(js));
    }
    j["suites"] = std::move(suites);
    j["pass"] = r.pass;
    if (include_timing) j["wall_time_ms"] = finite_or_throw(r.wall_time_ms, "wall_time_ms");
    return j.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string report_to_csv(const VerificationReport& r) {
    std::ostringstream os;
    os << "suite,case,grid_n,lhs,rhs,ratio,pass\n";
    for (const auto& s : r.suites)
        for (const auto& c : s.cases)
            os << csv_escape(s.name) << ',' << csv_escape(c.case_id) << ',' << c.grid_n << ','
               << format_double(c.lhs) << ',' << format_double(c.rhs) << ',' << format_double(c.ratio)
               << ',' << (c.pass ? "true" : "false") << '\n';
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string convert_report(const std::string& json_text, const std::string& format) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw IoError(std::string("report is not valid JSON: ") + e.what());
    }
    if (format == "json") return j.dump(2) + "\n";
    if (format != "csv") throw ConfigInvalid("format must be json or csv");
    std::ostringstream os;
    os << "suite,case,grid_n,lhs,rhs,ratio,pass\n";
    for (const auto& s : j.at("suites")) {
        const std::string suite = s.at("suite").get<std::string>();
        for (const auto& c : s.at("cases"))
            os << csv_escape(suite) << ',' << csv_escape(c.at("case").get<std::string>()) << ','
               << c.at("grid_n").get<int>() << ',' << format_double(c.at("lhs").get<double>()) << ','
               << format_double(c.at("rhs").get<double>()) << ','
               << format_double(c.at("ratio").get<double>()) << ','
               << (c.at("pass").get<bool>() ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace onesided

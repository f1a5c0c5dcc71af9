#pragma once

#include <map>
#include <string>
#include <vector>

namespace onesided {

struct CaseRecord {
    std::string suite;
    std::string case_id;
    int grid_n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double fitted_C = 0.0;
    double margin = 0.0;
    std::map<std::string, double> witness;
    std::vector<std::string> truncations;
    bool pass = true;
};

struct RefinementRow {
    std::string quantity;
    std::vector<double> values;  // one per grid size
    double drift_pct = 0.0;
    bool pass = true;
};

struct SuiteReport {
    std::string name;
    std::vector<CaseRecord> cases;
    std::vector<RefinementRow> refinement;
    std::vector<std::string> notes;
    bool pass = true;
};

struct VerificationReport {
    int schema_version = 1;
    std::string config_echo_json;  // canonical config echo
    std::vector<SuiteReport> suites;
    bool pass = true;
    double wall_time_ms = 0.0;
};

/// Serialize with stable key order; timing is volatile and only included on
/// request so identical runs stay byte-identical.
std::string report_to_json(const VerificationReport& r, bool include_timing = false);
std::string report_to_csv(const VerificationReport& r);

void write_text_file(const std::string& path, const std::string& content);

/// report-convert: re-emit an existing JSON report as csv (or re-dump json).
std::string convert_report(const std::string& json_text, const std::string& format);

}  // namespace onesided

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "coherent/io.hpp"

namespace coherent {

/// One verified identity. `measured_residual` is a nonnegative deviation and
/// passes when it does not exceed `tolerance`.
struct CheckRecord {
    std::string check_id;
    std::string paper_anchor;
    double measured_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

class VerificationReport {
public:
    void add(std::string check_id, std::string anchor, double residual, double tolerance)
    {
        const bool ok = std::isfinite(residual) && residual <= tolerance;
        records_.push_back({std::move(check_id), std::move(anchor), residual, tolerance, ok});
    }
    void add(CheckRecord record) { records_.push_back(std::move(record)); }

    [[nodiscard]] const std::vector<CheckRecord>& records() const { return records_; }
    [[nodiscard]] std::size_t passed() const
    {
        std::size_t n = 0;
        for (const auto& r : records_) {
            n += r.pass ? 1 : 0;
        }
        return n;
    }
    [[nodiscard]] std::size_t failed() const { return records_.size() - passed(); }
    [[nodiscard]] bool all_pass() const { return failed() == 0; }

private:
    std::vector<CheckRecord> records_;
};

inline io::json report_json(const VerificationReport& report)
{
    io::json checks = io::json::array();
    for (const auto& r : report.records()) {
        checks.push_back({{"check_id", r.check_id},
                          {"paper_anchor", r.paper_anchor},
                          {"measured_residual", r.measured_residual},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass}});
    }
    return {{"checks", checks},
            {"summary",
             {{"total", report.records().size()},
              {"passed", report.passed()},
              {"failed", report.failed()},
              {"pass", report.all_pass()}}}};
}

/// Writes the canonical (byte-stable) JSON form of the report. Throws IoError.
inline void emit_report(const VerificationReport& report, const std::string& path)
{
    io::write_text_file(path, io::canonical_json(report_json(report)));
}

} // namespace coherent

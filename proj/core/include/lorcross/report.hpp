#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lorcross {

// One measured comparison.  `ratio` is lhs/rhs when rhs > 0, +inf when only
// rhs vanishes, and NaN as the 0/0 sentinel.
struct ReportRow {
    std::string case_id;
    double scale = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

double safe_ratio(double lhs, double rhs);

// Result of one ratio-boundedness check: rows ordered by scale plus any
// precondition flags raised while building them.  Flags never abort a check;
// they mark rows whose hypotheses are not satisfied.
class VerificationReport {
  public:
    explicit VerificationReport(std::string check_id) : check_id_(std::move(check_id)) {}

    const std::string& check_id() const { return check_id_; }
    const std::vector<ReportRow>& rows() const { return rows_; }
    const std::vector<std::string>& precondition_flags() const { return flags_; }

    void add_row(std::string case_id, double scale, double lhs, double rhs);
    void flag(const std::string& message);  // deduplicated
    bool clean() const { return flags_.empty(); }

    void append(const VerificationReport& other);  // merge rows and flags
    void sort_rows();                              // stable, by scale

    // Summary over rows with finite ratios.
    double max_ratio() const;
    double min_ratio() const;
    // Largest per-unit-scale growth of the per-scale max ratio between
    // successive scales; 1 when fewer than two scales contribute.
    double growth_factor() const;

    std::string to_csv() const;
    void write_csv(const std::filesystem::path& path) const;

  private:
    std::string check_id_;
    std::vector<ReportRow> rows_;
    std::vector<std::string> flags_;
};

// 12 significant digits, the precision used everywhere a float is printed.
std::string format_sig(double x);

}  // namespace lorcross

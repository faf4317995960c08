#include "lorcross/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lorcross {

double safe_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    if (lhs == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::numeric_limits<double>::infinity();
}

void VerificationReport::add_row(std::string case_id, double scale, double lhs, double rhs) {
    rows_.push_back({std::move(case_id), scale, lhs, rhs, safe_ratio(lhs, rhs)});
}

void VerificationReport::flag(const std::string& message) {
    if (std::find(flags_.begin(), flags_.end(), message) == flags_.end()) flags_.push_back(message);
}

void VerificationReport::append(const VerificationReport& other) {
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
    for (const auto& f : other.flags_) flag(f);
}

void VerificationReport::sort_rows() {
    std::stable_sort(rows_.begin(), rows_.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.scale < b.scale; });
}

double VerificationReport::max_ratio() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows_)
        if (std::isfinite(r.ratio)) m = std::max(m, r.ratio);
    return std::isfinite(m) ? m : std::numeric_limits<double>::quiet_NaN();
}

double VerificationReport::min_ratio() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rows_)
        if (std::isfinite(r.ratio)) m = std::min(m, r.ratio);
    return std::isfinite(m) ? m : std::numeric_limits<double>::quiet_NaN();
}

double VerificationReport::growth_factor() const {
    // Per-scale maxima of the finite ratios, keyed by exact scale value.
    std::map<double, double> per_scale;
    for (const auto& r : rows_) {
        if (!std::isfinite(r.ratio)) continue;
        auto [it, inserted] = per_scale.emplace(r.scale, r.ratio);
        if (!inserted) it->second = std::max(it->second, r.ratio);
    }
    if (per_scale.size() < 2) return 1.0;
    double growth = 1.0;
    auto prev = per_scale.begin();
    for (auto it = std::next(prev); it != per_scale.end(); ++it, ++prev) {
        if (prev->second <= 0.0) continue;
        double step = it->first - prev->first;
        if (step <= 0.0) continue;
        growth = std::max(growth, std::pow(it->second / prev->second, 1.0 / step));
    }
    return growth;
}

std::string format_sig(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string VerificationReport::to_csv() const {
    std::ostringstream out;
    out << "case_id,scale,lhs,rhs,ratio\n";
    for (const auto& r : rows_) {
        out << r.case_id << ',' << format_sig(r.scale) << ',' << format_sig(r.lhs) << ','
            << format_sig(r.rhs) << ',' << format_sig(r.ratio) << '\n';
    }
    out << "summary," << format_sig(max_ratio()) << ',' << format_sig(min_ratio()) << ','
        << format_sig(growth_factor()) << ',';
    if (flags_.empty()) {
        out << "ok";
    } else {
        for (std::size_t i = 0; i < flags_.size(); ++i) out << (i ? ";" : "") << flags_[i];
    }
    out << '\n';
    return out.str();
}

void VerificationReport::write_csv(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << to_csv();
}

}  // namespace lorcross

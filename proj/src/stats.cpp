#include "lendml/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lendml {

namespace {

constexpr size_t kWindow = 6;

void fill_moving(MonthlySeries& s) {
    const size_t n = s.raw.size();
    s.moving_avg.resize(n);
    s.moving_std.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t begin = i + 1 >= kWindow ? i + 1 - kWindow : 0;
        double sum = 0.0;
        for (size_t k = begin; k <= i; ++k) sum += s.raw[k];
        const double m = sum / (double)(i - begin + 1);
        double ss = 0.0;
        for (size_t k = begin; k <= i; ++k) ss += (s.raw[k] - m) * (s.raw[k] - m);
        s.moving_avg[i] = m;
        s.moving_std[i] = std::sqrt(ss / (double)(i - begin + 1));
    }
}

// Peak-relative decline detection on the smoothed default fraction. Fires
// only when the series ends well below its peak; the reported month is the
// first one clearly off the peak after the maximum.
std::optional<YearMonth> detect_cutoff(const MonthlySeries& s) {
    if (s.moving_avg.size() < kWindow) return std::nullopt;
    size_t peak = 0;
    for (size_t i = 1; i < s.moving_avg.size(); ++i)
        if (s.moving_avg[i] > s.moving_avg[peak]) peak = i;
    const double peak_v = s.moving_avg[peak];
    if (peak_v <= 0.0) return std::nullopt;
    if (s.moving_avg.back() >= 0.5 * peak_v) return std::nullopt;
    for (size_t i = peak + 1; i < s.moving_avg.size(); ++i)
        if (s.moving_avg[i] < 0.85 * peak_v) return s.months[i];
    return std::nullopt;
}

}  // namespace

size_t moving_window_span() { return kWindow; }

std::string MonthlySeries::to_csv() const {
    std::ostringstream os;
    os << "month," << name << ",moving_avg,moving_std\n";
    for (size_t i = 0; i < months.size(); ++i)
        os << to_string(months[i]) << ',' << format_double(raw[i]) << ','
           << format_double(moving_avg[i]) << ',' << format_double(moving_std[i]) << "\n";
    return os.str();
}

MonthlyStats compute_monthly_stats(const std::vector<LoanRecord>& accepted,
                                   const std::vector<LoanRecord>& rejected) {
    if (accepted.empty() && rejected.empty())
        fail("stats: no dated records in either loan file");

    struct Counts {
        size_t acc = 0, rej = 0, def = 0;
    };
    std::map<int, Counts> by_month;
    for (const auto& r : accepted) {
        Counts& c = by_month[r.date.index()];
        ++c.acc;
        auto status = r.raw("status");
        if (status && map_loan_status(*status) == LoanStatus::Defaulted) ++c.def;
    }
    for (const auto& r : rejected) ++by_month[r.date.index()].rej;

    MonthlyStats out;
    out.default_fraction.name = "default_fraction";
    out.rejected_fraction.name = "rejected_fraction";
    out.total_requested.name = "total_requested";
    for (const auto& [idx, c] : by_month) {
        const YearMonth ym = YearMonth::from_index(idx);
        out.months.push_back(ym);
        out.accepted_count.push_back(c.acc);
        out.rejected_count.push_back(c.rej);
        out.requested_count.push_back(c.acc + c.rej);
        out.defaulted_count.push_back(c.def);
        if (c.acc > 0) {
            out.default_fraction.months.push_back(ym);
            out.default_fraction.raw.push_back((double)c.def / (double)c.acc);
        }
        out.rejected_fraction.months.push_back(ym);
        out.rejected_fraction.raw.push_back((double)c.rej / (double)(c.acc + c.rej));
        out.total_requested.months.push_back(ym);
        out.total_requested.raw.push_back((double)(c.acc + c.rej));
    }
    fill_moving(out.default_fraction);
    fill_moving(out.rejected_fraction);
    fill_moving(out.total_requested);
    out.suggested_cutoff = detect_cutoff(out.default_fraction);
    return out;
}

std::string MonthlyStats::to_text() const {
    std::ostringstream os;
    os << "monthly stats (moving statistics use trailing " << kWindow
       << "-month windows, clipped at series start)\n";
    os << "month accepted rejected requested defaulted default_frac rejected_frac\n";
    for (size_t i = 0; i < months.size(); ++i) {
        os << to_string(months[i]) << ' ' << accepted_count[i] << ' ' << rejected_count[i] << ' '
           << requested_count[i] << ' ' << defaulted_count[i] << ' ';
        os << (accepted_count[i] > 0
                   ? format_double((double)defaulted_count[i] / (double)accepted_count[i])
                   : "-");
        os << ' ' << format_double((double)rejected_count[i] / (double)requested_count[i]) << "\n";
    }
    if (suggested_cutoff)
        os << "suggested_cutoff " << to_string(*suggested_cutoff)
           << " (advisory; pass cutoff_date explicitly to apply)\n";
    else
        os << "suggested_cutoff none\n";
    return os.str();
}

}  // namespace lendml

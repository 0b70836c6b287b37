#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lendml/dataset.hpp"
#include "lendml/ingest.hpp"

namespace lendml {

// One per-month series with trailing moving statistics. Windows cover the
// last (up to) 6 series points, clipped at the start, so no point looks
// ahead of its month.
struct MonthlySeries {
    std::string name;
    std::vector<YearMonth> months;
    std::vector<double> raw;
    std::vector<double> moving_avg;
    std::vector<double> moving_std;  // population std over the window

    std::string to_csv() const;
};

struct MonthlyStats {
    std::vector<YearMonth> months;  // every month with any request
    std::vector<size_t> accepted_count;
    std::vector<size_t> rejected_count;
    std::vector<size_t> requested_count;  // accepted + rejected, per month
    std::vector<size_t> defaulted_count;

    MonthlySeries default_fraction;   // defaulted / accepted, months with accepted > 0
    MonthlySeries rejected_fraction;  // rejected / requested
    MonthlySeries total_requested;

    // advisory only: first month of a sustained trailing decline in the
    // default-fraction moving average, if one is detected
    std::optional<YearMonth> suggested_cutoff;

    std::string to_text() const;
};

MonthlyStats compute_monthly_stats(const std::vector<LoanRecord>& accepted,
                                   const std::vector<LoanRecord>& rejected);

size_t moving_window_span();  // 6

}  // namespace lendml

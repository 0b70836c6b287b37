#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lendml {

// All fatal conditions surface as this; the CLI catches it, prints the
// stage-prefixed message and exits nonzero.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

// Calendar month. All date logic in the project works at month resolution.
struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12

    int index() const { return year * 12 + (month - 1); }
    static YearMonth from_index(int idx) {
        int y = idx / 12, m = idx % 12;
        if (m < 0) { m += 12; --y; }
        return YearMonth{y, m + 1};
    }
    bool operator==(const YearMonth& o) const = default;
    auto operator<=>(const YearMonth& o) const { return index() <=> o.index(); }
};

std::string to_string(const YearMonth& ym);                  // "2015-03"
std::optional<YearMonth> parse_year_month(std::string_view s);  // "2015-03"

// Date formats accepted in loan files: "Mon-YYYY" (e.g. "Dec-2015") and
// "YYYY-MM-DD". Anything else is unparseable.
std::optional<YearMonth> parse_loan_date(std::string_view s);

std::string month_name(int month);  // 1 -> "Jan"

// --- string helpers ---

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Numeric field parser for loan CSVs: trims, strips a trailing '%',
// returns nullopt for empty or unparseable content.
std::optional<double> parse_numeric_field(std::string_view s);

// Shortest decimal representation that round-trips the double exactly.
// Used for every double written to CSV or JSON sidecars so that repeated
// runs are byte-identical and parse-back is lossless.
std::string format_double(double v);

std::string format_fixed(double v, int decimals);

// FNV-1a over a string; content ids for artifacts and preprocess states.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace lendml

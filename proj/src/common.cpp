#include "lendml/common.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace lendml {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_name(std::string_view s) {
    if (s.size() != 3) return 0;
    for (int m = 0; m < 12; ++m) {
        const char* n = kMonthNames[m];
        if (std::tolower((unsigned char)s[0]) == std::tolower((unsigned char)n[0]) &&
            std::tolower((unsigned char)s[1]) == std::tolower((unsigned char)n[1]) &&
            std::tolower((unsigned char)s[2]) == std::tolower((unsigned char)n[2]))
            return m + 1;
    }
    return 0;
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

}  // namespace

std::string to_string(const YearMonth& ym) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", ym.year, ym.month);
    return buf;
}

std::optional<YearMonth> parse_year_month(std::string_view s) {
    s = trim(s);
    auto dash = s.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    int y = 0, m = 0;
    if (!parse_int(s.substr(0, dash), y) || !parse_int(s.substr(dash + 1), m)) return std::nullopt;
    if (m < 1 || m > 12 || y < 1800 || y > 3000) return std::nullopt;
    return YearMonth{y, m};
}

std::optional<YearMonth> parse_loan_date(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    // "YYYY-MM-DD"
    if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
        int y = 0, m = 0;
        if (parse_int(s.substr(0, 4), y) && parse_int(s.substr(5, 2), m) &&
            m >= 1 && m <= 12 && y >= 1800 && y <= 3000)
            return YearMonth{y, m};
        return std::nullopt;
    }
    // "Mon-YYYY"
    if (s.size() == 8 && s[3] == '-') {
        int m = month_from_name(s.substr(0, 3));
        int y = 0;
        if (m != 0 && parse_int(s.substr(4), y) && y >= 1800 && y <= 3000)
            return YearMonth{y, m};
    }
    return std::nullopt;
}

std::string month_name(int month) { return kMonthNames.at(month - 1); }

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace((unsigned char)s[b])) ++b;
    while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = (char)std::tolower((unsigned char)c);
    return out;
}

std::optional<double> parse_numeric_field(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.back() == '%') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
    if (std::isnan(v) || std::isinf(v)) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, r.ptr);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
    return buf;
}

}  // namespace lendml

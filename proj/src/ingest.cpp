#include "lendml/ingest.hpp"

#include <cmath>
#include <sstream>

#include "lendml/csv.hpp"

namespace lendml {

SchemaMap SchemaMap::defaults() {
    SchemaMap m;
    m.accepted = {
        {"loan_amount", "loan_amnt"},
        {"term", "term"},
        {"installment", "installment"},
        {"emp_length", "emp_length"},
        {"home_ownership", "home_ownership"},
        {"verification_status", "verification_status"},
        {"purpose", "purpose"},
        {"dti", "dti"},
        {"earliest_credit_line", "earliest_cr_line"},
        {"open_credit_lines", "open_acc"},
        {"derogatory_public_records", "pub_rec"},
        {"revolving_utilization", "revol_util"},
        {"total_credit_lines", "total_acc"},
        {"mortgage_credit_lines", "mort_acc"},
        {"bankruptcies", "pub_rec_bankruptcies"},
        {"annual_income", "annual_inc"},
        {"fico", "fico_range_low"},
        {"revolving_balance", "revol_bal"},
        {"date", "issue_d"},
        {"status", "loan_status"},
    };
    m.rejected = {
        {"loan_amount", "Amount Requested"},
        {"date", "Application Date"},
        {"purpose", "Loan Title"},
        {"dti", "Debt-To-Income Ratio"},
        {"emp_length", "Employment Length"},
    };
    return m;
}

size_t ParseSummary::rows_dropped() const {
    size_t n = 0;
    for (const auto& [_, c] : dropped) n += c;
    return n;
}

std::string ParseSummary::to_text() const {
    std::ostringstream os;
    os << "parse summary: " << source_name << "\n";
    os << "rows_read " << rows_read << "\n";
    os << "rows_retained " << rows_retained << "\n";
    for (const auto& [reason, count] : dropped) os << "dropped." << reason << " " << count << "\n";
    return os.str();
}

std::string BuildSummary::to_text(const std::string& name) const {
    std::ostringstream os;
    os << "build summary: " << name << "\n";
    os << "rows_in " << rows_in << "\n";
    os << "rows_out " << rows_out << "\n";
    for (const auto& [reason, count] : dropped) os << "dropped." << reason << " " << count << "\n";
    return os.str();
}

std::optional<double> parse_emp_length(std::string_view s) {
    std::string t = to_lower(trim(s));
    if (t.empty() || t == "n/a" || t == "na") return std::nullopt;
    if (t == "10+ years") return 10.0;
    if (t == "< 1 year") return 0.0;
    // "n year(s)"
    size_t i = 0;
    while (i < t.size() && std::isdigit((unsigned char)t[i])) ++i;
    if (i == 0) return std::nullopt;
    std::string_view rest = trim(std::string_view(t).substr(i));
    if (rest == "year" || rest == "years" || rest.empty()) return (double)std::stoi(t.substr(0, i));
    return std::nullopt;
}

std::optional<double> parse_term_months(std::string_view s) {
    std::string_view t = trim(s);
    size_t i = 0;
    while (i < t.size() && std::isdigit((unsigned char)t[i])) ++i;
    if (i == 0) return std::nullopt;
    return parse_numeric_field(t.substr(0, i));
}

std::string normalize_token(std::string_view s) { return to_lower(trim(s)); }

LoanStatus map_loan_status(std::string_view raw) {
    std::string t = to_lower(trim(raw));
    if (t == "fully paid") return LoanStatus::FullyPaid;
    if (t == "charged off" || t == "default") return LoanStatus::Defaulted;
    return LoanStatus::Other;
}

namespace {

struct MappedColumns {
    std::vector<std::pair<std::string, int>> cols;  // canonical name -> column index
};

MappedColumns resolve_columns(const CsvFileReader& reader,
                              const std::map<std::string, std::string>& mapping) {
    MappedColumns mc;
    std::vector<std::string> absent;
    for (const auto& [canonical, header] : mapping) {
        int idx = reader.column(header);
        if (idx < 0) absent.push_back(header + " (" + canonical + ")");
        else mc.cols.emplace_back(canonical, idx);
    }
    if (!absent.empty()) {
        std::string msg = "missing mapped columns in " + reader.path() + ":";
        for (const auto& a : absent) msg += " " + a;
        fail(msg);
    }
    return mc;
}

ParseResult parse_file(const std::string& path, const std::map<std::string, std::string>& mapping,
                       Source source, const ParseOptions& opts) {
    CsvFileReader reader(path);
    MappedColumns mc = resolve_columns(reader, mapping);

    ParseResult out;
    out.summary.source_name = source == Source::Accepted ? "accepted" : "rejected";
    out.header = reader.header();
    const size_t width = reader.header().size();

    std::vector<std::string> fields;
    while (reader.next(fields)) {
        ++out.summary.rows_read;
        if (fields.size() != width) {
            ++out.summary.dropped["bad_field_count"];
            continue;
        }
        LoanRecord rec;
        rec.source = source;
        for (const auto& [canonical, idx] : mc.cols) {
            std::string v(trim(fields[(size_t)idx]));
            if (v.empty()) rec.fields_raw[canonical] = std::nullopt;
            else rec.fields_raw[canonical] = std::move(v);
        }
        auto date_raw = rec.raw("date");
        auto date = date_raw ? parse_loan_date(*date_raw) : std::nullopt;
        if (date) {
            rec.date = *date;
        } else if (opts.require_date) {
            ++out.summary.dropped["missing_or_unparseable_date"];
            continue;
        }
        if (opts.keep_raw_cells) rec.raw_cells = fields;
        out.records.push_back(std::move(rec));
        ++out.summary.rows_retained;
    }
    return out;
}

std::optional<double> numeric_field(const LoanRecord& rec, const std::string& key) {
    auto raw = rec.raw(key);
    if (!raw) return std::nullopt;
    return parse_numeric_field(*raw);
}

void push_numeric(SampleSet& set, const std::string& name, std::optional<double> v) {
    set.numeric[(size_t)set.numeric_index(name)].push_back(v ? *v : missing_value());
}

void push_categorical(SampleSet& set, const std::string& name, const LoanRecord& rec) {
    auto raw = rec.raw(name);
    set.categorical[(size_t)set.categorical_index(name)].push_back(
        raw ? normalize_token(*raw) : std::string());
}

void append_phase1_row(SampleSet& set, const LoanRecord& rec, int label) {
    push_numeric(set, "dti", numeric_field(rec, "dti"));
    auto emp_raw = rec.raw("emp_length");
    push_numeric(set, "emp_length", emp_raw ? parse_emp_length(*emp_raw) : std::nullopt);
    push_numeric(set, "loan_amount", numeric_field(rec, "loan_amount"));
    push_categorical(set, "purpose", rec);
    set.dates.push_back(rec.date);
    set.labels.push_back(label);
}

SampleSet make_phase1_set() {
    SampleSet set;
    for (const auto& n : features::phase1_numeric) set.add_numeric_column(n);
    for (const auto& n : features::phase1_categorical) set.add_categorical_column(n);
    return set;
}

// log features guard their domain: nonpositive income and negative balances
// become missing rather than -inf.
std::optional<double> log_of(std::optional<double> v) {
    if (!v || *v <= 0.0) return std::nullopt;
    return std::log(*v);
}

std::optional<double> log1p_of(std::optional<double> v) {
    if (!v || *v < 0.0) return std::nullopt;
    return std::log(*v + 1.0);
}

}  // namespace

ParseResult parse_accepted(const std::string& path, const SchemaMap& schema,
                           const ParseOptions& opts) {
    return parse_file(path, schema.accepted, Source::Accepted, opts);
}

ParseResult parse_rejected(const std::string& path, const SchemaMap& schema,
                           const ParseOptions& opts) {
    return parse_file(path, schema.rejected, Source::Rejected, opts);
}

BuildResult build_phase1(const std::vector<LoanRecord>& accepted,
                         const std::vector<LoanRecord>& rejected) {
    if (accepted.empty() || rejected.empty())
        fail("build_phase1: need at least one record of each class "
             "(accepted=" + std::to_string(accepted.size()) +
             ", rejected=" + std::to_string(rejected.size()) + ")");
    BuildResult out;
    out.set = make_phase1_set();
    out.summary.rows_in = accepted.size() + rejected.size();
    for (const auto& rec : accepted) append_phase1_row(out.set, rec, 1);
    for (const auto& rec : rejected) append_phase1_row(out.set, rec, 0);
    out.summary.rows_out = out.set.n_rows();
    out.set.recompute_coverage();
    out.set.check_consistent();
    return out;
}

BuildResult build_phase1_features(const std::vector<LoanRecord>& records) {
    BuildResult out;
    out.set = make_phase1_set();
    out.summary.rows_in = records.size();
    for (const auto& rec : records) append_phase1_row(out.set, rec, -1);
    out.summary.rows_out = out.set.n_rows();
    out.set.recompute_coverage();
    return out;
}

BuildResult build_phase2(const std::vector<LoanRecord>& accepted, BuildMode mode) {
    if (accepted.empty() && mode == BuildMode::Training) fail("build_phase2: no input records");
    BuildResult out;
    SampleSet& set = out.set;
    for (const auto& n : features::phase2_numeric) set.add_numeric_column(n);
    for (const auto& n : features::phase2_categorical) set.add_categorical_column(n);
    out.summary.rows_in = accepted.size();

    for (const auto& rec : accepted) {
        int label = -1;
        if (mode == BuildMode::Training) {
            auto status_raw = rec.raw("status");
            LoanStatus status = status_raw ? map_loan_status(*status_raw) : LoanStatus::Other;
            if (status == LoanStatus::Other) {
                ++out.summary.dropped["status_not_paid_or_defaulted"];
                continue;
            }
            label = status == LoanStatus::Defaulted ? 1 : 0;
        } else {
            auto status_raw = rec.raw("status");
            if (status_raw) {
                LoanStatus status = map_loan_status(*status_raw);
                if (status != LoanStatus::Other) label = status == LoanStatus::Defaulted ? 1 : 0;
            }
        }

        push_numeric(set, "loan_amount", numeric_field(rec, "loan_amount"));
        auto term_raw = rec.raw("term");
        push_numeric(set, "term", term_raw ? parse_term_months(*term_raw) : std::nullopt);
        push_numeric(set, "installment", numeric_field(rec, "installment"));
        auto emp_raw = rec.raw("emp_length");
        push_numeric(set, "emp_length", emp_raw ? parse_emp_length(*emp_raw) : std::nullopt);
        push_numeric(set, "dti", numeric_field(rec, "dti"));

        // elapsed credit history in fractional years, month resolution
        std::optional<double> history;
        if (auto ecl_raw = rec.raw("earliest_credit_line")) {
            if (auto ecl = parse_loan_date(*ecl_raw)) {
                int months = rec.date.index() - ecl->index();
                if (months >= 0) history = months / 12.0;
            }
        }
        push_numeric(set, "earliest_credit_line", history);

        push_numeric(set, "open_credit_lines", numeric_field(rec, "open_credit_lines"));
        push_numeric(set, "derogatory_public_records",
                     numeric_field(rec, "derogatory_public_records"));
        push_numeric(set, "revolving_utilization", numeric_field(rec, "revolving_utilization"));
        push_numeric(set, "total_credit_lines", numeric_field(rec, "total_credit_lines"));
        push_numeric(set, "mortgage_credit_lines", numeric_field(rec, "mortgage_credit_lines"));
        push_numeric(set, "bankruptcies", numeric_field(rec, "bankruptcies"));
        push_numeric(set, "log_annual_income", log_of(numeric_field(rec, "annual_income")));
        push_numeric(set, "fico", numeric_field(rec, "fico"));
        push_numeric(set, "log_revolving_balance", log1p_of(numeric_field(rec, "revolving_balance")));

        push_categorical(set, "home_ownership", rec);
        push_categorical(set, "verification_status", rec);
        push_categorical(set, "purpose", rec);

        set.dates.push_back(rec.date);
        set.labels.push_back(label);
    }
    out.summary.rows_out = set.n_rows();
    if (mode == BuildMode::Training && set.n_rows() == 0)
        fail("build_phase2: zero rows retained after status filtering");
    set.recompute_coverage();
    set.check_consistent();
    return out;
}

}  // namespace lendml

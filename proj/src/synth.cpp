#include "lendml/synth.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "lendml/csv.hpp"
#include "lendml/ingest.hpp"
#include "lendml/rng.hpp"

namespace lendml {

namespace {

using ordered_json = nlohmann::ordered_json;

double round_to(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

double draw_normal(Rng& rng, const NormalDist& d) {
    double v = rng.normal(d.mean, d.stddev);
    v = std::clamp(v, d.clip_lo, d.clip_hi);
    return round_to(v, d.decimals);
}

long draw_int(Rng& rng, const IntDist& d) { return rng.uniform_int(d.lo, d.hi); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// bias making mean sigmoid(logit + b) hit `target` over the realized logits
double solve_bias(const std::vector<double>& logits, double target) {
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        double mean = 0.0;
        for (double z : logits) mean += sigmoid(z + mid);
        mean /= (double)logits.size();
        if (mean < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string emp_length_string(long years) {
    if (years <= 0) return "< 1 year";
    if (years >= 10) return "10+ years";
    if (years == 1) return "1 year";
    return std::to_string(years) + " years";
}

std::string month_year_string(const YearMonth& ym) {
    return month_name(ym.month) + "-" + std::to_string(ym.year);
}

const std::vector<std::pair<std::string, double>> kHomeOwnership = {
    {"MORTGAGE", 0.40}, {"RENT", 0.45}, {"OWN", 0.15}};
const std::vector<std::pair<std::string, double>> kVerification = {
    {"Not Verified", 0.35}, {"Source Verified", 0.30}, {"Verified", 0.35}};
const std::vector<std::string> kEmpTitles = {
    "Teacher", "Engineer", "Nurse", "Sales, Regional Manager", "Driver",
    "Accountant", "Manager", "Analyst"};

std::string draw_weighted(Rng& rng, const std::vector<std::pair<std::string, double>>& table) {
    double u = rng.uniform(), acc = 0.0;
    for (const auto& [token, share] : table) {
        acc += share;
        if (u < acc) return token;
    }
    return table.back().first;
}

struct Request {
    YearMonth date;
    std::string purpose;
    double dti = 0, emp_length = 0, loan_amount = 0;
    bool accepted = false;
    // phase-2 fields (accepted rows only)
    double term = 0, installment = 0, earliest_years = 0;
    long earliest_months = 0;
    double open_lines = 0, derog = 0, revol_util = 0, total_lines = 0, mort_lines = 0,
           bankruptcies = 0, log_income = 0, annual_income = 0, fico = 0, log_revol = 0,
           revol_bal = 0;
    std::string home_ownership, verification;
    bool current = false;
    bool defaulted = false;
    std::string status;
};

}  // namespace

double IntDist::stddev() const {
    double span = (double)(hi - lo + 1);
    return std::sqrt((span * span - 1.0) / 12.0);
}

SyntheticSpec SyntheticSpec::defaults() {
    SyntheticSpec s;
    s.phase1_weights = {{"dti", -3.2}, {"emp_length", 2.2}, {"loan_amount", -3.2}};
    s.phase2_weights = {
        {"loan_amount", 0.9},    {"term", 1.1},
        {"installment", 1.2},    {"emp_length", -0.5},
        {"dti", 2.3},            {"earliest_credit_line", -0.8},
        {"open_credit_lines", 0.5}, {"derogatory_public_records", 0.6},
        {"revolving_utilization", 1.9}, {"total_credit_lines", -0.5},
        {"mortgage_credit_lines", -0.6}, {"bankruptcies", 0.8},
        {"log_annual_income", -1.6}, {"fico", -2.8},
        {"log_revolving_balance", 0.9}};
    s.purposes = {{"credit_card", 0.30, 0.0, 0.0},
                  {"debt_consolidation", 0.35, 0.0, 0.0},
                  {"home_improvement", 0.12, 0.0, 0.0},
                  {"car", 0.08, 0.0, 0.0},
                  {"medical", 0.08, 0.0, 0.0},
                  {"vacation", 0.07, 0.0, 0.0}};
    return s;
}

void SyntheticSpec::validate() const {
    if (n_requests == 0) fail("synthetic spec: n_requests must be positive");
    if (!(accept_fraction > 0.0 && accept_fraction < 1.0) && !phase1_bias)
        fail("synthetic spec: accept_fraction must lie in (0,1)");
    if (!(default_fraction > 0.0 && default_fraction < 1.0) && !phase2_bias)
        fail("synthetic spec: default_fraction must lie in (0,1)");
    if (current_fraction < 0.0 || current_fraction >= 1.0)
        fail("synthetic spec: current_fraction must lie in [0,1)");
    if (n_months <= 0) fail("synthetic spec: n_months must be positive");
    if (purposes.empty()) fail("synthetic spec: at least one purpose required");
    double total = 0.0;
    for (const auto& p : purposes) {
        if (p.share <= 0.0) fail("synthetic spec: purpose share must be positive: " + p.token);
        total += p.share;
    }
    if (total <= 0.0) fail("synthetic spec: purpose shares must sum to a positive value");
    if (cohort && (cohort->share <= 0.0 || cohort->share >= 1.0))
        fail("synthetic spec: cohort share must lie in (0,1)");
    for (const NormalDist* d : {&dti, &loan_amount, &installment, &revolving_utilization,
                                &log_annual_income, &log_revolving_balance})
        if (d->stddev <= 0.0) fail("synthetic spec: normal stddev must be positive");
    for (const IntDist* d : {&emp_length, &earliest_credit_months, &open_credit_lines,
                             &derogatory_public_records, &total_credit_lines,
                             &mortgage_credit_lines, &bankruptcies, &fico})
        if (d->hi < d->lo) fail("synthetic spec: integer range inverted");
    if (term_prob_36 < 0.0 || term_prob_36 > 1.0) fail("synthetic spec: term_prob_36 out of range");
}

std::string GroundTruth::to_json() const {
    ordered_json j;
    j["schema"] = "synthetic-truth/1";
    j["seed"] = seed;
    j["n_requests"] = n_requests;
    j["n_accepted"] = n_accepted;
    j["n_rejected"] = n_rejected;
    j["n_phase2"] = n_phase2;
    j["n_current"] = n_current;
    j["phase1_bias"] = phase1_bias;
    j["phase2_bias"] = phase2_bias;
    ordered_json w1, w2;
    for (const auto& [k, v] : phase1_weights) w1[k] = v;
    for (const auto& [k, v] : phase2_weights) w2[k] = v;
    j["phase1_weights"] = w1;
    j["phase2_weights"] = w2;
    ordered_json sc;
    for (const auto& [k, ms] : scale) sc[k] = {{"mean", ms.first}, {"std", ms.second}};
    j["feature_scale"] = sc;
    j["purpose_accept_offsets"] = purpose_accept_offsets;
    j["purpose_default_offsets"] = purpose_default_offsets;
    if (cohort_token) {
        j["cohort_token"] = *cohort_token;
        j["cohort_inverted"] = cohort_inverted;
    }
    return j.dump(2) + "\n";
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                 const SyntheticPaths& paths) {
    spec.validate();

    Rng rng_feat(substream_seed(seed, 1));
    Rng rng_label(substream_seed(seed, 2));
    Rng rng_p2(substream_seed(seed, 3));
    Rng rng_misc(substream_seed(seed, 4));

    // purpose table, cohort share carved out of the configured purposes
    std::vector<PurposeShare> purposes = spec.purposes;
    double total_share = 0.0;
    for (const auto& p : purposes) total_share += p.share;
    double scale_to = spec.cohort ? (1.0 - spec.cohort->share) : 1.0;
    for (auto& p : purposes) p.share = p.share / total_share * scale_to;
    if (spec.cohort)
        purposes.push_back({spec.cohort->token, spec.cohort->share, spec.cohort->accept_offset,
                            spec.cohort->default_offset});

    // z-scoring constants per feature; these define the weight space
    std::map<std::string, std::pair<double, double>> scale;
    scale["dti"] = {spec.dti.mean, spec.dti.stddev};
    scale["emp_length"] = {spec.emp_length.mean(), spec.emp_length.stddev()};
    scale["loan_amount"] = {spec.loan_amount.mean, spec.loan_amount.stddev};
    {
        double p = spec.term_prob_36;
        double m = 36.0 * p + 60.0 * (1.0 - p);
        double var = p * (36.0 - m) * (36.0 - m) + (1.0 - p) * (60.0 - m) * (60.0 - m);
        scale["term"] = {m, std::sqrt(std::max(var, 1e-12))};
    }
    scale["installment"] = {spec.installment.mean, spec.installment.stddev};
    scale["earliest_credit_line"] = {spec.earliest_credit_months.mean() / 12.0,
                                     spec.earliest_credit_months.stddev() / 12.0};
    scale["open_credit_lines"] = {spec.open_credit_lines.mean(), spec.open_credit_lines.stddev()};
    scale["derogatory_public_records"] = {spec.derogatory_public_records.mean(),
                                          spec.derogatory_public_records.stddev()};
    scale["revolving_utilization"] = {spec.revolving_utilization.mean,
                                      spec.revolving_utilization.stddev};
    scale["total_credit_lines"] = {spec.total_credit_lines.mean(),
                                   spec.total_credit_lines.stddev()};
    scale["mortgage_credit_lines"] = {spec.mortgage_credit_lines.mean(),
                                      spec.mortgage_credit_lines.stddev()};
    scale["bankruptcies"] = {spec.bankruptcies.mean(), spec.bankruptcies.stddev()};
    scale["log_annual_income"] = {spec.log_annual_income.mean, spec.log_annual_income.stddev};
    scale["fico"] = {spec.fico.mean(), spec.fico.stddev()};
    scale["log_revolving_balance"] = {spec.log_revolving_balance.mean,
                                      spec.log_revolving_balance.stddev};

    auto zscore = [&scale](const std::string& name, double v) {
        const auto& [m, s] = scale.at(name);
        return (v - m) / s;
    };

    const size_t n = spec.n_requests;
    std::vector<Request> reqs(n);
    std::vector<double> logits1(n, 0.0);

    for (size_t i = 0; i < n; ++i) {
        Request& r = reqs[i];
        int offset = (int)rng_feat.uniform_int(0, spec.n_months - 1);
        r.date = YearMonth::from_index(spec.start_month.index() + offset);
        double u = rng_feat.uniform(), acc = 0.0;
        r.purpose = purposes.back().token;
        double p1_off = purposes.back().accept_offset;
        for (const auto& p : purposes) {
            acc += p.share;
            if (u < acc) {
                r.purpose = p.token;
                p1_off = p.accept_offset;
                break;
            }
        }
        r.dti = draw_normal(rng_feat, spec.dti);
        r.emp_length = (double)draw_int(rng_feat, spec.emp_length);
        r.loan_amount = draw_normal(rng_feat, spec.loan_amount);

        double z = p1_off;
        for (const auto& [name, w] : spec.phase1_weights) {
            double x = name == "dti" ? r.dti
                     : name == "emp_length" ? r.emp_length
                     : name == "loan_amount" ? r.loan_amount
                     : (fail("synthetic spec: unknown phase-1 weight feature: " + name), 0.0);
            z += w * zscore(name, x);
        }
        logits1[i] = z;
    }

    double b1 = spec.phase1_bias ? *spec.phase1_bias : solve_bias(logits1, spec.accept_fraction);
    for (double& z : logits1) z += b1;

    for (size_t i = 0; i < n; ++i) reqs[i].accepted = rng_label.bernoulli(sigmoid(logits1[i]));

    // phase-2 covariates and default logits for accepted rows
    std::vector<size_t> accepted_idx;
    std::vector<double> logits2;
    const int ramp_start = spec.start_month.index() + spec.n_months - 12;
    for (size_t i = 0; i < n; ++i) {
        Request& r = reqs[i];
        if (!r.accepted) continue;
        accepted_idx.push_back(i);
        long term = rng_p2.bernoulli(spec.term_prob_36) ? 36 : 60;
        r.term = (double)term;
        r.installment = draw_normal(rng_p2, spec.installment);
        r.home_ownership = draw_weighted(rng_p2, kHomeOwnership);
        r.verification = draw_weighted(rng_p2, kVerification);
        r.earliest_months = draw_int(rng_p2, spec.earliest_credit_months);
        r.earliest_years = (double)r.earliest_months / 12.0;
        r.open_lines = (double)draw_int(rng_p2, spec.open_credit_lines);
        r.derog = (double)draw_int(rng_p2, spec.derogatory_public_records);
        r.revol_util = draw_normal(rng_p2, spec.revolving_utilization);
        r.total_lines = (double)draw_int(rng_p2, spec.total_credit_lines);
        r.mort_lines = (double)draw_int(rng_p2, spec.mortgage_credit_lines);
        r.bankruptcies = (double)draw_int(rng_p2, spec.bankruptcies);
        double g = rng_p2.normal(spec.log_annual_income.mean, spec.log_annual_income.stddev);
        r.annual_income = round_to(std::exp(g), 2);
        r.log_income = std::log(r.annual_income);
        r.fico = (double)draw_int(rng_p2, spec.fico);
        double h = rng_p2.normal(spec.log_revolving_balance.mean, spec.log_revolving_balance.stddev);
        r.revol_bal = std::max(0.0, round_to(std::exp(h) - 1.0, 2));
        r.log_revol = std::log(r.revol_bal + 1.0);

        double z = 0.0;
        for (const auto& [name, w] : spec.phase2_weights) {
            double x;
            if (name == "loan_amount") x = r.loan_amount;
            else if (name == "term") x = r.term;
            else if (name == "installment") x = r.installment;
            else if (name == "emp_length") x = r.emp_length;
            else if (name == "dti") x = r.dti;
            else if (name == "earliest_credit_line") x = r.earliest_years;
            else if (name == "open_credit_lines") x = r.open_lines;
            else if (name == "derogatory_public_records") x = r.derog;
            else if (name == "revolving_utilization") x = r.revol_util;
            else if (name == "total_credit_lines") x = r.total_lines;
            else if (name == "mortgage_credit_lines") x = r.mort_lines;
            else if (name == "bankruptcies") x = r.bankruptcies;
            else if (name == "log_annual_income") x = r.log_income;
            else if (name == "fico") x = r.fico;
            else if (name == "log_revolving_balance") x = r.log_revol;
            else { fail("synthetic spec: unknown phase-2 weight feature: " + name); x = 0; }
            z += w * zscore(name, x);
        }
        bool in_cohort = spec.cohort && r.purpose == spec.cohort->token;
        for (const auto& p : purposes)
            if (p.token == r.purpose) z += p.default_offset;
        if (in_cohort && spec.cohort->invert_phase2) z = -z;
        if (spec.final_year_default_logit_drop != 0.0 && r.date.index() >= ramp_start) {
            double frac = (double)(r.date.index() - ramp_start + 1) / 12.0;
            z -= spec.final_year_default_logit_drop * frac;
        }
        logits2.push_back(z);
    }
    if (accepted_idx.empty()) fail("synthetic generation: no rows were accepted; adjust spec");

    double b2 = spec.phase2_bias ? *spec.phase2_bias : solve_bias(logits2, spec.default_fraction);
    for (double& z : logits2) z += b2;

    for (size_t k = 0; k < accepted_idx.size(); ++k) {
        Request& r = reqs[accepted_idx[k]];
        r.defaulted = rng_label.bernoulli(sigmoid(logits2[k]));
    }

    size_t n_current = 0;
    for (size_t k = 0; k < accepted_idx.size(); ++k) {
        Request& r = reqs[accepted_idx[k]];
        r.current = rng_misc.bernoulli(spec.current_fraction);
        if (r.current) {
            r.status = "Current";
            ++n_current;
        } else if (r.defaulted) {
            r.status = rng_misc.bernoulli(0.9) ? "Charged Off" : "Default";
        } else {
            r.status = "Fully Paid";
        }
    }

    // --- write files ---
    CsvWriter acc(paths.accepted_csv);
    acc.write_row({"id", "loan_amnt", "term", "int_rate", "installment", "grade", "emp_title",
                   "emp_length", "home_ownership", "annual_inc", "verification_status", "issue_d",
                   "loan_status", "purpose", "dti", "earliest_cr_line", "fico_range_low",
                   "fico_range_high", "open_acc", "pub_rec", "revol_bal", "revol_util",
                   "total_acc", "mort_acc", "pub_rec_bankruptcies"});
    size_t row_id = 0;
    for (size_t i : accepted_idx) {
        const Request& r = reqs[i];
        ++row_id;
        double int_rate = round_to(5.0 + 20.0 * rng_misc.uniform(), 2);
        char grade = (char)('A' + rng_misc.uniform_int(0, 6));
        const std::string& title = kEmpTitles[(size_t)rng_misc.uniform_int(0, (long)kEmpTitles.size() - 1)];
        YearMonth ecl = YearMonth::from_index(r.date.index() - (int)r.earliest_months);
        acc.write_row({std::to_string(row_id),
                       format_double(r.loan_amount),
                       " " + std::to_string((long)r.term) + " months",
                       format_fixed(int_rate, 2) + "%",
                       format_double(r.installment),
                       std::string(1, grade),
                       title,
                       emp_length_string((long)r.emp_length),
                       r.home_ownership,
                       format_double(r.annual_income),
                       r.verification,
                       month_year_string(r.date),
                       r.status,
                       r.purpose,
                       format_double(r.dti),
                       month_year_string(ecl),
                       format_double(r.fico),
                       format_double(r.fico + 4.0),
                       format_double(r.open_lines),
                       format_double(r.derog),
                       format_double(r.revol_bal),
                       format_double(r.revol_util),
                       format_double(r.total_lines),
                       format_double(r.mort_lines),
                       format_double(r.bankruptcies)});
    }

    CsvWriter rej(paths.rejected_csv);
    rej.write_row({"Amount Requested", "Application Date", "Loan Title", "Risk_Score",
                   "Debt-To-Income Ratio", "Zip Code", "State", "Employment Length",
                   "Policy Code"});
    for (const Request& r : reqs) {
        if (r.accepted) continue;
        rej.write_row({format_double(r.loan_amount),
                       to_string(r.date) + "-01",
                       r.purpose,
                       "",
                       format_fixed(r.dti, 2) + "%",
                       "940xx",
                       "CA",
                       emp_length_string((long)r.emp_length),
                       "0"});
    }

    // --- assemble in-memory mirror and ground truth ---
    SyntheticData out;
    GroundTruth& t = out.truth;
    t.seed = seed;
    t.n_requests = n;
    t.n_accepted = accepted_idx.size();
    t.n_rejected = n - accepted_idx.size();
    t.n_current = n_current;
    t.n_phase2 = accepted_idx.size() - n_current;
    t.phase1_bias = b1;
    t.phase2_bias = b2;
    for (const auto& name : features::phase1_numeric) {
        auto it = spec.phase1_weights.find(name);
        t.phase1_weights.emplace_back(name, it == spec.phase1_weights.end() ? 0.0 : it->second);
    }
    for (const auto& name : features::phase2_numeric) {
        auto it = spec.phase2_weights.find(name);
        t.phase2_weights.emplace_back(name, it == spec.phase2_weights.end() ? 0.0 : it->second);
    }
    t.scale = scale;
    for (const auto& p : purposes) {
        t.purpose_accept_offsets[p.token] = p.accept_offset;
        t.purpose_default_offsets[p.token] = p.default_offset;
    }
    if (spec.cohort) {
        t.cohort_token = spec.cohort->token;
        t.cohort_inverted = spec.cohort->invert_phase2;
    }

    // phase-1 mirror in build_phase1 output order: accepted rows, then rejected
    for (const auto& nm : features::phase1_numeric) out.phase1.add_numeric_column(nm);
    for (const auto& nm : features::phase1_categorical) out.phase1.add_categorical_column(nm);
    auto push1 = [&](const Request& r, double logit, int label) {
        out.phase1.numeric[0].push_back(r.dti);
        out.phase1.numeric[1].push_back(r.emp_length);
        out.phase1.numeric[2].push_back(r.loan_amount);
        out.phase1.categorical[0].push_back(r.purpose);
        out.phase1.dates.push_back(r.date);
        out.phase1.labels.push_back(label);
        out.phase1_logits.push_back(logit);
    };
    for (size_t i : accepted_idx) push1(reqs[i], logits1[i], 1);
    for (size_t i = 0; i < n; ++i)
        if (!reqs[i].accepted) push1(reqs[i], logits1[i], 0);
    out.phase1.recompute_coverage();

    // phase-2 mirror: resolved-outcome accepted rows, in accepted-file order
    for (const auto& nm : features::phase2_numeric) out.phase2.add_numeric_column(nm);
    for (const auto& nm : features::phase2_categorical) out.phase2.add_categorical_column(nm);
    for (size_t k = 0; k < accepted_idx.size(); ++k) {
        const Request& r = reqs[accepted_idx[k]];
        if (r.current) continue;
        const double vals[] = {r.loan_amount, r.term, r.installment, r.emp_length, r.dti,
                               r.earliest_years, r.open_lines, r.derog, r.revol_util,
                               r.total_lines, r.mort_lines, r.bankruptcies, r.log_income,
                               r.fico, r.log_revol};
        for (size_t c = 0; c < out.phase2.numeric.size(); ++c)
            out.phase2.numeric[c].push_back(vals[c]);
        out.phase2.categorical[0].push_back(normalize_token(r.home_ownership));
        out.phase2.categorical[1].push_back(normalize_token(r.verification));
        out.phase2.categorical[2].push_back(r.purpose);
        out.phase2.dates.push_back(r.date);
        out.phase2.labels.push_back(r.defaulted ? 1 : 0);
        out.phase2_logits.push_back(logits2[k]);
    }
    out.phase2.recompute_coverage();

    if (!paths.truth_json.empty()) {
        std::ofstream f(paths.truth_json, std::ios::binary);
        if (!f) fail("cannot write truth sidecar: " + paths.truth_json);
        f << t.to_json();
    }
    return out;
}

}  // namespace lendml

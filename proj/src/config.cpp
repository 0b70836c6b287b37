#include "lendml/config.hpp"

#include <nlohmann/json.hpp>

#include "lendml/artifact.hpp"

namespace lendml {

namespace {
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

YearMonth parse_ym_or_fail(const std::string& s, const char* what) {
    auto ym = parse_year_month(s);
    if (!ym) fail(std::string("config: cannot parse ") + what + ": " + s);
    return *ym;
}

}  // namespace

std::string to_string(CohortScope s) {
    return s == CohortScope::TrainAndTest ? "train_and_test" : "test_only";
}

CohortScope cohort_scope_from_string(const std::string& s) {
    if (s == "train_and_test") return CohortScope::TrainAndTest;
    if (s == "test_only") return CohortScope::TestOnly;
    fail("config: unknown cohort scope: " + s);
}

double RunConfig::effective_train_fraction() const {
    if (train_fraction >= 0.0) return train_fraction;
    return phase == 1 ? 0.75 : 0.90;
}

bool RunConfig::effective_class_weighting() const {
    return class_weighting ? *class_weighting : phase == 1;
}

bool RunConfig::effective_downsample() const {
    return downsample ? *downsample : phase == 2;
}

GridSpec RunConfig::grid_spec() const {
    GridSpec spec;
    spec.family = family;
    spec.alphas = alphas;
    spec.penalties = penalties;
    spec.hidden1 = hidden1;
    spec.hidden2 = hidden2;
    spec.dropout = dropout;
    spec.mlp_l2_alpha = mlp_l2_alpha;
    spec.train = train;
    spec.train.seed = seed;
    return spec;
}

std::string RunConfig::echo_json() const {
    ordered_json j;
    j["phase"] = phase;
    j["accepted_csv"] = accepted_csv;
    if (phase == 1) j["rejected_csv"] = rejected_csv;
    j["seed"] = seed;
    j["train_fraction"] = effective_train_fraction();
    j["fit_val_fraction"] = fit_val_fraction;
    j["cutoff_date"] = cutoff_date ? to_string(*cutoff_date) : "";
    j["coverage_threshold"] = coverage_threshold;
    j["objective"] = to_string(objective);
    j["family"] = to_string(family);
    j["class_weighting"] = effective_class_weighting();
    j["downsample"] = effective_downsample();
    j["numeric_only"] = numeric_only;
    if (cohort) {
        j["cohort_token"] = cohort->token;
        j["cohort_scope"] = to_string(cohort->scope);
    }
    j["train"] = {{"learning_rate", train.learning_rate},
                  {"batch_size", train.batch_size},
                  {"max_epochs", train.max_epochs},
                  {"patience", train.patience}};
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    read_if(j, "accepted_csv", c.accepted_csv);
    read_if(j, "rejected_csv", c.rejected_csv);
    read_if(j, "out_dir", c.out_dir);
    read_if(j, "phase", c.phase);
    if (c.phase != 1 && c.phase != 2) fail("config: phase must be 1 or 2");
    read_if(j, "seed", c.seed);
    read_if(j, "train_fraction", c.train_fraction);
    read_if(j, "fit_val_fraction", c.fit_val_fraction);
    if (j.contains("cutoff_date") && !j.at("cutoff_date").get<std::string>().empty())
        c.cutoff_date = parse_ym_or_fail(j.at("cutoff_date").get<std::string>(), "cutoff_date");
    read_if(j, "coverage_threshold", c.coverage_threshold);
    if (j.contains("objective")) c.objective = objective_from_string(j.at("objective"));
    read_if(j, "numeric_only", c.numeric_only);
    if (j.contains("class_weighting")) c.class_weighting = j.at("class_weighting").get<bool>();
    if (j.contains("downsample")) c.downsample = j.at("downsample").get<bool>();

    if (j.contains("model")) {
        const json& m = j.at("model");
        if (m.contains("family")) c.family = model_family_from_string(m.at("family"));
        read_if(m, "alphas", c.alphas);
        if (m.contains("penalties")) {
            c.penalties.clear();
            for (const auto& p : m.at("penalties"))
                c.penalties.push_back(penalty_from_string(p.get<std::string>()));
        }
        read_if(m, "hidden1", c.hidden1);
        read_if(m, "hidden2", c.hidden2);
        read_if(m, "dropout", c.dropout);
        read_if(m, "mlp_l2_alpha", c.mlp_l2_alpha);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        read_if(t, "learning_rate", c.train.learning_rate);
        read_if(t, "batch_size", c.train.batch_size);
        read_if(t, "max_epochs", c.train.max_epochs);
        read_if(t, "patience", c.train.patience);
    }
    if (j.contains("cohort")) {
        CohortConfig cc;
        cc.token = j.at("cohort").at("token").get<std::string>();
        if (j.at("cohort").contains("scope"))
            cc.scope = cohort_scope_from_string(j.at("cohort").at("scope"));
        c.cohort = cc;
    }
    if (j.contains("column_map")) {
        const json& m = j.at("column_map");
        if (m.contains("accepted"))
            for (const auto& [k, v] : m.at("accepted").items())
                c.schema.accepted[k] = v.get<std::string>();
        if (m.contains("rejected"))
            for (const auto& [k, v] : m.at("rejected").items())
                c.schema.rejected[k] = v.get<std::string>();
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(read_text_file(path));
}

namespace {

void read_normal(const json& j, NormalDist& d) {
    read_if(j, "mean", d.mean);
    read_if(j, "std", d.stddev);
    read_if(j, "decimals", d.decimals);
    read_if(j, "clip_lo", d.clip_lo);
    read_if(j, "clip_hi", d.clip_hi);
}

void read_int_dist(const json& j, IntDist& d) {
    read_if(j, "lo", d.lo);
    read_if(j, "hi", d.hi);
}

}  // namespace

SynthConfig synth_config_from_json(const std::string& text) {
    json j = json::parse(text);
    SynthConfig c;
    SyntheticSpec& s = c.spec;
    read_if(j, "seed", c.seed);
    read_if(j, "out_dir", c.out_dir);
    read_if(j, "n_requests", s.n_requests);
    read_if(j, "accept_fraction", s.accept_fraction);
    read_if(j, "default_fraction", s.default_fraction);
    read_if(j, "current_fraction", s.current_fraction);
    if (j.contains("phase1_bias")) s.phase1_bias = j.at("phase1_bias").get<double>();
    if (j.contains("phase2_bias")) s.phase2_bias = j.at("phase2_bias").get<double>();
    if (j.contains("phase1_weights"))
        s.phase1_weights = j.at("phase1_weights").get<std::map<std::string, double>>();
    if (j.contains("phase2_weights"))
        s.phase2_weights = j.at("phase2_weights").get<std::map<std::string, double>>();
    if (j.contains("start_month"))
        s.start_month = parse_ym_or_fail(j.at("start_month").get<std::string>(), "start_month");
    read_if(j, "n_months", s.n_months);
    read_if(j, "final_year_default_logit_drop", s.final_year_default_logit_drop);
    if (j.contains("purposes")) {
        s.purposes.clear();
        for (const auto& p : j.at("purposes")) {
            PurposeShare ps;
            ps.token = p.at("token").get<std::string>();
            ps.share = p.at("share").get<double>();
            read_if(p, "accept_offset", ps.accept_offset);
            read_if(p, "default_offset", ps.default_offset);
            s.purposes.push_back(ps);
        }
    }
    if (j.contains("cohort")) {
        const json& cj = j.at("cohort");
        CohortSpec cs;
        read_if(cj, "token", cs.token);
        cs.share = cj.at("share").get<double>();
        read_if(cj, "invert_phase2", cs.invert_phase2);
        read_if(cj, "accept_offset", cs.accept_offset);
        read_if(cj, "default_offset", cs.default_offset);
        s.cohort = cs;
    }
    if (j.contains("distributions")) {
        const json& d = j.at("distributions");
        if (d.contains("dti")) read_normal(d.at("dti"), s.dti);
        if (d.contains("loan_amount")) read_normal(d.at("loan_amount"), s.loan_amount);
        if (d.contains("installment")) read_normal(d.at("installment"), s.installment);
        if (d.contains("revolving_utilization"))
            read_normal(d.at("revolving_utilization"), s.revolving_utilization);
        if (d.contains("log_annual_income"))
            read_normal(d.at("log_annual_income"), s.log_annual_income);
        if (d.contains("log_revolving_balance"))
            read_normal(d.at("log_revolving_balance"), s.log_revolving_balance);
        if (d.contains("emp_length")) read_int_dist(d.at("emp_length"), s.emp_length);
        if (d.contains("earliest_credit_months"))
            read_int_dist(d.at("earliest_credit_months"), s.earliest_credit_months);
        if (d.contains("open_credit_lines"))
            read_int_dist(d.at("open_credit_lines"), s.open_credit_lines);
        if (d.contains("derogatory_public_records"))
            read_int_dist(d.at("derogatory_public_records"), s.derogatory_public_records);
        if (d.contains("total_credit_lines"))
            read_int_dist(d.at("total_credit_lines"), s.total_credit_lines);
        if (d.contains("mortgage_credit_lines"))
            read_int_dist(d.at("mortgage_credit_lines"), s.mortgage_credit_lines);
        if (d.contains("bankruptcies")) read_int_dist(d.at("bankruptcies"), s.bankruptcies);
        if (d.contains("fico")) read_int_dist(d.at("fico"), s.fico);
        if (d.contains("term_prob_36")) s.term_prob_36 = d.at("term_prob_36").get<double>();
    }
    return c;
}

SynthConfig load_synth_config(const std::string& path) {
    return synth_config_from_json(read_text_file(path));
}

}  // namespace lendml

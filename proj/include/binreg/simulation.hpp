#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "binreg/bootstrap.hpp"

namespace binreg {

// Pilot rule used inside each replicate. FixedFormula is the 0.745*n^(-1/5)
// reference value for scenario 1, where the regression truth is known; Aicc
// is the data-driven choice and the default for scenario 2.
enum class PilotRule { FixedFormula, Aicc };

PilotRule default_pilot_rule(int scenario_id);

struct ScenarioSpec {
    int id = 1;  // 1 or 2
    int n = 250;
    std::vector<double> eval_points{0.0};
    int m_replicates = 500;
    double alpha = 0.05;
    BootstrapConfig bootstrap;  // all three methods run; bootstrap.method is ignored
    PilotRule pilot_rule = PilotRule::FixedFormula;
};

void validate(const ScenarioSpec& spec);

// Scenario 1 truth: logistic(3 sin x), predictor uniform on (-pi, pi).
double scenario1_truth(double x);

// Scenario 2 truth: logistic(0.088 + 0.770 x), predictor a two-component
// normal mixture 0.45*N(-1, 0.5^2) + 0.55*N(0.8, 0.5^2).
double scenario2_truth(double x);

double scenario_truth(int scenario_id, double x);

// Regression-optimal bandwidth for scenario 1 at sample size n.
Bandwidth scenario1_pilot(long n);

Sample draw_scenario_sample(const ScenarioSpec& spec, Rng& rng);

// Aggregates for one (method, evaluation point) cell of the study, plus the
// raw per-replicate values for box-plot style dumps.
struct CoverageCell {
    double x = 0.0;
    IntervalMethod method = IntervalMethod::Wald;
    double coverage = 0.0;     // failed replicates count as non-covering
    double mean_length = 0.0;  // over replicates whose interval was built
    int failures = 0;
    double h_min = 0.0, h_q25 = 0.0, h_median = 0.0, h_q75 = 0.0, h_max = 0.0;
    std::vector<double> lengths;     // NaN where construction failed
    std::vector<double> selected_h;  // NaN where construction failed
};

struct CoverageReport {
    ScenarioSpec spec;
    std::vector<CoverageCell> cells;  // eval point major, method minor
};

// The full coverage study: per replicate, draw a sample, run the bootstrap
// bandwidth selection for each method at each evaluation point, build the
// interval at the chosen bandwidth and record whether it covers the scenario
// truth. Deterministic in spec.bootstrap.seed regardless of thread count.
CoverageReport run_coverage_study(const ScenarioSpec& spec, int max_threads = 0);

// Long-format CSV: scenario,n,x,method,coverage,mean_length,h_q25,h_median,h_q75.
void write_report_csv(std::ostream& out, const CoverageReport& report);

// Per-replicate dump: scenario,n,x,method,replicate,length,selected_h.
void write_report_samples_csv(std::ostream& out, const CoverageReport& report);

nlohmann::json report_json(const CoverageReport& report);

}  // namespace binreg

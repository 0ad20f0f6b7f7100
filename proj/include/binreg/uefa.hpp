#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "binreg/bootstrap.hpp"
#include "binreg/conditional_ci.hpp"

namespace binreg {

enum class Competition { ChampionsLeague, EuropaLeague };

// One two-legged knockout tie. The qualification outcome is an input column;
// aggregate scores, away goals and shoot-outs are not recomputed here.
struct TieRecord {
    std::string season;
    Competition competition = Competition::ChampionsLeague;
    std::string round;
    std::string flht;  // first-leg home team
    std::string slht;  // second-leg home team
    double c1 = 0.0;   // FLHT club coefficient
    double c2 = 0.0;   // SLHT club coefficient
    bool slht_qualified = false;
    bool extra_time = false;
};

// CSV loader. Expected header, exactly:
//   season,competition,round,flht,slht,c1,c2,slht_qualified,extra_time
// with booleans encoded as 0/1. Throws SchemaError on a bad header and
// ParseError (with 1-based line number) on the first malformed row.
std::vector<TieRecord> load_ties(const std::filesystem::path& path);

// Clubs can enter with a coefficient of zero (new federations); they are
// given this floor value before taking logarithms.
constexpr double default_min_coefficient = 0.001;

// Strength-imbalance predictor X = log(c2/c1) with the zero floor applied.
double build_predictor(const TieRecord& tie, double min_coefficient = default_min_coefficient);

// Predictor/outcome sample from a set of ties, optionally dropping ties
// decided after extra time.
Sample ties_to_sample(const std::vector<TieRecord>& ties, bool exclude_extra_time);

struct LogisticFit {
    double alpha_hat = 0.0;  // intercept
    double beta_hat = 0.0;   // slope
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // inverse observed information
    bool converged = false;
    int iterations = 0;
    double deviance = 0.0;
};

// Maximum-likelihood fit of logit(p) = alpha + beta*x by iteratively
// reweighted least squares. Converges when the largest score component drops
// below 1e-8 or the relative log-likelihood change below 1e-10. Throws
// DegenerateResponses when all responses are equal and SeparationError when
// the slope runs away (|beta| > 50).
LogisticFit fit_logistic(const Sample& sample);

// Wald interval for the intercept mapped through the logistic function,
// giving an interval for p(0).
IntervalEstimate logistic_p0_interval(const LogisticFit& fit, double alpha);

struct GofResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Grouped-deviance goodness-of-fit test against the saturated model.
// Observations are grouped by x rounded to 3 decimals; with a continuous
// covariate this test is known to be fragile and is reported as-is. Throws
// TooFewGroups when the grouping leaves 2 groups or fewer.
GofResult deviance_gof(const LogisticFit& fit, const Sample& sample);

struct AnalysisOptions {
    bool exclude_extra_time = false;
    double alpha = 0.05;
    BootstrapConfig bootstrap;
};

struct Curve {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

struct MethodAnalysis {
    IntervalMethod method = IntervalMethod::Wald;
    CoverageCurve curve;
    IntervalEstimate interval_at_zero{};
};

struct AnalysisReport {
    long n_used = 0;
    long n_excluded = 0;
    double alpha = 0.05;
    double h0 = 0.0;       // corrected-AIC pilot bandwidth
    double p0_hat = 0.0;   // NW estimate at x = 0 under h0
    std::vector<MethodAnalysis> methods;  // Wald, Wilson, Agresti-Coull
    double density_bandwidth = 0.0;
    Curve density_curve;  // kernel density of the predictor
    Curve nw_curve;       // NW regression curve under h0
    long positive_x = 0;
    IntervalEstimate positive_x_wilson{};
    LogisticFit logistic;
    IntervalEstimate logistic_p0{};
    GofResult gof;
    bool slha_significant = false;  // Wilson lower bound at x = 0 above 1/2
};

// Full second-leg home advantage analysis: pilot bandwidth, point estimate
// at x = 0, bootstrap-selected bandwidth and interval per method, density
// and regression curves, positive-X proportion, and the logistic baseline.
AnalysisReport run_slha_analysis(const std::vector<TieRecord>& ties,
                                 const AnalysisOptions& options, int max_threads = 0);

nlohmann::json analysis_json(const AnalysisReport& report);
void write_analysis_text(std::ostream& out, const AnalysisReport& report);

}  // namespace binreg

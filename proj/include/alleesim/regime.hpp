#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alleesim/fitness.hpp"

namespace alleesim {

enum class EstimateMethod { ClosedForm, Quadrature, MonteCarlo };

const char* estimate_method_name(EstimateMethod m);

// One theorem quantity. Closed-form values are exact (std_error 0);
// quadrature values carry the integrator's error bound; Monte Carlo values
// carry the sample standard error and draw count.
struct CriterionEstimate {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    EstimateMethod method = EstimateMethod::ClosedForm;
    long n_draws = 0;

    bool exact() const { return method == EstimateMethod::ClosedForm; }
    // Sign of the value if it clears its 99% confidence band, else 0.
    int confident_sign() const;
};

enum class Regime {
    StochasticPersistence,
    UnconditionalExtinction,
    UnboundedGrowth,
    ConditionalPersistence,
    LocalExtinctionOnly,
    Indeterminate,
};

const char* regime_name(Regime r);

struct RegimeReport {
    std::vector<CriterionEstimate> estimates;
    Regime regime = Regime::Indeterminate;
    std::string applicable_theorem;
    std::vector<std::string> notes;

    const CriterionEstimate* find(std::string_view name) const;
    std::string machine_line() const;
    std::string human_text() const;
};

// Where to evaluate E[log f(., xi)].
struct LogMeanAt {
    enum Where { Zero, Infinity, Finite } where = Zero;
    double x = 0.0;

    static LogMeanAt zero() { return {Zero, 0.0}; }
    static LogMeanAt infinity() { return {Infinity, 0.0}; }
    static LogMeanAt at(double x) { return {Finite, x}; }
};

struct EstimateOptions {
    long n_draws = 100000;
    bool force_monte_carlo = false;
    SeedSpec seed{};
};

// E[log f(x, xi)] with x in {0, infinity, finite}. Exact (closed form or
// 1-D quadrature over single-parameter terms) unless Monte Carlo is forced.
CriterionEstimate estimate_log_mean(const ModelSpec& model, LogMeanAt at,
                                    const EstimateOptions& options = {});

// E[sup_{x > x_c} log f(x, xi)] (Theorem-4-style tail criterion).
CriterionEstimate estimate_tail_sup(const ModelSpec& model, double x_c,
                                    const EstimateOptions& options = {});

// Three-branch classification for purely negative density dependence.
RegimeReport classify_ndd(const ModelSpec& model, const EstimateOptions& options = {});

// Three-branch classification for purely positive density dependence.
RegimeReport classify_pdd(const ModelSpec& model, const EstimateOptions& options = {});

// Classification for mixed density dependence. x_c defaults to twice the
// skeleton's largest fixed point. The local-extinction branch is upgraded to
// unconditional extinction when the extinction state is certified accessible
// (full-support multiplicative noise with bounded x f, or bounded noise with
// no skeleton attractor and an epsilon-chain to zero at the noise bound).
RegimeReport classify_general(const ModelSpec& model,
                              std::optional<double> x_c = std::nullopt,
                              const EstimateOptions& options = {});

// Dispatch on the model's monotonicity class.
RegimeReport classify_auto(const ModelSpec& model, std::optional<double> x_c = std::nullopt,
                           const EstimateOptions& options = {});

struct JensenGap {
    double mc_mean_p_over_h = 0.0;  // Monte Carlo E[P/h]
    double std_error = 0.0;
    double p_over_mean_h = 0.0;     // closed-form P / E[h]
    double gap = 0.0;               // E[P/h] - P/E[h] (>= 0 up to SE)
    long n_draws = 0;
};

// Quantifies the Jensen's-inequality shift E[P/h] >= P/E[h] produced by a
// fluctuating half-saturation constant.
JensenGap jensen_gap(double P, const EnvDistribution& h_dist, long n_draws,
                     const SeedSpec& seed);

}  // namespace alleesim

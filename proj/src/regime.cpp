#include "alleesim/regime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "alleesim/numerics.hpp"
#include "alleesim/skeleton.hpp"

namespace alleesim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

// One additive piece of an exact criterion value.
struct Term {
    double value = 0.0;
    double err = 0.0;
    bool quadrature = false;
};

Term mean_term(const EnvDistribution& d) { return {d.mean(), 0.0, false}; }
Term logmean_term(const EnvDistribution& d) { return {d.log_mean(), 0.0, false}; }
Term recipmean_term(const EnvDistribution& d) { return {d.reciprocal_mean(), 0.0, false}; }

Term expect_term(const EnvDistribution& d, const std::function<double(double)>& g) {
    if (d.degenerate()) return {g(d.mean()), 0.0, false};
    const QuadResult q = expect(d, g);
    return {q.value, q.abs_err, true};
}

struct Acc {
    double value = 0.0;
    double err = 0.0;
    bool quadrature = false;

    void add(const Term& t, double scale = 1.0) {
        // scale * t.value with extended-real care (scale is finite).
        if (std::isinf(t.value)) {
            if (scale != 0.0) value += (scale > 0 ? t.value : -t.value);
        } else {
            value += scale * t.value;
            err += std::fabs(scale) * t.err;
        }
        quadrature = quadrature || t.quadrature;
    }
};

std::string at_name(LogMeanAt at) {
    switch (at.where) {
        case LogMeanAt::Zero: return "log_f_at_zero";
        case LogMeanAt::Infinity: return "log_f_at_infinity";
        case LogMeanAt::Finite: return "log_f_at_x(x=" + fmt(at.x) + ")";
    }
    return "?";
}

CriterionEstimate from_acc(std::string name, const Acc& acc) {
    CriterionEstimate est;
    est.name = std::move(name);
    est.value = acc.value;
    est.std_error = acc.err;
    est.method = acc.quadrature ? EstimateMethod::Quadrature : EstimateMethod::ClosedForm;
    if (std::isinf(est.value)) {
        est.std_error = 0.0;
        est.method = EstimateMethod::ClosedForm;
    }
    return est;
}

// E[log f(., xi)] decomposed into single-parameter moments. Every family's
// log-fitness is a sum of terms each touching one independent parameter, so
// the result is exact (closed form, or 1-D quadrature for the nonlinear
// terms).
CriterionEstimate exact_log_mean(const ModelSpec& m, LogMeanAt at) {
    Acc acc;
    const auto P = [&](const char* name) -> const EnvDistribution& { return m.param(name); };
    switch (at.where) {
        case LogMeanAt::Zero:
            switch (m.family()) {
                case Family::Ricker: acc.add(mean_term(P("r"))); break;
                case Family::BevertonHolt: acc.add(logmean_term(P("a"))); break;
                case Family::MateLimitation:
                case Family::MateLimitationNdd:
                    acc.value = -kInf;
                    break;
                case Family::PredatorSaturation:
                case Family::PredatorSaturationNdd:
                    acc.add(mean_term(P("r")));
                    acc.add(recipmean_term(P("h")), -P("P").mean());
                    break;
                case Family::LiebholdBascompte:
                    acc.add(mean_term(P("xi")));
                    acc.value -= P("gamma").mean() * P("C").mean();
                    break;
            }
            break;
        case LogMeanAt::Infinity:
            switch (m.family()) {
                case Family::Ricker:
                case Family::BevertonHolt:
                case Family::MateLimitationNdd:
                case Family::PredatorSaturationNdd:
                    acc.value = -kInf;
                    break;
                case Family::MateLimitation: acc.add(logmean_term(P("lambda"))); break;
                case Family::PredatorSaturation: acc.add(mean_term(P("r"))); break;
                case Family::LiebholdBascompte: acc.value = kInf; break;
            }
            break;
        case LogMeanAt::Finite: {
            const double x = at.x;
            switch (m.family()) {
                case Family::Ricker:
                    acc.add(mean_term(P("r")));
                    acc.add(mean_term(P("a")), -x);
                    break;
                case Family::BevertonHolt:
                    acc.add(logmean_term(P("a")));
                    acc.add(expect_term(P("b"), [x](double b) { return std::log1p(b * x); }), -1.0);
                    break;
                case Family::MateLimitation:
                    if (x == 0.0) {
                        acc.value = -kInf;
                        break;
                    }
                    acc.add(logmean_term(P("lambda")));
                    acc.value += std::log(x);
                    acc.add(expect_term(P("h"), [x](double h) { return std::log(h + x); }), -1.0);
                    break;
                case Family::PredatorSaturation:
                    acc.add(mean_term(P("r")));
                    acc.add(expect_term(P("h"), [x](double h) { return 1.0 / (h + x); }),
                            -P("P").mean());
                    break;
                case Family::MateLimitationNdd:
                    if (x == 0.0) {
                        acc.value = -kInf;
                        break;
                    }
                    acc.add(mean_term(P("r")));
                    acc.add(mean_term(P("a")), -x);
                    acc.value += std::log(x);
                    acc.add(expect_term(P("h"), [x](double h) { return std::log(h + x); }), -1.0);
                    break;
                case Family::PredatorSaturationNdd:
                    acc.add(mean_term(P("r")));
                    acc.add(mean_term(P("a")), -x);
                    acc.add(expect_term(P("h"), [x](double h) { return 1.0 / (h + x); }),
                            -P("P").mean());
                    break;
                case Family::LiebholdBascompte:
                    acc.add(mean_term(P("xi")));
                    acc.value += P("gamma").mean() * (x - P("C").mean());
                    break;
            }
            break;
        }
    }
    return from_acc(at_name(at), acc);
}

CriterionEstimate monte_carlo_mean(const ModelSpec& m, const std::string& name,
                                   const std::function<double(const EnvDraw&)>& g,
                                   long n, SampleStream stream) {
    if (n < 1) throw ValidationError("Monte Carlo estimate requires n >= 1");
    double sum = 0.0, sum_sq = 0.0;
    bool minus_inf = false, plus_inf = false;
    for (long i = 0; i < n; ++i) {
        const double v = g(m.draw(stream));
        if (v == -kInf) {
            minus_inf = true;
            continue;
        }
        if (v == kInf) {
            plus_inf = true;
            continue;
        }
        sum += v;
        sum_sq += v * v;
    }
    CriterionEstimate est;
    est.name = name;
    est.method = EstimateMethod::MonteCarlo;
    est.n_draws = n;
    if (minus_inf || plus_inf) {
        // An infinite value on a positive-probability set dominates the mean.
        est.value = minus_inf && !plus_inf ? -kInf : (plus_inf && !minus_inf ? kInf : std::nan(""));
        est.std_error = 0.0;
        return est;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    est.value = mean;
    est.std_error = std::sqrt(var / n);
    return est;
}

}  // namespace

const char* estimate_method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::ClosedForm: return "closed-form";
        case EstimateMethod::Quadrature: return "quadrature";
        case EstimateMethod::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

int CriterionEstimate::confident_sign() const {
    if (std::isnan(value)) return 0;
    double halfwidth = 0.0;
    switch (method) {
        case EstimateMethod::ClosedForm: halfwidth = 0.0; break;
        case EstimateMethod::Quadrature: halfwidth = std::max(3.0 * std_error, 1e-10); break;
        case EstimateMethod::MonteCarlo: halfwidth = kZ99 * std_error; break;
    }
    if (std::isinf(value)) return value > 0 ? 1 : -1;
    if (value > halfwidth) return 1;
    if (value < -halfwidth) return -1;
    return 0;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::StochasticPersistence: return "stochastic-persistence";
        case Regime::UnconditionalExtinction: return "unconditional-extinction";
        case Regime::UnboundedGrowth: return "unbounded-growth";
        case Regime::ConditionalPersistence: return "conditional-persistence";
        case Regime::LocalExtinctionOnly: return "local-extinction-only";
        case Regime::Indeterminate: return "indeterminate";
    }
    return "?";
}

const CriterionEstimate* RegimeReport::find(std::string_view name) const {
    for (const auto& e : estimates)
        if (e.name == name) return &e;
    return nullptr;
}

std::string RegimeReport::machine_line() const {
    std::string out = "REGIME regime=";
    out += regime_name(regime);
    out += " theorem=\"" + applicable_theorem + "\"";
    for (const auto& e : estimates) {
        out += " crit:" + e.name + "=" + fmt(e.value) + ":" + fmt(e.std_error) + ":" +
               estimate_method_name(e.method);
        if (e.n_draws > 0) out += ":n=" + std::to_string(e.n_draws);
    }
    return out;
}

std::string RegimeReport::human_text() const {
    std::string out;
    out += "regime:  ";
    out += regime_name(regime);
    out += "\ntheorem: " + applicable_theorem + "\n";
    for (const auto& e : estimates) {
        out += "  " + e.name + " = " + fmt(e.value);
        if (e.method == EstimateMethod::MonteCarlo)
            out += " +- " + fmt(e.std_error) + " (monte-carlo, n=" + std::to_string(e.n_draws) + ")";
        else if (e.method == EstimateMethod::Quadrature)
            out += " (quadrature, err<=" + fmt(e.std_error) + ")";
        else
            out += " (closed-form)";
        out += "\n";
    }
    for (const auto& n : notes) out += "note: " + n + "\n";
    return out;
}

CriterionEstimate estimate_log_mean(const ModelSpec& model, LogMeanAt at,
                                    const EstimateOptions& options) {
    if (!options.force_monte_carlo) return exact_log_mean(model, at);
    auto g = [&, at](const EnvDraw& d) {
        switch (at.where) {
            case LogMeanAt::Zero: return model.log_fitness_at_zero(d);
            case LogMeanAt::Infinity: return model.log_fitness_at_infinity(d);
            case LogMeanAt::Finite: return model.log_fitness(at.x, d);
        }
        return 0.0;
    };
    return monte_carlo_mean(model, at_name(at), g, options.n_draws, options.seed.stream(0));
}

CriterionEstimate estimate_tail_sup(const ModelSpec& model, double x_c,
                                    const EstimateOptions& options) {
    if (!(x_c > 0.0)) throw ValidationError("estimate_tail_sup: x_c must be > 0");
    const std::string name = "tail_sup_log_f(x_c=" + fmt(x_c) + ")";
    const MonotoneKind kind = model.info().mono;

    if (!options.force_monte_carlo) {
        if (kind == MonotoneKind::DecreasingInX) {
            CriterionEstimate est = estimate_log_mean(model, LogMeanAt::at(x_c), options);
            est.name = name;
            return est;
        }
        if (kind == MonotoneKind::IncreasingInX) {
            CriterionEstimate est = estimate_log_mean(model, LogMeanAt::infinity(), options);
            if (std::isinf(est.value) && est.value > 0)
                throw DomainError("estimate_tail_sup: supremum unbounded for this family");
            est.name = name;
            return est;
        }
        // Mixed: the peak location couples parameters; exact only while at
        // most one of them is stochastic.
        if (model.stochastic_count() == 0) {
            CriterionEstimate est;
            est.name = name;
            est.value = model.tail_sup_log_fitness(x_c, model.mean_draw());
            est.method = EstimateMethod::ClosedForm;
            return est;
        }
        if (model.stochastic_count() == 1) {
            int idx = 0;
            for (int i = 0; i < model.n_params(); ++i)
                if (model.stochastic(i)) idx = i;
            EnvDraw base = model.mean_draw();
            const QuadResult q = expect(model.param(idx), [&](double v) {
                EnvDraw d = base;
                d[idx] = v;
                return model.tail_sup_log_fitness(x_c, d);
            });
            CriterionEstimate est;
            est.name = name;
            est.value = q.value;
            est.std_error = q.abs_err;
            est.method = EstimateMethod::Quadrature;
            return est;
        }
    }
    return monte_carlo_mean(
        model, name, [&](const EnvDraw& d) { return model.tail_sup_log_fitness(x_c, d); },
        options.n_draws, options.seed.stream(1));
}

namespace {

void add_predator_h_note(const ModelSpec& model, RegimeReport& report) {
    if (model.family() != Family::PredatorSaturation &&
        model.family() != Family::PredatorSaturationNdd)
        return;
    if (model.param("h").mean() != 1.0)
        report.notes.push_back(
            "E[log f(0)] evaluated exactly as E[r - P/h]; the r - P shorthand holds only for h = 1 "
            "(here E[h] = " + fmt(model.param("h").mean()) + ")");
}

}  // namespace

RegimeReport classify_ndd(const ModelSpec& model, const EstimateOptions& options) {
    if (model.info().mono != MonotoneKind::DecreasingInX)
        throw DomainError("classify_ndd: model is not decreasing in x");
    RegimeReport rep;
    rep.estimates.push_back(estimate_log_mean(model, LogMeanAt::zero(), options));
    rep.estimates.push_back(estimate_log_mean(model, LogMeanAt::infinity(), options));
    const int s0 = rep.estimates[0].confident_sign();
    const int si = rep.estimates[1].confident_sign();
    if (s0 < 0) {
        rep.regime = Regime::UnconditionalExtinction;
        rep.applicable_theorem = "Theorem 1 (extinction)";
    } else if (si > 0) {
        rep.regime = Regime::UnboundedGrowth;
        rep.applicable_theorem = "Theorem 1 (unbounded growth)";
    } else if (s0 > 0 && si < 0) {
        rep.regime = Regime::StochasticPersistence;
        rep.applicable_theorem = "Theorem 1 (persistence)";
    } else {
        rep.regime = Regime::Indeterminate;
        rep.applicable_theorem = "Theorem 1";
        rep.notes.push_back("a deciding criterion straddles zero at 99% confidence");
    }
    return rep;
}

RegimeReport classify_pdd(const ModelSpec& model, const EstimateOptions& options) {
    if (model.info().mono != MonotoneKind::IncreasingInX)
        throw DomainError("classify_pdd: model is not increasing in x");
    RegimeReport rep;
    rep.estimates.push_back(estimate_log_mean(model, LogMeanAt::zero(), options));
    rep.estimates.push_back(estimate_log_mean(model, LogMeanAt::infinity(), options));
    add_predator_h_note(model, rep);
    const int s0 = rep.estimates[0].confident_sign();
    const int si = rep.estimates[1].confident_sign();
    if (si < 0) {
        rep.regime = Regime::UnconditionalExtinction;
        rep.applicable_theorem = "Theorem 2 (extinction)";
    } else if (s0 > 0) {
        rep.regime = Regime::UnboundedGrowth;
        rep.applicable_theorem = "Theorem 2 (unbounded growth)";
    } else if (s0 < 0 && si > 0) {
        rep.regime = Regime::ConditionalPersistence;
        rep.applicable_theorem = "Theorem 2 (conditional persistence)";
    } else {
        rep.regime = Regime::Indeterminate;
        rep.applicable_theorem = "Theorem 2";
        rep.notes.push_back("a deciding criterion straddles zero at 99% confidence");
    }
    return rep;
}

RegimeReport classify_general(const ModelSpec& model, std::optional<double> x_c,
                              const EstimateOptions& options) {
    const MonotonicityClass mono = model.monotonicity();
    if (mono.kind != MonotoneKind::Mixed)
        throw DomainError("classify_general: model is not of mixed monotonicity");

    RegimeReport rep;
    const SkeletonMap skel(model);
    double xc = 0.0;
    if (x_c) {
        if (!(*x_c > 0.0)) throw ValidationError("x_c must be > 0");
        xc = *x_c;
    } else {
        const std::vector<double> fps = find_fixed_points(skel);
        if (fps.empty())
            throw ValidationError(
                "classify_general: skeleton has no positive fixed point; supply x_c explicitly");
        xc = 2.0 * fps.back();
    }

    rep.estimates.push_back(estimate_log_mean(model, LogMeanAt::zero(), options));
    CriterionEstimate tail = estimate_tail_sup(model, xc, options);
    add_predator_h_note(model, rep);
    const int s0 = rep.estimates[0].confident_sign();
    int st = tail.confident_sign();
    if (s0 > 0 && st > 0) {
        // Tail criterion fails at this x_c; f eventually decays, so look
        // further out before giving up.
        double xc_try = xc;
        for (int k = 0; k < 24 && st >= 0; ++k) {
            xc_try *= 2.0;
            tail = estimate_tail_sup(model, xc_try, options);
            st = tail.confident_sign();
        }
        if (st < 0)
            rep.notes.push_back("tail criterion satisfied after extending x_c to " + fmt(xc_try));
    }
    rep.estimates.push_back(tail);

    if (s0 > 0 && st < 0) {
        rep.regime = Regime::StochasticPersistence;
        rep.applicable_theorem = "Theorem 4";
        return rep;
    }
    if (s0 == 0 || (s0 > 0 && st == 0)) {
        rep.regime = Regime::Indeterminate;
        rep.applicable_theorem = s0 == 0 ? "Theorem 3/4" : "Theorem 4";
        rep.notes.push_back("a deciding criterion straddles zero at 99% confidence");
        return rep;
    }
    if (s0 > 0) {
        // E[log f(0)] > 0 but no negative tail certificate was found.
        rep.regime = Regime::Indeterminate;
        rep.applicable_theorem = "Theorem 4";
        rep.notes.push_back("tail-sup criterion not satisfied at any probed x_c");
        return rep;
    }

    // s0 < 0: extinction at low densities (Theorem 3's local branch) needs
    // the A2 increasing prefix.
    if (!(mono.gamma_prefix > 0.0))
        throw DomainError("classify_general: A2 increasing prefix unknown (missing gamma)");

    // Large-noise route: a normal r makes e^r a full-support multiplicative
    // factor, and x f(x)/e^r stays bounded for these families, so {0} is
    // accessible from everywhere.
    const bool large_noise =
        (model.family() == Family::MateLimitationNdd ||
         model.family() == Family::PredatorSaturationNdd) &&
        model.param("r").kind() == DistKind::Normal && model.param("r").p2() > 0.0;
    if (large_noise) {
        rep.regime = Regime::UnconditionalExtinction;
        rep.applicable_theorem = "Theorem 3 (large noise: full-support multiplicative factor)";
        return rep;
    }

    // Bounded-noise route: no positive attractor for the skeleton plus an
    // eps-chain to zero at the actual noise bound.
    if (model.bounded_env()) {
        const SkeletonClassification sc = classify_skeleton(skel);
        const bool no_positive_attractor = sc.label == SkeletonLabel::ExtinctionOnly ||
                                           sc.label == SkeletonLabel::EssentialExtinction;
        if (no_positive_attractor && !sc.near_degenerate) {
            const double eps = small_noise_bound(model);
            if (eps > 0.0) {
                const ChainGraph graph = build_chain_graph(skel, eps);
                const double target = std::max(4.0 * graph.dx, 1e-9);
                std::vector<double> probes;
                if (sc.C) probes.push_back(*sc.C);
                if (sc.C) probes.push_back(skel(*sc.C));
                if (!sc.fixed_points.empty()) probes.push_back(sc.fixed_points.back());
                probes.push_back(0.5 * skel.x_max());
                bool all_chain = true;
                for (double p : probes)
                    all_chain = all_chain && chain_reachable_to_zero(graph, p, target);
                if (all_chain) {
                    rep.regime = Regime::UnconditionalExtinction;
                    rep.applicable_theorem =
                        "Theorem 3 + Proposition 1 (no positive attractor; chains to zero at the "
                        "noise bound)";
                    rep.notes.push_back("skeleton label: " +
                                        std::string(skeleton_label_name(sc.label)));
                    return rep;
                }
            }
        }
    }

    rep.regime = Regime::LocalExtinctionOnly;
    rep.applicable_theorem = "Theorem 3 (local branch)";
    rep.notes.push_back("accessibility of {0} not certified; extinction guaranteed only near 0");
    return rep;
}

RegimeReport classify_auto(const ModelSpec& model, std::optional<double> x_c,
                           const EstimateOptions& options) {
    switch (model.info().mono) {
        case MonotoneKind::DecreasingInX: return classify_ndd(model, options);
        case MonotoneKind::IncreasingInX: return classify_pdd(model, options);
        case MonotoneKind::Mixed: return classify_general(model, x_c, options);
    }
    throw DomainError("classify_auto: unknown monotonicity");
}

JensenGap jensen_gap(double P, const EnvDistribution& h_dist, long n_draws,
                     const SeedSpec& seed) {
    const bool positive = h_dist.support().lo > 0.0 || h_dist.kind() == DistKind::LogNormal ||
                          h_dist.kind() == DistKind::Gamma;
    if (!positive) throw ValidationError("jensen_gap: h must be strictly positive");
    if (n_draws < 2) throw ValidationError("jensen_gap: n_draws must be >= 2");
    SampleStream stream = seed.stream(2);
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n_draws; ++i) {
        const double v = P / h_dist.sample(stream);
        sum += v;
        sum_sq += v * v;
    }
    JensenGap out;
    out.n_draws = n_draws;
    out.mc_mean_p_over_h = sum / n_draws;
    const double var = std::max(0.0, sum_sq / n_draws - out.mc_mean_p_over_h * out.mc_mean_p_over_h);
    out.std_error = std::sqrt(var / n_draws);
    out.p_over_mean_h = P / h_dist.mean();
    out.gap = out.mc_mean_p_over_h - out.p_over_mean_h;
    return out;
}

}  // namespace alleesim

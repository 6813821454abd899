#include "alleesim/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alleesim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<FamilyInfo> kFamilies = {
    {Family::Ricker, "ricker", 2, {"r", "a"}, MonotoneKind::DecreasingInX},
    {Family::BevertonHolt, "beverton-holt", 2, {"a", "b"}, MonotoneKind::DecreasingInX},
    {Family::MateLimitation, "mate-limitation", 2, {"lambda", "h"}, MonotoneKind::IncreasingInX},
    {Family::PredatorSaturation, "predator-saturation", 3, {"r", "P", "h"}, MonotoneKind::IncreasingInX},
    {Family::MateLimitationNdd, "mate-limitation-ndd", 3, {"r", "a", "h"}, MonotoneKind::Mixed},
    {Family::PredatorSaturationNdd, "predator-saturation-ndd", 4, {"r", "a", "h", "P"}, MonotoneKind::Mixed},
    {Family::LiebholdBascompte, "liebhold", 3, {"gamma", "C", "xi"}, MonotoneKind::IncreasingInX},
};

// Interior peak of f for mate-limitation-ndd: root of h/(x(h+x)) = a.
double mlndd_peak(double a, double h) {
    if (a == kInf || h == 0.0) return 0.0;
    if (h == kInf) return 1.0 / a;  // limit of the closed form
    return 0.5 * (-h + std::sqrt(h * h + 4.0 * h / a));
}

// Interior peak of f for predator-saturation-ndd: (h+x)^2 = P/a.
double psndd_peak(double a, double h, double P) {
    if (a == kInf || P == 0.0) return 0.0;
    if (P == kInf) return kInf;
    return std::max(0.0, std::sqrt(P / a) - h);
}

}  // namespace

const FamilyInfo& family_info(Family family) {
    return kFamilies[static_cast<int>(family)];
}

const std::vector<FamilyInfo>& all_families() { return kFamilies; }

Family family_from_name(std::string_view cli_name) {
    for (const auto& fi : kFamilies)
        if (fi.cli_name == cli_name) return fi.family;
    std::string names;
    for (const auto& fi : kFamilies) {
        if (!names.empty()) names += ", ";
        names += fi.cli_name;
    }
    throw ValidationError("unknown model '" + std::string(cli_name) + "' (expected one of: " + names + ")");
}

ModelSpec::ModelSpec(Family family,
                     const std::vector<std::pair<std::string, EnvDistribution>>& params)
    : family_(family),
      bindings_{EnvDistribution::constant(0), EnvDistribution::constant(0),
                EnvDistribution::constant(0), EnvDistribution::constant(0)} {
    const FamilyInfo& fi = info();
    std::array<bool, kMaxParams> seen{};
    for (const auto& [name, dist] : params) {
        int idx = -1;
        for (int i = 0; i < fi.n_params; ++i)
            if (fi.param_names[i] == name) idx = i;
        if (idx < 0)
            throw ValidationError("family '" + std::string(fi.cli_name) +
                                  "' has no parameter '" + name + "'");
        if (seen[idx]) throw ValidationError("parameter '" + name + "' bound twice");
        seen[idx] = true;
        bindings_[idx] = dist;
    }
    for (int i = 0; i < fi.n_params; ++i)
        if (!seen[i])
            throw ValidationError("family '" + std::string(fi.cli_name) +
                                  "' is missing parameter '" + std::string(fi.param_names[i]) + "'");
    for (int i = 0; i < fi.n_params; ++i) {
        stochastic_[i] = !bindings_[i].degenerate();
        if (stochastic_[i]) ++stochastic_count_;
    }
    validate();
}

void ModelSpec::validate() const {
    const FamilyInfo& fi = info();
    // Strictly positive parameters keep each family inside its declared
    // monotonicity class (and f >= 0 everywhere).
    auto require_positive = [&](std::string_view name) {
        const Interval s = param(name).support();
        if (!(s.lo > 0.0))
            throw ValidationError("parameter '" + std::string(name) + "' of '" +
                                  std::string(fi.cli_name) + "' must have strictly positive support");
    };
    auto require_nonnegative = [&](std::string_view name) {
        const Interval s = param(name).support();
        if (!(s.lo >= 0.0))
            throw ValidationError("parameter '" + std::string(name) + "' of '" +
                                  std::string(fi.cli_name) + "' must have non-negative support");
    };
    switch (family_) {
        case Family::Ricker: require_positive("a"); break;
        case Family::BevertonHolt:
            require_positive("a");
            require_positive("b");
            break;
        case Family::MateLimitation:
            require_positive("lambda");
            require_positive("h");
            break;
        case Family::PredatorSaturation:
            require_positive("P");
            require_positive("h");
            break;
        case Family::MateLimitationNdd:
            require_positive("a");
            require_positive("h");
            break;
        case Family::PredatorSaturationNdd:
            require_positive("a");
            require_positive("h");
            require_positive("P");
            break;
        case Family::LiebholdBascompte:
            require_positive("gamma");
            require_nonnegative("C");
            break;
    }
}

const EnvDistribution& ModelSpec::param(std::string_view name) const {
    return bindings_[param_index(name)];
}

int ModelSpec::param_index(std::string_view name) const {
    const FamilyInfo& fi = info();
    for (int i = 0; i < fi.n_params; ++i)
        if (fi.param_names[i] == name) return i;
    throw ValidationError("no parameter named '" + std::string(name) + "'");
}

bool ModelSpec::bounded_env() const {
    for (int i = 0; i < n_params(); ++i)
        if (stochastic_[i] && !bindings_[i].bounded()) return false;
    return true;
}

EnvDraw ModelSpec::draw(SampleStream& stream) const {
    EnvDraw d{};
    for (int i = 0; i < n_params(); ++i)
        d[i] = stochastic_[i] ? bindings_[i].sample(stream) : bindings_[i].mean();
    return d;
}

EnvDraw ModelSpec::mean_draw() const {
    EnvDraw d{};
    for (int i = 0; i < n_params(); ++i) d[i] = bindings_[i].mean();
    return d;
}

double ModelSpec::fitness(double x, const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker: return std::exp(d[0] - d[1] * x);
        case Family::BevertonHolt: return d[0] / (1.0 + d[1] * x);
        case Family::MateLimitation: return d[0] * x / (d[1] + x);
        case Family::PredatorSaturation: return std::exp(d[0] - d[1] / (d[2] + x));
        case Family::MateLimitationNdd: return std::exp(d[0] - d[1] * x) * x / (d[2] + x);
        case Family::PredatorSaturationNdd:
            return std::exp(d[0] - d[1] * x - d[3] / (d[2] + x));
        case Family::LiebholdBascompte: return std::exp(d[0] * (x - d[1]) + d[2]);
    }
    return 0.0;
}

double ModelSpec::log_fitness(double x, const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker: return d[0] - d[1] * x;
        case Family::BevertonHolt: return std::log(d[0]) - std::log1p(d[1] * x);
        case Family::MateLimitation:
            if (x == 0.0) return -kInf;
            return std::log(d[0]) + std::log(x / (d[1] + x));
        case Family::PredatorSaturation: return d[0] - d[1] / (d[2] + x);
        case Family::MateLimitationNdd:
            if (x == 0.0) return -kInf;
            return d[0] - d[1] * x + std::log(x / (d[2] + x));
        case Family::PredatorSaturationNdd:
            return d[0] - d[1] * x - d[3] / (d[2] + x);
        case Family::LiebholdBascompte: return d[0] * (x - d[1]) + d[2];
    }
    return 0.0;
}

double ModelSpec::fitness_at_zero(const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker: return std::exp(d[0]);
        case Family::BevertonHolt: return d[0];
        case Family::MateLimitation: return 0.0;
        case Family::PredatorSaturation: return std::exp(d[0] - d[1] / d[2]);
        case Family::MateLimitationNdd: return 0.0;
        case Family::PredatorSaturationNdd: return std::exp(d[0] - d[3] / d[2]);
        case Family::LiebholdBascompte: return std::exp(-d[0] * d[1] + d[2]);
    }
    return 0.0;
}

double ModelSpec::fitness_at_infinity(const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker:
        case Family::BevertonHolt:
        case Family::MateLimitationNdd:
        case Family::PredatorSaturationNdd:
            return 0.0;
        case Family::MateLimitation: return d[0];
        case Family::PredatorSaturation: return std::exp(d[0]);
        case Family::LiebholdBascompte: return kInf;
    }
    return 0.0;
}

double ModelSpec::log_fitness_at_zero(const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker: return d[0];
        case Family::BevertonHolt: return std::log(d[0]);
        case Family::MateLimitation:
        case Family::MateLimitationNdd:
            return -kInf;
        case Family::PredatorSaturation: return d[0] - d[1] / d[2];
        case Family::PredatorSaturationNdd: return d[0] - d[3] / d[2];
        case Family::LiebholdBascompte: return -d[0] * d[1] + d[2];
    }
    return 0.0;
}

double ModelSpec::log_fitness_at_infinity(const EnvDraw& d) const {
    switch (family_) {
        case Family::Ricker:
        case Family::BevertonHolt:
        case Family::MateLimitationNdd:
        case Family::PredatorSaturationNdd:
            return -kInf;
        case Family::MateLimitation: return std::log(d[0]);
        case Family::PredatorSaturation: return d[0];
        case Family::LiebholdBascompte: return kInf;
    }
    return 0.0;
}

double ModelSpec::fitness_peak(const EnvDraw& d) const {
    switch (family_) {
        case Family::MateLimitationNdd: return mlndd_peak(d[1], d[2]);
        case Family::PredatorSaturationNdd: return psndd_peak(d[1], d[2], d[3]);
        default:
            throw DomainError("fitness_peak: only mixed families have an interior fitness peak");
    }
}

double ModelSpec::tail_sup_log_fitness(double x_c, const EnvDraw& d) const {
    if (!(x_c > 0.0)) throw ValidationError("tail_sup_log_fitness: x_c must be > 0");
    switch (family_) {
        case Family::Ricker:
        case Family::BevertonHolt:
            // Decreasing in x: the sup over (x_c, inf) is attained at x_c.
            return log_fitness(x_c, d);
        case Family::MateLimitation:
        case Family::PredatorSaturation:
            // Increasing in x: the sup is the limit at infinity.
            return log_fitness_at_infinity(d);
        case Family::MateLimitationNdd:
        case Family::PredatorSaturationNdd:
            return log_fitness(std::max(x_c, fitness_peak(d)), d);
        case Family::LiebholdBascompte:
            throw DomainError("tail_sup_log_fitness: unbounded supremum for liebhold family");
    }
    return 0.0;
}

MonotonicityClass ModelSpec::monotonicity() const {
    const MonotoneKind kind = info().mono;
    if (kind != MonotoneKind::Mixed) return {kind, 0.0};
    // Smallest interior fitness peak over the support corners; f is monotone
    // in each parameter at fixed x, so corners are extreme.
    double gamma = kInf;
    if (family_ == Family::MateLimitationNdd) {
        const Interval a = param("a").support(), h = param("h").support();
        for (double av : {a.lo, a.hi})
            for (double hv : {h.lo, h.hi}) gamma = std::min(gamma, mlndd_peak(av, hv));
    } else {
        const Interval a = param("a").support(), h = param("h").support(),
                       P = param("P").support();
        for (double av : {a.lo, a.hi})
            for (double hv : {h.lo, h.hi})
                for (double Pv : {P.lo, P.hi}) gamma = std::min(gamma, psndd_peak(av, hv, Pv));
    }
    if (!std::isfinite(gamma)) gamma = 0.0;
    return {MonotoneKind::Mixed, gamma};
}

ModelSpec ModelSpec::skeleton_spec() const {
    std::vector<std::pair<std::string, EnvDistribution>> params;
    const FamilyInfo& fi = info();
    for (int i = 0; i < fi.n_params; ++i)
        params.emplace_back(std::string(fi.param_names[i]),
                            EnvDistribution::constant(bindings_[i].mean()));
    return ModelSpec(family_, params);
}

std::string ModelSpec::describe() const {
    const FamilyInfo& fi = info();
    std::string out(fi.cli_name);
    for (int i = 0; i < fi.n_params; ++i) {
        out += (i == 0) ? " " : " ";
        out += std::string(fi.param_names[i]) + "=" + bindings_[i].literal();
    }
    return out;
}

}  // namespace alleesim

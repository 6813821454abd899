#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alleesim/env.hpp"

namespace alleesim {

// Fitness families f(x, xi) for the per-capita growth model
// x_{t+1} = f(x_t, xi_{t+1}) x_t.
enum class Family {
    Ricker,                 // exp(r - a x)
    BevertonHolt,           // a / (1 + b x)
    MateLimitation,         // lambda x / (h + x)
    PredatorSaturation,     // exp(r - P / (h + x))
    MateLimitationNdd,      // exp(r - a x) x / (h + x)
    PredatorSaturationNdd,  // exp(r - a x - P / (h + x))
    LiebholdBascompte,      // exp(gamma (x - C) + xi)
};

enum class MonotoneKind { DecreasingInX, IncreasingInX, Mixed };

struct MonotonicityClass {
    MonotoneKind kind;
    // For Mixed: x -> f(x, xi) is increasing on [0, gamma_prefix) for every xi
    // in the support. 0 means the prefix is unknown.
    double gamma_prefix = 0.0;
};

inline constexpr int kMaxParams = 4;

// One environmental draw: sampled values aligned with the family's parameter
// order (constants are copied through).
using EnvDraw = std::array<double, kMaxParams>;

struct FamilyInfo {
    Family family;
    std::string_view cli_name;
    int n_params;
    std::array<std::string_view, kMaxParams> param_names;
    MonotoneKind mono;
};

const FamilyInfo& family_info(Family family);
Family family_from_name(std::string_view cli_name);
const std::vector<FamilyInfo>& all_families();

// A fitness family with each parameter bound to a constant or an
// environmental law. Immutable after construction; safe to share.
class ModelSpec {
  public:
    ModelSpec(Family family, const std::vector<std::pair<std::string, EnvDistribution>>& params);

    Family family() const { return family_; }
    const FamilyInfo& info() const { return family_info(family_); }
    int n_params() const { return info().n_params; }
    const EnvDistribution& param(int i) const { return bindings_[i]; }
    const EnvDistribution& param(std::string_view name) const;
    int param_index(std::string_view name) const;

    int stochastic_count() const { return stochastic_count_; }
    bool stochastic(int i) const { return stochastic_[i]; }
    // True when every stochastic parameter has bounded support.
    bool bounded_env() const;

    EnvDraw draw(SampleStream& stream) const;
    EnvDraw mean_draw() const;

    double fitness(double x, const EnvDraw& d) const;
    // log f(x, xi); may be -inf (and +inf only through overflow).
    double log_fitness(double x, const EnvDraw& d) const;

    // Analytic limits; exact 0 / +inf where the family dictates.
    double fitness_at_zero(const EnvDraw& d) const;
    double fitness_at_infinity(const EnvDraw& d) const;
    double log_fitness_at_zero(const EnvDraw& d) const;
    double log_fitness_at_infinity(const EnvDraw& d) const;

    // sup_{x > x_c} log f(x, xi). Decreasing families evaluate at x_c; mixed
    // families at max(x_c, interior peak of f). Throws DomainError for
    // families with unbounded fitness (Liebhold-Bascompte).
    double tail_sup_log_fitness(double x_c, const EnvDraw& d) const;

    // Interior maximizer of x -> f(x, xi) for mixed families (closed form).
    double fitness_peak(const EnvDraw& d) const;

    MonotonicityClass monotonicity() const;

    // Same family with every parameter frozen at its expected value.
    ModelSpec skeleton_spec() const;

    std::string describe() const;

  private:
    Family family_;
    std::array<EnvDistribution, kMaxParams> bindings_;
    std::array<bool, kMaxParams> stochastic_{};
    int stochastic_count_ = 0;

    void validate() const;
};

}  // namespace alleesim

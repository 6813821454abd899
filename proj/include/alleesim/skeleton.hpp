#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "alleesim/fitness.hpp"

namespace alleesim {

// The unperturbed map F0(x) = x f(x, E[xi]) on the evaluation domain
// [0, x_max]. x_max defaults to 5x the largest fixed point or peak image.
class SkeletonMap {
  public:
    explicit SkeletonMap(const ModelSpec& model, double x_max = 0.0);

    double operator()(double x) const { return x * model_.fitness(x, mean_); }
    double fitness(double x) const { return model_.fitness(x, mean_); }
    double fitness_at_zero() const { return model_.fitness_at_zero(mean_); }
    double log_fitness(double x) const { return model_.log_fitness(x, mean_); }

    double x_max() const { return x_max_; }
    const ModelSpec& model() const { return model_; }
    const EnvDraw& mean() const { return mean_; }

    // Interior maximizer of F0, or nullopt for monotone maps.
    const std::optional<double>& critical_point() const { return crit_; }

    // hull(F0(J)) computed from the monotone pieces (split at the critical
    // point), so the result is an enclosure rather than a sample estimate.
    Interval image_hull(const Interval& J) const;

  private:
    ModelSpec model_;  // every parameter frozen at its mean
    EnvDraw mean_;
    double x_max_ = 0.0;
    std::optional<double> crit_;
    double scan_hi_ = 0.0;  // upper end of the root-scan domain
    friend FixedPointScan scan_fixed_points(const SkeletonMap&);
};

struct FixedPointScan {
    std::vector<double> roots;  // positive fixed points, ascending
    bool resolution_warning = false;
};

// All roots of F0(x) = x in (0, x_max]: bracketed by sign changes of
// log f on a scan grid (log-spaced below 1, linear above) and refined by
// bisection. 0 is the trivial fixed point and is not listed.
FixedPointScan scan_fixed_points(const SkeletonMap& F0);
std::vector<double> find_fixed_points(const SkeletonMap& F0);

// Interior maximizer of F0; throws DomainError for monotone maps.
double find_critical_point(const SkeletonMap& F0);

enum class SkeletonLabel {
    ExtinctionOnly,      // sup_x f(x, E) < 1
    GlobalPersistence,   // f(0, E) > 1
    PositiveAttractor,   // F0(F0(C)) > M
    EssentialExtinction, // F0(F0(C)) < M
};

const char* skeleton_label_name(SkeletonLabel label);
SkeletonLabel skeleton_label_from_name(std::string_view name);

struct SkeletonClassification {
    SkeletonLabel label = SkeletonLabel::ExtinctionOnly;
    std::optional<double> M;    // smallest positive fixed point
    std::optional<double> C;    // critical point of F0
    std::optional<double> FFC;  // F0(F0(C))
    std::vector<double> fixed_points;
    bool near_degenerate = false;  // decision quantity within 2% of its boundary
    bool resolution_warning = false;
    double f_at_zero = 0.0;
    double f_sup = 0.0;
};

SkeletonClassification classify_skeleton(const SkeletonMap& F0);

// Grid discretization of the eps-chain relation: node i sits at i*dx and has
// an edge to j iff |j*dx - F0(i*dx)| < eps.
struct ChainGraph {
    double dx = 0.0;
    double eps = 0.0;
    int n = 0;
    std::vector<double> f_at;  // F0 at the nodes
};

// dx defaults to min(eps/4, x_max/2000); dx <= eps/4 is required.
ChainGraph build_chain_graph(const SkeletonMap& F0, double eps, double dx = 0.0);

// True iff some node below `target` is reachable from the node nearest
// `from` in the chain graph.
bool chain_reachable_to_zero(const ChainGraph& graph, double from, double target);

// Grows `seed` by J -> hull(F0(J)) +- eps until the image is contained
// (certifying a positive invariant interval under eps-bounded noise) or the
// iteration budget is exhausted / the interval touches zero.
std::optional<Interval> invariant_interval(const SkeletonMap& F0, double eps,
                                           Interval seed, int max_iter = 1000);

// sup_x half-width of {x f(x, xi) : xi in support} around F0(x), evaluated
// on a dense grid with support-corner draws; +inf when any stochastic
// parameter has unbounded support.
double small_noise_bound(const ModelSpec& model);

}  // namespace alleesim

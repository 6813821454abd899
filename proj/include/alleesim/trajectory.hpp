#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "alleesim/fitness.hpp"

namespace alleesim {

// Densities at or above this value are treated as numerically escaped.
inline constexpr double kOverflowSentinel = 1e300;

enum class RecordMode { FullPath, MeasureOnly, FinalTail };

struct SimConfig {
    long t_max = 1000;
    double ext_threshold = 1e-9;   // quasi-extinction cutoff
    double high_threshold = 1e9;   // unbounded-growth cutoff
    long burn_in = 0;              // steps discarded before measure accumulation
    RecordMode record = RecordMode::MeasureOnly;
    long tail_length = 1000;

    // Occupation-measure range; 0 means "use the fate thresholds".
    double measure_lo = 0.0;
    double measure_hi = 0.0;
    int bins_per_decade = 100;
    int max_bins = 400;

    void validate() const;
    double effective_measure_lo() const { return measure_lo > 0.0 ? measure_lo : ext_threshold; }
    double effective_measure_hi() const { return measure_hi > 0.0 ? measure_hi : high_threshold; }
};

enum class Fate { Extinct, EscapedHigh, Interior };

const char* fate_name(Fate f);
Fate fate_from_name(std::string_view name);

// Normalized occupation histogram with log-spaced bins on [lo, hi); mass
// below lo and at/above hi is tracked separately.
class EmpiricalMeasure {
  public:
    EmpiricalMeasure() = default;
    EmpiricalMeasure(double lo, double hi, int bins_per_decade, int max_bins);

    void add(double x);
    void merge(const EmpiricalMeasure& other);

    bool empty() const { return t_counted_ == 0; }
    long t_counted() const { return t_counted_; }
    int n_bins() const { return static_cast<int>(counts_.size()); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double bin_lo(int i) const;
    double bin_hi(int i) const;
    double mass(int i) const { return t_counted_ ? counts_[i] / t_counted_ : 0.0; }
    double below_mass() const { return t_counted_ ? below_ / t_counted_ : 0.0; }
    double above_mass() const { return t_counted_ ? above_ / t_counted_ : 0.0; }
    double interior_mass() const;
    // Total mass in [a, b) accumulated from whole bins overlapping the range.
    double mass_outside(double a, double b) const;

    // Raw accessors used by the CSV reader.
    void set_raw(double lo, double hi, std::vector<double> counts, double below,
                 double above, long t_counted);

  private:
    double lo_ = 0.0, hi_ = 0.0;
    double log_lo_ = 0.0, inv_bin_width_ = 0.0;
    std::vector<double> counts_;
    double below_ = 0.0, above_ = 0.0;
    long t_counted_ = 0;
};

struct Trajectory {
    double x0 = 0.0;
    Fate fate = Fate::Interior;
    long t_hit = -1;        // step of the first threshold crossing, -1 if none
    long steps = 0;         // steps actually iterated
    double final_x = 0.0;
    std::vector<double> path;  // FullPath: x_0 .. x_steps
    std::vector<double> tail;  // FinalTail: last tail_length states
    EmpiricalMeasure measure;  // accumulated online for all record modes
};

// One application of the update map: returns f(x, xi) * x. Exact zero is
// absorbing; overflow clamps to the sentinel.
double step(const ModelSpec& model, double x, const EnvDraw& draw);

// Iterates until t_max or the first threshold crossing.
Trajectory run_trajectory(const ModelSpec& model, const SimConfig& config, double x0,
                          SampleStream stream);

// Occupation measure of a recorded trajectory. Requires a full path or a
// trajectory whose measure was accumulated online.
EmpiricalMeasure empirical_measure(const Trajectory& traj, const SimConfig& config);

enum class PersistenceRule {
    InteriorOnly,        // bounded studies: persistence = never crossed
    InteriorOrEscaped,   // positive-density-dependence studies
    FinalAbove,          // figure-style rule: final density > threshold
};

const char* persistence_rule_name(PersistenceRule r);

struct ReplicateSummary {
    std::uint64_t replicate = 0;
    Fate fate = Fate::Interior;
    long t_hit = -1;
    double final_x = 0.0;
};

struct EnsembleResult {
    long n_replicates = 0;
    std::array<long, 3> fate_counts{};  // indexed by Fate
    PersistenceRule rule = PersistenceRule::InteriorOnly;
    double rule_threshold = 0.0;
    double persistence_fraction = 0.0;
    double std_error = 0.0;
    EmpiricalMeasure pooled;  // over Interior replicates
    std::vector<ReplicateSummary> replicates;
    std::uint64_t master_seed = 0;

    long fates(Fate f) const { return fate_counts[static_cast<int>(f)]; }
};

struct EnsembleOptions {
    PersistenceRule rule = PersistenceRule::InteriorOnly;
    double rule_threshold = 0.0;
    int threads = 1;
};

// n independent replicates; replicate i uses seed.stream(i), so the result
// is identical for every thread count.
EnsembleResult run_ensemble(const ModelSpec& model, const SimConfig& config, double x0,
                            long n_replicates, const SeedSpec& seed,
                            const EnsembleOptions& options = {});

// Default persistence rule for a model: escaped counts as persistent only
// for purely positive density dependence.
PersistenceRule default_persistence_rule(const ModelSpec& model);

struct ProbeResult {
    double probability = 0.0;
    double std_error = 0.0;
    long n = 0;
};

// Monte Carlo estimate of P[exists t <= T : X_t < eps_target | X_0 = x0].
ProbeResult accessibility_probe(const ModelSpec& model, double x0, double eps_target,
                                long T, long n_replicates, const SeedSpec& seed,
                                int threads = 1);

}  // namespace alleesim

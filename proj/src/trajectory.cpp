#include "alleesim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "alleesim/numerics.hpp"

namespace alleesim {

void SimConfig::validate() const {
    if (t_max < 1) throw ValidationError("t_max must be >= 1");
    if (!(ext_threshold > 0.0)) throw ValidationError("ext_threshold must be > 0");
    if (!(ext_threshold < high_threshold))
        throw ValidationError("requires 0 < ext_threshold < high_threshold");
    if (burn_in < 0 || burn_in >= t_max) throw ValidationError("requires 0 <= burn_in < t_max");
    if (tail_length < 1) throw ValidationError("tail_length must be >= 1");
    if (!(effective_measure_lo() < effective_measure_hi()))
        throw ValidationError("requires measure_lo < measure_hi");
    if (bins_per_decade < 1 || max_bins < 1) throw ValidationError("bad bin configuration");
}

const char* fate_name(Fate f) {
    switch (f) {
        case Fate::Extinct: return "extinct";
        case Fate::EscapedHigh: return "escaped";
        case Fate::Interior: return "interior";
    }
    return "?";
}

Fate fate_from_name(std::string_view name) {
    if (name == "extinct") return Fate::Extinct;
    if (name == "escaped") return Fate::EscapedHigh;
    if (name == "interior") return Fate::Interior;
    throw ValidationError("unknown fate '" + std::string(name) + "'");
}

const char* persistence_rule_name(PersistenceRule r) {
    switch (r) {
        case PersistenceRule::InteriorOnly: return "interior-only";
        case PersistenceRule::InteriorOrEscaped: return "interior-or-escaped";
        case PersistenceRule::FinalAbove: return "final-above";
    }
    return "?";
}

EmpiricalMeasure::EmpiricalMeasure(double lo, double hi, int bins_per_decade, int max_bins) {
    if (!(lo > 0.0 && hi > lo)) throw ValidationError("measure range requires 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const int bins = std::clamp(static_cast<int>(std::ceil(decades * bins_per_decade)), 1, max_bins);
    lo_ = lo;
    hi_ = hi;
    log_lo_ = std::log(lo);
    inv_bin_width_ = bins / (std::log(hi) - std::log(lo));
    counts_.assign(bins, 0.0);
}

void EmpiricalMeasure::add(double x) {
    ++t_counted_;
    if (x < lo_) {
        below_ += 1.0;
        return;
    }
    if (x >= hi_) {
        above_ += 1.0;
        return;
    }
    int idx = static_cast<int>((std::log(x) - log_lo_) * inv_bin_width_);
    idx = std::clamp(idx, 0, n_bins() - 1);
    counts_[idx] += 1.0;
}

void EmpiricalMeasure::merge(const EmpiricalMeasure& other) {
    if (other.empty()) return;
    if (empty() && counts_.empty()) {
        *this = other;
        return;
    }
    if (other.n_bins() != n_bins() || other.lo_ != lo_ || other.hi_ != hi_)
        throw DomainError("cannot merge measures with different binning");
    for (int i = 0; i < n_bins(); ++i) counts_[i] += other.counts_[i];
    below_ += other.below_;
    above_ += other.above_;
    t_counted_ += other.t_counted_;
}

double EmpiricalMeasure::bin_lo(int i) const {
    return (i == 0) ? lo_ : std::exp(log_lo_ + i / inv_bin_width_);
}

double EmpiricalMeasure::bin_hi(int i) const {
    return (i == n_bins() - 1) ? hi_ : std::exp(log_lo_ + (i + 1) / inv_bin_width_);
}

double EmpiricalMeasure::interior_mass() const {
    double m = 0.0;
    for (double c : counts_) m += c;
    return t_counted_ ? m / t_counted_ : 0.0;
}

double EmpiricalMeasure::mass_outside(double a, double b) const {
    if (t_counted_ == 0) return 0.0;
    double out = below_ + above_;
    for (int i = 0; i < n_bins(); ++i) {
        if (bin_hi(i) <= a || bin_lo(i) >= b) out += counts_[i];
    }
    return out / t_counted_;
}

void EmpiricalMeasure::set_raw(double lo, double hi, std::vector<double> counts,
                               double below, double above, long t_counted) {
    lo_ = lo;
    hi_ = hi;
    log_lo_ = std::log(lo);
    inv_bin_width_ = counts.size() / (std::log(hi) - std::log(lo));
    counts_ = std::move(counts);
    below_ = below;
    above_ = above;
    t_counted_ = t_counted;
}

double step(const ModelSpec& model, double x, const EnvDraw& draw) {
    if (x == 0.0) return 0.0;
    const double y = model.fitness(x, draw) * x;
    if (!(y < kOverflowSentinel)) return kOverflowSentinel;  // inf/nan clamp
    return y;
}

Trajectory run_trajectory(const ModelSpec& model, const SimConfig& config, double x0,
                          SampleStream stream) {
    config.validate();
    if (!(x0 >= 0.0)) throw ValidationError("x0 must be >= 0");

    Trajectory traj;
    traj.x0 = x0;
    traj.measure = EmpiricalMeasure(config.effective_measure_lo(), config.effective_measure_hi(),
                                    config.bins_per_decade, config.max_bins);
    const bool full = config.record == RecordMode::FullPath;
    const bool tail = config.record == RecordMode::FinalTail;
    if (full) traj.path.reserve(static_cast<size_t>(config.t_max) + 1);

    double x = x0;
    long t = 0;
    auto record = [&](double v) {
        if (full) traj.path.push_back(v);
        if (tail) {
            traj.tail.push_back(v);
            if (static_cast<long>(traj.tail.size()) > config.tail_length)
                traj.tail.erase(traj.tail.begin());
        }
        if (t >= config.burn_in) traj.measure.add(v);
    };
    auto crossed = [&](double v) {
        if (v < config.ext_threshold) {
            traj.fate = Fate::Extinct;
            traj.t_hit = t;
            return true;
        }
        if (v >= config.high_threshold) {
            traj.fate = Fate::EscapedHigh;
            traj.t_hit = t;
            return true;
        }
        return false;
    };

    record(x);
    if (!crossed(x)) {
        while (t < config.t_max) {
            const EnvDraw draw = model.draw(stream);
            x = step(model, x, draw);
            ++t;
            record(x);
            if (crossed(x)) break;
        }
    }
    traj.steps = t;
    traj.final_x = x;
    return traj;
}

EmpiricalMeasure empirical_measure(const Trajectory& traj, const SimConfig& config) {
    if (!traj.path.empty()) {
        EmpiricalMeasure m(config.effective_measure_lo(), config.effective_measure_hi(),
                           config.bins_per_decade, config.max_bins);
        for (long t = config.burn_in; t < static_cast<long>(traj.path.size()); ++t)
            m.add(traj.path[t]);
        return m;
    }
    if (!traj.measure.empty()) return traj.measure;
    throw DomainError("empirical_measure: trajectory was recorded without the needed detail");
}

PersistenceRule default_persistence_rule(const ModelSpec& model) {
    return model.monotonicity().kind == MonotoneKind::IncreasingInX
               ? PersistenceRule::InteriorOrEscaped
               : PersistenceRule::InteriorOnly;
}

namespace {

bool persisted(const ReplicateSummary& r, PersistenceRule rule, double threshold) {
    switch (rule) {
        case PersistenceRule::InteriorOnly: return r.fate == Fate::Interior;
        case PersistenceRule::InteriorOrEscaped:
            return r.fate == Fate::Interior || r.fate == Fate::EscapedHigh;
        case PersistenceRule::FinalAbove: return r.final_x > threshold;
    }
    return false;
}

}  // namespace

EnsembleResult run_ensemble(const ModelSpec& model, const SimConfig& config, double x0,
                            long n_replicates, const SeedSpec& seed,
                            const EnsembleOptions& options) {
    if (n_replicates < 1) throw ValidationError("n_replicates must be >= 1");
    config.validate();

    std::vector<ReplicateSummary> summaries(n_replicates);
    std::vector<EmpiricalMeasure> measures(n_replicates);
    parallel_for(
        n_replicates,
        [&](long i) {
            Trajectory traj = run_trajectory(model, config, x0, seed.stream(i));
            summaries[i] = {static_cast<std::uint64_t>(i), traj.fate, traj.t_hit, traj.final_x};
            if (traj.fate == Fate::Interior) measures[i] = std::move(traj.measure);
        },
        options.threads);

    EnsembleResult res;
    res.n_replicates = n_replicates;
    res.rule = options.rule;
    res.rule_threshold = options.rule_threshold;
    res.master_seed = seed.master_seed;
    res.replicates = std::move(summaries);
    long n_persist = 0;
    for (long i = 0; i < n_replicates; ++i) {
        res.fate_counts[static_cast<int>(res.replicates[i].fate)] += 1;
        if (persisted(res.replicates[i], options.rule, options.rule_threshold)) ++n_persist;
        if (!measures[i].empty()) res.pooled.merge(measures[i]);
    }
    const double p = static_cast<double>(n_persist) / n_replicates;
    res.persistence_fraction = p;
    res.std_error = std::sqrt(p * (1.0 - p) / n_replicates);
    return res;
}

ProbeResult accessibility_probe(const ModelSpec& model, double x0, double eps_target,
                                long T, long n_replicates, const SeedSpec& seed,
                                int threads) {
    if (!(eps_target > 0.0)) throw ValidationError("eps_target must be > 0");
    if (T < 1) throw ValidationError("T must be >= 1");
    if (n_replicates < 1) throw ValidationError("n_replicates must be >= 1");

    std::vector<char> hits(n_replicates, 0);
    parallel_for(
        n_replicates,
        [&](long i) {
            SampleStream stream = seed.stream(i);
            double x = x0;
            if (x < eps_target) {
                hits[i] = 1;
                return;
            }
            for (long t = 0; t < T; ++t) {
                x = step(model, x, model.draw(stream));
                if (x < eps_target) {
                    hits[i] = 1;
                    return;
                }
                if (x >= kOverflowSentinel) return;  // numerically escaped; cannot come back
            }
        },
        threads);

    long n_hit = 0;
    for (char h : hits) n_hit += h;
    const double p = static_cast<double>(n_hit) / n_replicates;
    return {p, std::sqrt(p * (1.0 - p) / n_replicates), n_replicates};
}

}  // namespace alleesim

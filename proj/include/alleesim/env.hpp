#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alleesim {

// Thrown for malformed configuration (bad literals, bad parameters, bad CLI
// input). The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an operation is applied outside its mathematical domain
// (wrong monotonicity class, unbounded supremum, missing data...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SplitMix-style stateless mix: the value of stream `key` at position
// `counter`. Full 64-bit avalanche; any (key, counter) pair is addressable
// without generating the preceding values.
std::uint64_t mix_at(std::uint64_t key, std::uint64_t counter);

// A counter-based sample stream. Copies are independent replays: two copies
// of the same stream produce identical draws, which is what shared-noise
// coupling experiments rely on.
class SampleStream {
  public:
    explicit SampleStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix_at(key_, counter_++); }

    // Uniform on (0,1), strictly open at both ends (53-bit resolution).
    double next_u01();

    // Standard normal via the inverse CDF; exactly one u01 per draw.
    double next_normal();

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Master seed plus the derivation rule mapping (seed, replicate) to an
// independent stream. Derivation is a pure function of the pair, so work
// scheduling never affects which numbers a replicate sees.
struct SeedSpec {
    std::uint64_t master_seed = 0;

    SampleStream stream(std::uint64_t replicate) const {
        return SampleStream(mix_at(mix_at(master_seed, replicate), ~replicate));
    }

    // Independent sub-seed for a distinct purpose (sweep point, criterion, ...).
    SeedSpec derive(std::uint64_t tag) const {
        return SeedSpec{mix_at(mix_at(master_seed, 0x5eedULL), tag)};
    }
};

// Inverse standard normal CDF (Wichura's AS 241, double precision).
double normal_quantile(double p);

enum class DistKind { Constant, Normal, LogNormal, Uniform, Gamma };

struct Interval {
    double lo;
    double hi;
};

// One i.i.d. environmental law. LogNormal is parameterized by the mean and
// standard deviation of the underlying normal (the log scale), matching how
// the persistence criteria are stated.
class EnvDistribution {
  public:
    static EnvDistribution constant(double c);
    static EnvDistribution normal(double mean, double sd);
    static EnvDistribution log_normal(double log_mean, double log_sd);
    static EnvDistribution uniform(double lo, double hi);
    static EnvDistribution gamma(double shape, double scale);

    // Literal grammar: `kind:p1[,p2]`, e.g. `lognormal:0.1,0.5`, `uniform:4.25,4.75`,
    // `const:10`. A bare number is shorthand for a constant.
    static EnvDistribution parse(std::string_view literal);
    std::string literal() const;

    DistKind kind() const { return kind_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }

    // True when the law is a point mass (Constant, or zero-width Normal/...).
    bool degenerate() const;

    double sample(SampleStream& stream) const;

    // Essential support; +-inf at unbounded ends.
    Interval support() const;
    bool bounded() const;

    double mean() const;
    // E[log X]; requires support within (0, inf).
    double log_mean() const;
    // E[1/X]; +inf when the law has no finite reciprocal moment.
    double reciprocal_mean() const;

    bool operator==(const EnvDistribution&) const = default;

  private:
    EnvDistribution(DistKind kind, double p1, double p2);

    DistKind kind_;
    double p1_;
    double p2_;
};

// Gamma draw (Marsaglia-Tsang); consumes a deterministic, state-independent
// prefix of the stream.
double sample_gamma(double shape, double scale, SampleStream& stream);

double digamma(double x);

}  // namespace alleesim

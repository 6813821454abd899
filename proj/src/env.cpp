#include "alleesim/env.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace alleesim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::uint64_t mix_at(std::uint64_t key, std::uint64_t counter) {
    std::uint64_t z = key + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SampleStream::next_u01() {
    // Top 53 bits, centered on the dyadic grid so 0 and 1 are unreachable.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SampleStream::next_normal() { return normal_quantile(next_u01()); }

// ---------------------------------------------------------------------------
// AS 241 (Wichura): rational approximations for the normal quantile, accurate
// to roughly 1e-16 relative over (0,1).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -kInf;
        if (p == 1.0) return kInf;
        throw DomainError("normal_quantile: p outside [0,1]");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: x must be positive");
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0)));
}

double sample_gamma(double shape, double scale, SampleStream& stream) {
    if (shape < 1.0) {
        const double u = stream.next_u01();
        return sample_gamma(shape + 1.0, scale, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        const double z = stream.next_normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.next_u01();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v * scale;
    }
}

// ---------------------------------------------------------------------------

EnvDistribution::EnvDistribution(DistKind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2) {}

EnvDistribution EnvDistribution::constant(double c) {
    if (!std::isfinite(c)) throw ValidationError("const: value must be finite");
    return {DistKind::Constant, c, 0.0};
}

EnvDistribution EnvDistribution::normal(double mean, double sd) {
    if (!std::isfinite(mean) || !std::isfinite(sd))
        throw ValidationError("normal: parameters must be finite");
    if (sd < 0.0) throw ValidationError("normal: sd must be >= 0");
    return {DistKind::Normal, mean, sd};
}

EnvDistribution EnvDistribution::log_normal(double log_mean, double log_sd) {
    if (!std::isfinite(log_mean) || !std::isfinite(log_sd))
        throw ValidationError("lognormal: parameters must be finite");
    if (log_sd < 0.0) throw ValidationError("lognormal: log_sd must be >= 0");
    return {DistKind::LogNormal, log_mean, log_sd};
}

EnvDistribution EnvDistribution::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw ValidationError("uniform: parameters must be finite");
    if (lo > hi) throw ValidationError("uniform: requires lo <= hi");
    return {DistKind::Uniform, lo, hi};
}

EnvDistribution EnvDistribution::gamma(double shape, double scale) {
    if (!std::isfinite(shape) || !std::isfinite(scale))
        throw ValidationError("gamma: parameters must be finite");
    if (shape <= 0.0 || scale <= 0.0)
        throw ValidationError("gamma: shape and scale must be > 0");
    return {DistKind::Gamma, shape, scale};
}

namespace {

double parse_number(std::string_view s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw ValidationError("bad number '" + std::string(s) + "' in " + what);
    return v;
}

}  // namespace

EnvDistribution EnvDistribution::parse(std::string_view literal) {
    const auto colon = literal.find(':');
    if (colon == std::string_view::npos) {
        // Bare number means a constant.
        return constant(parse_number(literal, "distribution literal"));
    }
    const std::string_view kind = literal.substr(0, colon);
    std::string_view rest = literal.substr(colon + 1);
    double args[2] = {0.0, 0.0};
    int n_args = 0;
    while (!rest.empty() && n_args < 2) {
        const auto comma = rest.find(',');
        const std::string_view tok =
            (comma == std::string_view::npos) ? rest : rest.substr(0, comma);
        args[n_args++] = parse_number(tok, std::string(literal));
        if (comma == std::string_view::npos) {
            rest = {};
        } else {
            rest = rest.substr(comma + 1);
            if (rest.empty()) throw ValidationError("trailing comma in '" + std::string(literal) + "'");
        }
    }
    if (!rest.empty()) throw ValidationError("too many parameters in '" + std::string(literal) + "'");

    const auto need = [&](int n) {
        if (n_args != n)
            throw ValidationError("'" + std::string(kind) + "' takes " + std::to_string(n) +
                                  " parameter(s), got " + std::to_string(n_args));
    };
    if (kind == "const" || kind == "constant") {
        need(1);
        return constant(args[0]);
    }
    if (kind == "normal") {
        need(2);
        return normal(args[0], args[1]);
    }
    if (kind == "lognormal") {
        need(2);
        return log_normal(args[0], args[1]);
    }
    if (kind == "uniform") {
        need(2);
        return uniform(args[0], args[1]);
    }
    if (kind == "gamma") {
        need(2);
        return gamma(args[0], args[1]);
    }
    throw ValidationError("unknown distribution kind '" + std::string(kind) + "'");
}

std::string EnvDistribution::literal() const {
    const auto num = [](double v) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, p);
    };
    switch (kind_) {
        case DistKind::Constant: return "const:" + num(p1_);
        case DistKind::Normal: return "normal:" + num(p1_) + "," + num(p2_);
        case DistKind::LogNormal: return "lognormal:" + num(p1_) + "," + num(p2_);
        case DistKind::Uniform: return "uniform:" + num(p1_) + "," + num(p2_);
        case DistKind::Gamma: return "gamma:" + num(p1_) + "," + num(p2_);
    }
    return {};
}

bool EnvDistribution::degenerate() const {
    switch (kind_) {
        case DistKind::Constant: return true;
        case DistKind::Normal:
        case DistKind::LogNormal: return p2_ == 0.0;
        case DistKind::Uniform: return p1_ == p2_;
        case DistKind::Gamma: return false;
    }
    return false;
}

double EnvDistribution::sample(SampleStream& stream) const {
    switch (kind_) {
        case DistKind::Constant: return p1_;
        case DistKind::Normal: return p1_ + p2_ * stream.next_normal();
        case DistKind::LogNormal: return std::exp(p1_ + p2_ * stream.next_normal());
        case DistKind::Uniform: return p1_ + (p2_ - p1_) * stream.next_u01();
        case DistKind::Gamma: return sample_gamma(p1_, p2_, stream);
    }
    return 0.0;
}

Interval EnvDistribution::support() const {
    switch (kind_) {
        case DistKind::Constant: return {p1_, p1_};
        case DistKind::Normal:
            if (p2_ == 0.0) return {p1_, p1_};
            return {-kInf, kInf};
        case DistKind::LogNormal: {
            if (p2_ == 0.0) {
                const double c = std::exp(p1_);
                return {c, c};
            }
            return {0.0, kInf};
        }
        case DistKind::Uniform: return {p1_, p2_};
        case DistKind::Gamma: return {0.0, kInf};
    }
    return {0.0, 0.0};
}

bool EnvDistribution::bounded() const {
    const Interval s = support();
    return std::isfinite(s.lo) && std::isfinite(s.hi);
}

double EnvDistribution::mean() const {
    switch (kind_) {
        case DistKind::Constant: return p1_;
        case DistKind::Normal: return p1_;
        case DistKind::LogNormal: return std::exp(p1_ + 0.5 * p2_ * p2_);
        case DistKind::Uniform: return 0.5 * (p1_ + p2_);
        case DistKind::Gamma: return p1_ * p2_;
    }
    return 0.0;
}

double EnvDistribution::log_mean() const {
    switch (kind_) {
        case DistKind::Constant:
            if (p1_ <= 0.0) throw DomainError("log_mean: constant must be positive");
            return std::log(p1_);
        case DistKind::Normal:
            if (p2_ == 0.0) {
                if (p1_ <= 0.0) throw DomainError("log_mean: degenerate normal must be positive");
                return std::log(p1_);
            }
            throw DomainError("log_mean undefined: normal support includes non-positive values");
        case DistKind::LogNormal: return p1_;
        case DistKind::Uniform: {
            if (p1_ <= 0.0) throw DomainError("log_mean: uniform support must be positive");
            if (p1_ == p2_) return std::log(p1_);
            // integral of log over [lo,hi] is x log x - x
            const double hi = p2_ * std::log(p2_) - p2_;
            const double lo = p1_ * std::log(p1_) - p1_;
            return (hi - lo) / (p2_ - p1_);
        }
        case DistKind::Gamma: return digamma(p1_) + std::log(p2_);
    }
    return 0.0;
}

double EnvDistribution::reciprocal_mean() const {
    switch (kind_) {
        case DistKind::Constant:
            if (p1_ == 0.0) throw DomainError("reciprocal_mean: constant is zero");
            return 1.0 / p1_;
        case DistKind::Normal:
            if (p2_ == 0.0) {
                if (p1_ == 0.0) throw DomainError("reciprocal_mean: degenerate normal is zero");
                return 1.0 / p1_;
            }
            throw DomainError("reciprocal_mean undefined: normal support includes zero");
        case DistKind::LogNormal: return std::exp(-p1_ + 0.5 * p2_ * p2_);
        case DistKind::Uniform: {
            if (p1_ < 0.0) throw DomainError("reciprocal_mean: uniform support must be >= 0");
            if (p1_ == p2_) return 1.0 / p1_;
            if (p1_ == 0.0) return kInf;
            return (std::log(p2_) - std::log(p1_)) / (p2_ - p1_);
        }
        case DistKind::Gamma:
            if (p1_ <= 1.0) return kInf;
            return 1.0 / (p2_ * (p1_ - 1.0));
    }
    return 0.0;
}

}  // namespace alleesim

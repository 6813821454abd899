#include "alleesim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace alleesim {

namespace {

// G7,K15 nodes and weights (positive half; node 0 is the midpoint).
constexpr double kKx[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKw[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
};
constexpr double kGw[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697,
};

struct Panel {
    double value;
    double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = kKw[0] * f0;
    double g = kGw[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fp = f(c + h * kKx[i]);
        const double fm = f(c - h * kKx[i]);
        k += kKw[i] * (fp + fm);
        if (i % 2 == 0) g += kGw[i / 2] * (fp + fm);
    }
    return {k * h, std::fabs(k - g) * std::fabs(h)};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           int depth, QuadResult& out) {
    const Panel p = gk15(f, a, b);
    if (depth <= 0 || p.err <= tol || !std::isfinite(p.value)) {
        out.value += p.value;
        out.abs_err += p.err;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1, out);
    adapt(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol) {
    if (a == b) return {0.0, 0.0};
    const Panel first = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::fabs(first.value));
    QuadResult out;
    adapt(f, a, b, tol, 48, out);
    return out;
}

QuadResult expect(const EnvDistribution& dist, const std::function<double(double)>& g,
                  double abs_tol, double rel_tol) {
    switch (dist.kind()) {
        case DistKind::Constant:
            return {g(dist.p1()), 0.0};
        case DistKind::Uniform: {
            const double lo = dist.p1(), hi = dist.p2();
            if (lo == hi) return {g(lo), 0.0};
            QuadResult r = integrate(g, lo, hi, abs_tol * (hi - lo), rel_tol);
            r.value /= (hi - lo);
            r.abs_err /= (hi - lo);
            return r;
        }
        case DistKind::Normal:
        case DistKind::LogNormal: {
            const double m = dist.p1(), s = dist.p2();
            const bool log_scale = dist.kind() == DistKind::LogNormal;
            if (s == 0.0) return {g(log_scale ? std::exp(m) : m), 0.0};
            // z-space; the 12-sigma tails carry < 2e-33 mass.
            constexpr double kZmax = 12.0;
            constexpr double kInvSqrt2Pi = 0.3989422804014327;
            auto integrand = [&](double z) {
                const double x = m + s * z;
                return g(log_scale ? std::exp(x) : x) * kInvSqrt2Pi * std::exp(-0.5 * z * z);
            };
            return integrate(integrand, -kZmax, kZmax, abs_tol, rel_tol);
        }
        case DistKind::Gamma: {
            const double k = dist.p1(), theta = dist.p2();
            if (k >= 1.0) {
                const double lg = std::lgamma(k);
                auto integrand = [&](double x) {
                    const double t = x / theta;
                    return g(x) * std::exp((k - 1.0) * std::log(t) - t - lg) / theta;
                };
                const double hi = theta * (k + 20.0 * std::sqrt(k) + 60.0);
                return integrate(integrand, 0.0, hi, abs_tol, rel_tol);
            }
            // Substitution x = theta * s^(1/k) removes the density singularity at 0.
            const double lg1 = std::lgamma(k + 1.0);
            auto integrand = [&](double s) {
                const double t = std::pow(s, 1.0 / k);
                return g(theta * t) * std::exp(-t - lg1);
            };
            const double s_hi = std::pow(70.0, k);
            return integrate(integrand, 0.0, s_hi, abs_tol, rel_tol);
        }
    }
    return {0.0, 0.0};
}

double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double x_tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) throw DomainError("bisect_root: no sign change on bracket");
    while (b - a > x_tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // bracket at floating-point resolution
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double x_tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

void parallel_for(long n, const std::function<void(long)>& fn, int threads) {
    if (n <= 0) return;
    threads = std::max(1, threads);
    if (threads == 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const long n_workers = std::min<long>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    std::exception_ptr error;
    std::mutex error_mu;
    for (long w = 0; w < n_workers; ++w) {
        const long lo = n * w / n_workers;
        const long hi = n * (w + 1) / n_workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (long i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace alleesim

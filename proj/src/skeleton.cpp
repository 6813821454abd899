#include "alleesim/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alleesim/numerics.hpp"

namespace alleesim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper end of a domain that provably contains all positive fixed points and
// the peak of F0, found by doubling until the map is past its hump (or, for
// increasing maps, past the last f = 1 crossing).
double scan_domain_hi(const ModelSpec& model, const EnvDraw& mean) {
    const MonotoneKind kind = model.info().mono;
    auto f = [&](double x) { return model.fitness(x, mean); };
    if (kind == MonotoneKind::IncreasingInX) {
        if (f(0.0) >= 1.0 || model.fitness_at_infinity(mean) <= 1.0)
            return 1.0;  // no transversal f = 1 crossing; domain is scale-free
        double b = 1.0;
        while (f(b) <= 1.0 && b < 1e15) b *= 2.0;
        return b;
    }
    double peak = 0.0;
    if (kind == MonotoneKind::Mixed) peak = model.fitness_peak(mean);
    double b = std::max(1.0, 2.0 * peak);
    if (kind == MonotoneKind::DecreasingInX) {
        // f decreasing: no fixed points past the first b with f(b) < 1.
        while (f(b) >= 0.5 && b < 1e15) b *= 2.0;
        return b;
    }
    auto F = [&](double x) { return x * f(x); };
    while ((f(b) >= 0.5 || F(b) >= F(0.5 * b)) && b < 1e15) b *= 2.0;
    return b;
}

}  // namespace

SkeletonMap::SkeletonMap(const ModelSpec& model, double x_max)
    : model_(model.skeleton_spec()), mean_(model_.mean_draw()) {
    scan_hi_ = scan_domain_hi(model_, mean_);

    // Interior max of F0 on (0, scan_hi_]; our families are either monotone
    // or rise once and fall once, so golden section is safe.
    auto F = [&](double x) { return (*this)(x); };
    const double m = golden_max(F, 0.0, scan_hi_, 1e-10 * std::max(1.0, scan_hi_));
    const bool at_right_edge = m > scan_hi_ * (1.0 - 1e-7);
    const double bump = std::max(1e-9, 1e-7 * m);
    const bool is_peak = !at_right_edge && F(m) >= F(m - bump) && F(m) >= F(m + bump);
    if (is_peak) crit_ = m;

    if (x_max > 0.0) {
        x_max_ = x_max;
    } else {
        double scale = 0.0;
        if (crit_) scale = std::max(scale, F(*crit_));
        const FixedPointScan fps = scan_fixed_points(*this);
        if (!fps.roots.empty()) scale = std::max(scale, fps.roots.back());
        x_max_ = 5.0 * std::max(scale, 0.2);
    }
}

Interval SkeletonMap::image_hull(const Interval& J) const {
    const double lo = std::max(0.0, J.lo);
    const double hi = std::max(lo, J.hi);
    const double flo = (*this)(lo);
    const double fhi = (*this)(hi);
    double top = std::max(flo, fhi);
    if (crit_ && lo < *crit_ && *crit_ < hi) top = std::max(top, (*this)(*crit_));
    return {std::min(flo, fhi), top};
}

FixedPointScan scan_fixed_points(const SkeletonMap& F0) {
    const ModelSpec& model = F0.model();
    const EnvDraw& mean = F0.mean();
    auto logf = [&](double x) { return model.log_fitness(x, mean); };

    const double hi = F0.scan_hi_;
    // 1e4 probes: log-spaced below 1, linear above (Allee thresholds can sit
    // near the origin).
    std::vector<double> grid;
    grid.reserve(10001);
    const double lo = std::min(1e-8, hi * 1e-8);
    if (hi > 1.0) {
        const double ratio = std::log(1.0 / lo) / 5000.0;
        for (int i = 0; i <= 5000; ++i) grid.push_back(lo * std::exp(i * ratio));
        const double step = (hi - 1.0) / 5000.0;
        for (int i = 1; i <= 5000; ++i) grid.push_back(1.0 + i * step);
    } else {
        const double ratio = std::log(hi / lo) / 10000.0;
        for (int i = 0; i <= 10000; ++i) grid.push_back(lo * std::exp(i * ratio));
    }

    FixedPointScan out;
    double prev_x = grid[0];
    double prev_v = logf(prev_x);
    for (size_t i = 1; i < grid.size(); ++i) {
        const double x = grid[i];
        const double v = logf(x);
        if (v == 0.0) {
            out.roots.push_back(x);
        } else if (prev_v != 0.0 && (prev_v < 0.0) != (v < 0.0)) {
            out.roots.push_back(bisect_root(logf, prev_x, x, 1e-10));
        }
        prev_x = x;
        prev_v = v;
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double a, double b) { return b - a < 1e-9 * (1.0 + b); }),
                    out.roots.end());
    // Roots closer than the local probe spacing mean the scan may have missed
    // structure between them.
    for (size_t i = 1; i < out.roots.size(); ++i) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), out.roots[i]);
        const size_t gi = std::clamp<size_t>(std::distance(grid.begin(), it), 1, grid.size() - 1);
        if (out.roots[i] - out.roots[i - 1] < grid[gi] - grid[gi - 1])
            out.resolution_warning = true;
    }
    return out;
}

std::vector<double> find_fixed_points(const SkeletonMap& F0) {
    return scan_fixed_points(F0).roots;
}

double find_critical_point(const SkeletonMap& F0) {
    if (!F0.critical_point())
        throw DomainError("find_critical_point: F0 is monotone on the domain (no interior maximum)");
    return *F0.critical_point();
}

const char* skeleton_label_name(SkeletonLabel label) {
    switch (label) {
        case SkeletonLabel::ExtinctionOnly: return "extinction-only";
        case SkeletonLabel::GlobalPersistence: return "global-persistence";
        case SkeletonLabel::PositiveAttractor: return "positive-attractor";
        case SkeletonLabel::EssentialExtinction: return "essential-extinction";
    }
    return "?";
}

SkeletonLabel skeleton_label_from_name(std::string_view name) {
    if (name == "extinction-only") return SkeletonLabel::ExtinctionOnly;
    if (name == "global-persistence") return SkeletonLabel::GlobalPersistence;
    if (name == "positive-attractor") return SkeletonLabel::PositiveAttractor;
    if (name == "essential-extinction") return SkeletonLabel::EssentialExtinction;
    throw ValidationError("unknown skeleton label '" + std::string(name) + "'");
}

SkeletonClassification classify_skeleton(const SkeletonMap& F0) {
    const ModelSpec& model = F0.model();
    const EnvDraw& mean = F0.mean();

    SkeletonClassification out;
    out.f_at_zero = model.fitness_at_zero(mean);
    switch (model.info().mono) {
        case MonotoneKind::DecreasingInX: out.f_sup = out.f_at_zero; break;
        case MonotoneKind::IncreasingInX: out.f_sup = model.fitness_at_infinity(mean); break;
        case MonotoneKind::Mixed: {
            const double peak = model.fitness_peak(mean);
            out.f_sup = (peak > 0.0) ? model.fitness(peak, mean) : out.f_at_zero;
            break;
        }
    }

    const FixedPointScan fps = scan_fixed_points(F0);
    out.fixed_points = fps.roots;
    out.resolution_warning = fps.resolution_warning;

    if (out.f_sup < 1.0) {
        out.label = SkeletonLabel::ExtinctionOnly;
        out.near_degenerate = out.f_sup > 0.99;
        return out;
    }
    if (out.f_at_zero > 1.0) {
        out.label = SkeletonLabel::GlobalPersistence;
        out.near_degenerate = out.f_at_zero < 1.01;
        return out;
    }
    if (fps.roots.empty()) {
        // sup f barely reaches 1: a tangency at scan resolution.
        out.label = SkeletonLabel::ExtinctionOnly;
        out.near_degenerate = true;
        return out;
    }
    out.M = fps.roots.front();
    out.C = find_critical_point(F0);
    const double FC = F0(*out.C);
    out.FFC = F0(FC);
    out.label = (*out.FFC > *out.M) ? SkeletonLabel::PositiveAttractor
                                    : SkeletonLabel::EssentialExtinction;
    out.near_degenerate = std::fabs(*out.FFC - *out.M) <= 0.02 * std::max(*out.M, *out.FFC);
    return out;
}

ChainGraph build_chain_graph(const SkeletonMap& F0, double eps, double dx) {
    if (!(eps > 0.0)) throw ValidationError("chain graph requires eps > 0");
    if (dx == 0.0) dx = std::min(eps / 4.0, F0.x_max() / 2000.0);
    if (!(dx > 0.0) || dx > eps / 4.0)
        throw ValidationError("chain graph requires 0 < dx <= eps/4");
    const long n = static_cast<long>(std::floor(F0.x_max() / dx)) + 1;
    if (n > 50'000'000) throw ValidationError("chain graph too fine (over 5e7 nodes)");
    ChainGraph g;
    g.dx = dx;
    g.eps = eps;
    g.n = static_cast<int>(n);
    g.f_at.resize(g.n);
    for (int i = 0; i < g.n; ++i) g.f_at[i] = F0(i * dx);
    return g;
}

bool chain_reachable_to_zero(const ChainGraph& graph, double from, double target) {
    if (graph.n == 0) throw ValidationError("empty chain graph");
    if (from < target) return true;
    const int start = std::clamp(static_cast<int>(std::lround(from / graph.dx)), 0, graph.n - 1);
    std::vector<char> visited(graph.n, 0);
    std::vector<int> stack{start};
    visited[start] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        if (i * graph.dx < target) return true;
        const double F = graph.f_at[i];
        int j_lo = static_cast<int>(std::floor((F - graph.eps) / graph.dx)) + 1;
        while (j_lo * graph.dx <= F - graph.eps) ++j_lo;
        int j_hi = static_cast<int>(std::ceil((F + graph.eps) / graph.dx)) - 1;
        while (j_hi * graph.dx >= F + graph.eps) --j_hi;
        j_lo = std::max(j_lo, 0);
        j_hi = std::min(j_hi, graph.n - 1);
        if (j_lo > j_hi) {
            // Image lies beyond the domain: pin at the boundary node so every
            // node keeps an outgoing edge.
            j_lo = j_hi = (F > graph.f_at[graph.n - 1]) ? graph.n - 1 : 0;
        }
        for (int j = j_lo; j <= j_hi; ++j) {
            if (!visited[j]) {
                visited[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return false;
}

std::optional<Interval> invariant_interval(const SkeletonMap& F0, double eps,
                                           Interval seed, int max_iter) {
    if (eps < 0.0) throw ValidationError("invariant_interval requires eps >= 0");
    if (!(seed.lo > 0.0) || !(seed.lo <= seed.hi))
        throw ValidationError("invariant_interval requires a positive seed interval");
    Interval U = seed;
    for (int it = 0; it < max_iter; ++it) {
        Interval V = F0.image_hull(U);
        V.lo -= eps;
        V.hi += eps;
        if (V.lo >= U.lo && V.hi <= U.hi) return U;
        if (!(V.lo > 0.0)) return std::nullopt;  // touched zero; growth cannot recover
        U.lo = std::min(U.lo, V.lo);
        U.hi = std::max(U.hi, V.hi);
    }
    return std::nullopt;
}

double small_noise_bound(const ModelSpec& model) {
    if (!model.bounded_env()) return kInf;
    const SkeletonMap F0(model);
    const int n_params = model.n_params();

    // Support corners of the stochastic parameters; f is monotone in each
    // parameter at fixed x, so corners bracket the fitness range.
    std::vector<int> stoch;
    for (int i = 0; i < n_params; ++i)
        if (model.stochastic(i)) stoch.push_back(i);
    std::vector<EnvDraw> corners;
    const int n_corners = 1 << stoch.size();
    const EnvDraw base = model.mean_draw();
    for (int mask = 0; mask < n_corners; ++mask) {
        EnvDraw d = base;
        for (size_t k = 0; k < stoch.size(); ++k) {
            const Interval s = model.param(stoch[k]).support();
            d[stoch[k]] = (mask >> k) & 1 ? s.hi : s.lo;
        }
        corners.push_back(d);
    }

    const double x_max = F0.x_max();
    double bound = 0.0;
    auto probe = [&](double x) {
        const double mid = F0(x);
        for (const EnvDraw& d : corners) {
            const double v = x * model.fitness(x, d);
            bound = std::max(bound, std::fabs(v - mid));
        }
    };
    const int n_lin = 20000;
    for (int i = 0; i <= n_lin; ++i) probe(x_max * i / n_lin);
    const int n_log = 4000;
    for (int i = 0; i <= n_log; ++i)
        probe(x_max * 1e-9 * std::exp(i * std::log(1e6) / n_log));
    return bound;
}

}  // namespace alleesim

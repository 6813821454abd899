#pragma once

#include <functional>

#include "alleesim/env.hpp"

namespace alleesim {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;  // conservative error estimate
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-11, double rel_tol = 1e-9);

// E[g(X)] for X ~ dist, by 1-D quadrature on a transformed domain.
// Unbounded laws are truncated where the remaining mass is < 1e-30.
QuadResult expect(const EnvDistribution& dist, const std::function<double(double)>& g,
                  double abs_tol = 1e-11, double rel_tol = 1e-9);

// Root of f on [a,b] with f(a), f(b) of opposite sign; bisection to x_tol.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double x_tol = 1e-10);

// Interior maximizer of f on [a,b] by golden-section search to x_tol.
// Assumes f is unimodal on [a,b].
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double x_tol = 1e-10);

// Runs fn(i) for i in [0,n) across `threads` workers on contiguous blocks.
// fn must only touch state indexed by i; results are position-addressed, so
// the outcome is identical for every thread count.
void parallel_for(long n, const std::function<void(long)>& fn, int threads);

}  // namespace alleesim

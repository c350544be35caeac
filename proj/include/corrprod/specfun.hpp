#pragma once

// Real-parameter special functions used by the density evaluators.
//
// Functions that can overflow come with a log-space companion; the density
// code works almost exclusively with those. All functions are pure.

#include <vector>

#include "corrprod/types.hpp"

namespace corrprod::specfun {

/// A value carried as sign * exp(log_abs).
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    double value() const;
};

/// Value of a truncated series together with the number of terms it used.
struct SeriesValue {
    double value = 0.0;
    int terms_used = 0;
};

// Gamma family --------------------------------------------------------------

/// Euler gamma. Throws PoleError at non-positive integers and OverflowError
/// above ~171.6.
double gamma(double x);

/// log|Gamma(x)|. Throws PoleError at non-positive integers.
double log_gamma(double x);

/// Sign of Gamma(x) (+1 for x > 0).
int gamma_sign(double x);

/// 1 / Gamma(x), zero at the poles.
double rgamma(double x);

/// Ascending factorial u (u+1) ... (u+j-1); pochhammer(u, 0) = 1.
double pochhammer(double u, int j);

/// log C(n, k).
double log_binomial(int n, int k);

// Bessel --------------------------------------------------------------------

/// I_nu(x) by its power series; x >= 0 (x > 0 when nu < 0 is non-integer).
double bessel_i(double nu, double x);

/// exp(-x) I_nu(x); safe for large x.
double bessel_i_scaled(double nu, double x);

/// log I_nu(x) for x > 0 and I_nu(x) > 0 (nu > -1, or nu an integer).
double log_bessel_i(double nu, double x);

/// The raw power series with explicit term accounting. Throws
/// ConvergenceError instead of truncating silently.
SeriesValue bessel_i_series(double nu, double x, const SpecFunOptions& opts = {});

/// K_nu(x) for x > 0 by the Laplace-type integral
/// K_nu(x) = 1/2 (x/2)^nu int_0^inf exp(-t - x^2/(4t)) t^(-nu-1) dt,
/// integrated after t = (x/2) e^w.
double bessel_k(double nu, double x);

/// exp(x) K_nu(x).
double bessel_k_scaled(double nu, double x);

double log_bessel_k(double nu, double x);

/// log K_{nu0 + i}(x) for i = 0 .. count-1. The first two orders come from
/// quadrature, the rest from the (stable) upward recurrence.
std::vector<double> log_bessel_k_sequence(double nu0, double x, int count);

// Confluent hypergeometric ----------------------------------------------------

/// log of int_0^inf exp(-x t) t^(a-1) (1+t)^c dt for a > 0, x > 0.
/// Equals log(Gamma(a) U(a, a + c + 1, x)).
double log_laplace_kernel(double a, double c, double x);

/// Tricomi's U(a, b, x) for x > 0 and any real a, b.
double tricomi_u(double a, double b, double x);

/// sign and log|U(a, b, x)|; never overflows.
SignedLog log_tricomi_u(double a, double b, double x);

/// 0F1(; b; x) by its power series.
double hyp_0f1(double b, double x);
SeriesValue hyp_0f1_series(double b, double x, const SpecFunOptions& opts = {});

/// log 0F1(; b; x) for b > 0, x >= 0.
double log_hyp_0f1(double b, double x);

/// sum_{j=0}^k C(k,j) w^j / ((u)_{k-j} (u)_j), a polynomial of degree k in w.
double hyp_2f1_poly(double u, int k, double w);

/// Whittaker W_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} U(1/2+mu-kappa, 1+2mu, x).
double whittaker_w(double kappa, double mu, double x);

} // namespace corrprod::specfun

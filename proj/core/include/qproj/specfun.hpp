#pragma once

#include <span>
#include <vector>

namespace qproj::specfun {

// Physicists' Hermite polynomial H_n(z) by forward recurrence.
// Returns +/-inf (never NaN) once the recurrence overflows.
double hermite(unsigned n, double z);

// Legendre polynomial P_n(z), Bonnet recurrence.
double legendre(unsigned n, double z);

// P_n(1 + 2x/sqrt_alpha) for x in [-sqrt_alpha, 0]. Throws std::domain_error outside.
double legendre_shifted(unsigned n, double x, double sqrt_alpha);

// ln Gamma(twice_arg / 2). Throws std::domain_error for twice_arg < 1.
double log_gamma_half(int twice_arg);

// sin(u)/u with sinc(0) = 1.
double sinc(double u);

struct CompensatedSum {
  double value = 0.0;
  // max |partial sum| / |value|; 1 when nothing cancels, +inf for an exact zero
  // reached through nonzero partial sums.
  double cancellation = 1.0;
};

// Neumaier summation plus a cancellation diagnostic.
CompensatedSum compensated_sum(std::span<const double> terms);

// Normalized oscillator eigenfunction psi_n(x) = <x|n>.
double hermite_function(unsigned n, double x);

// psi_0(x) .. psi_nmax(x) written to out (size nmax+1), stable three-term recurrence.
void hermite_functions(unsigned nmax, double x, std::span<double> out);
std::vector<double> hermite_functions(unsigned nmax, double x);

}  // namespace qproj::specfun

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace combmap {

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached, thread-safe access; n >= 1.
const GaussRule& gauss_legendre(int n);

// integral of f over [a, b] with an n-point Gauss-Legendre rule
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

// integral of f over [a, b] after the substitution x = mid + half*cos(theta);
// absorbs inverse-square-root endpoint singularities of f
double gauss_integrate_cos(const std::function<double(double)>& f, double a, double b, int n);

// In-place radix-2 complex FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// DCT-I of samples f_0..f_M (uniform theta_j = j*pi/M, M a power of two).
// Returns coefficients A_0..A_M such that
//   f(theta) ~= sum_{k=0}^{M} A_k cos(k theta),
// exact at the sample nodes.
std::vector<double> dct_interpolant(const std::vector<double>& samples);

// Dense linear solve with partial pivoting; A is row-major n x n, overwritten.
// Returns false on (numerical) singularity.
bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n);

} // namespace combmap

#include "combmap/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace combmap {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_n starting from the Chebyshev-like guess
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.w[i] * f(mid + half * rule.x[i]);
    return acc * half;
}

double gauss_integrate_cos(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    // theta in (0, pi); weight half*sin(theta) is the Jacobian of x = mid + half*cos(theta)
    for (int i = 0; i < n; ++i) {
        double theta = 0.5 * std::numbers::pi * (rule.x[i] + 1.0);
        acc += rule.w[i] * f(mid + half * std::cos(theta)) * std::sin(theta);
    }
    return acc * half * 0.5 * std::numbers::pi;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= static_cast<double>(n);
}

std::vector<double> dct_interpolant(const std::vector<double>& samples) {
    const std::size_t M = samples.size() - 1;
    if (M == 0) return {samples[0]};
    if ((M & (M - 1)) != 0) throw std::invalid_argument("dct sample count must be 2^k + 1");
    // even extension of length 2M, then one complex FFT
    std::vector<std::complex<double>> ext(2 * M);
    for (std::size_t j = 0; j <= M; ++j) ext[j] = samples[j];
    for (std::size_t j = 1; j < M; ++j) ext[2 * M - j] = samples[j];
    fft_inplace(ext, false);
    std::vector<double> A(M + 1);
    A[0] = ext[0].real() / (2.0 * M);
    A[M] = ext[M].real() / (2.0 * M);
    for (std::size_t k = 1; k < M; ++k) A[k] = ext[k].real() / static_cast<double>(M);
    return A;
}

bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A[r * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0 || !std::isfinite(best)) return false;
        if (piv != col) {
            for (int c = col; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double factor = A[r * n + col] / d;
            if (factor == 0.0) continue;
            for (int c = col; c < n; ++c) A[r * n + c] -= factor * A[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= A[r * n + c] * b[c];
        b[r] = acc / A[r * n + r];
        if (!std::isfinite(b[r])) return false;
    }
    return true;
}

} // namespace combmap

#pragma once

#include <complex>
#include <vector>

namespace loopframe::spectral {

using cplx = std::complex<double>;

// Smallest power of two >= 4n+1. Products of four modes reach wavenumber 4n,
// so this grid makes quartic quadratures alias-free.
int quartic_grid_size(int n);

// u(theta_m) = sum_k c[k] e^{i k theta_m} on theta_m = 2 pi m / M.
// Coefficients are centered: c[j + n] holds mode j, |j| <= n. Wavenumbers are
// folded mod M, which reproduces the exact sum even when M < 2n+1.
std::vector<cplx> synthesize(const std::vector<cplx>& centered, int n, int M);

// Inverse of synthesize when M >= 2n+1: returns centered modes |j| <= n of the
// trigonometric interpolant, i.e. (1/M) sum_m u_m e^{-i j theta_m}.
std::vector<cplx> analyze_modes(const std::vector<cplx>& grid, int n);

// Unnormalized DFT: out[k] = sum_m in[m] e^{-2 pi i k m / M}.
std::vector<cplx> dft_forward(const std::vector<cplx>& in);
// out[m] = sum_k in[k] e^{+2 pi i k m / M}.
std::vector<cplx> dft_backward(const std::vector<cplx>& in);

}  // namespace loopframe::spectral

#ifndef FRACSEMI_FFT_HPP
#define FRACSEMI_FFT_HPP

#include <complex>
#include <vector>

namespace fracsemi::fft {

// Forward transform is unscaled; the inverse carries the 1/n^N factor.
// dim is 1 or 2; for dim == 2 the data is row-major n x n.

std::vector<std::complex<double>> forward(const std::vector<double>& values,
                                          int dim, int n);

// Inverse of `forward`; returns the real part (imaginary residue discarded).
std::vector<double> inverse_real(const std::vector<std::complex<double>>& spectrum,
                                 int dim, int n);

} // namespace fracsemi::fft

#endif

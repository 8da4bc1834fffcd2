#pragma once

#include <complex>

namespace sfwm::special {

using cplx = std::complex<double>;

// Faddeeva w(z) = exp(-z^2) erfc(-iz), whole plane.
cplx faddeeva(cplx z);

// Complex error function. Throws FaddeevaOverflow when |Im z| > 26.
cplx erf(cplx z);

// exp(-y^2) * erf(c - i y), evaluated without forming either factor alone.
cplx erf_shift_scaled(double c, double y);

}  // namespace sfwm::special

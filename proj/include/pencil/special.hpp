#pragma once

#include "pencil/types.hpp"

namespace pencil {

/// n-th derivative of j(z) = sin(z)/z, entire in z.
cplx sinc_deriv(cplx z, int n);

/// n-th derivative of sin(z).
cplx sin_deriv(cplx z, int n);

/// n-th derivative of cos(z).
cplx cos_deriv(cplx z, int n);

double factorial(int n);

/// z^p for p >= 0, with 0^0 = 1.
cplx ipow(cplx z, int p);
double binomial(int n, int k);

}  // namespace pencil

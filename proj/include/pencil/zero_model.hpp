#pragma once

#include "pencil/types.hpp"

/// Closed forms for the unperturbed pencil (q0 = q1 = 0), where
/// S(x, l) = sin(l x) / l and the kernel D(x, l, m) is the divided difference
/// (S(l) S'(m) - S'(l) S(m)) / (l - m).  All derivatives are plain
/// (unnormalized) partial derivatives in the spectral arguments.
namespace pencil::zero_model {

/// Highest total derivative order supported by the kernel closed forms.
inline constexpr int kMaxKernelOrder = 12;

/// d^a/dl^a S(x, l).
cplx S(double x, cplx lambda, int a = 0);

/// d^a/dl^a of the x-derivative S'(x, l) = cos(l x).
cplx Sx(double x, cplx lambda, int a = 0);

enum class KernelForm { Series, ProductToSum, DividedDifference };

/// Form picked by D() for the given arguments.
KernelForm select_form(double x, cplx lambda, cplx mu);

/// d^a/dl^a d^b/dm^b D(x, l, m).
cplx D(double x, cplx lambda, cplx mu, int a = 0, int b = 0);

/// Same, forcing a particular closed form (used to cross-check the branches).
cplx D_with_form(KernelForm form, double x, cplx lambda, cplx mu, int a, int b);

/// d^a/dl^a d^b/dm^b of dD/dx = (l + m) S(x, l) S(x, m).
cplx Dx(double x, cplx lambda, cplx mu, int a = 0, int b = 0);

/// Weyl function M(l) = -l cot(pi l).
cplx weyl(cplx lambda);

}  // namespace pencil::zero_model

#ifndef KREIN_POLYNOMIAL_HPP
#define KREIN_POLYNOMIAL_HPP

#include <vector>

#include "krein/types.hpp"

namespace krein {

// Dense real polynomial, coefficients in ascending order: c[0] + c[1] x + ...
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double s);
// Substitute x -> s*x (rescales the variable; roots divide by s).
Poly poly_stretch(const Poly& a, double s);
int poly_degree(const Poly& a, double drop_tol);

// All complex roots via the balanced companion matrix.  Leading/trailing
// near-zero coefficients are stripped (a zero constant term contributes roots
// at the origin).  Throws DegenerateSystemError when the polynomial vanishes
// identically.
std::vector<Complex> poly_roots(const Poly& coeffs);

}  // namespace krein

#endif

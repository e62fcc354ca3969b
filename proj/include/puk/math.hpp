#pragma once

namespace puk::math {

// Error function, evaluated in-repo so results do not depend on the host
// libm. Rational minimax approximations after W. J. Cody (Math. Comp. 1969);
// absolute error well below 1e-14 everywhere.
double erf(double x);
double erfc(double x);

}  // namespace puk::math

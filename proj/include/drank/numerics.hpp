#pragma once

// Error function and its inverses, in extended precision.
//
// Everything here is long double. Near |t| = 5, erf(t) sits within ~1e-12 of
// 1, so a double result keeps only four significant digits of 1 - erf(t) and
// erf_inv(erf(t)) cannot get back within 1e-8 of t. The x87 80-bit format
// keeps enough of them.
//
// erf/erfc come from the C library (erfl/erfcl). The inverses start from
// Giles' single-precision approximation and are polished with Newton steps
// against erf/erfc.

namespace drank::numerics {

// Gauss error function. Odd by construction: erf(-t) == -erf(t) bit for bit.
long double erf(long double t) noexcept;

// Complementary error function 1 - erf(t).
long double erfc(long double t) noexcept;

// Inverse of erf on the open interval (-1, 1). Throws DomainError otherwise.
long double erf_inv(long double p);

// Inverse of erfc on the open interval (0, 2). Throws DomainError otherwise.
// Accurate for q near 0, where 1 - q is not representable.
long double erfc_inv(long double q);

// Standard normal CDF and quantile.
long double normal_cdf(long double z) noexcept;
long double normal_quantile(long double u);

} // namespace drank::numerics

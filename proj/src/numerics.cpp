#include "drank/numerics.hpp"

#include "drank/errors.hpp"

#include <cmath>
#include <string>

namespace drank::numerics {

namespace {

constexpr long double kTwoOverSqrtPi = 1.1283791670955125738961589031215452L;
constexpr long double kSqrt2 = 1.4142135623730950488016887242096981L;
constexpr long double kStepTolerance = 1e-19L;
constexpr int kMaxNewton = 12;

// Single-precision erfinv seed (M. Giles, "Approximating the erfinv function",
// GPU Computing Gems, 2010), about 1e-7 relative. w = -log((1-x)(1+x)) is
// passed in so callers can form it from q = 1 - x without cancellation.
double giles_seed(double x, double w)
{
    double p;
    if (w < 5.0) {
        w -= 2.5;
        p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
    } else {
        w = std::sqrt(w) - 3.0;
        p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
    }
    return p * x;
}

// erf_inv for 0 < p <= 0.5, Newton on erf.
long double erf_inv_central(long double p)
{
    const auto pd = static_cast<double>(p);
    long double t = giles_seed(pd, -std::log1p(-pd * pd));
    for (int i = 0; i < kMaxNewton; ++i) {
        const long double step = (std::erf(t) - p) / (kTwoOverSqrtPi * std::exp(-t * t));
        t -= step;
        if (std::fabs(step) <= kStepTolerance * std::fabs(t)) {
            break;
        }
    }
    return t;
}

// erfc_inv for 0 < q < 0.5. Newton on log(erfc(t)) - log(q): in the tail
// erfc falls like exp(-t^2), and plain Newton on erfc overshoots badly from
// any seed that is slightly too large.
long double erfc_inv_tail(long double q)
{
    const long double log_q = std::log(q);
    const long double w = -std::log(q * (2.0L - q));
    long double t;
    if (w < 16.0L) {
        t = giles_seed(1.0 - static_cast<double>(q), static_cast<double>(w));
    } else {
        // Leading terms of the asymptotic expansion of erfc.
        const long double l = -log_q;
        t = std::sqrt(l - 0.5L * std::log(3.14159265358979323846L * l));
    }
    for (int i = 0; i < kMaxNewton; ++i) {
        const long double e = std::erfc(t);
        const long double step = (std::log(e) - log_q) * e / (kTwoOverSqrtPi * std::exp(-t * t));
        t += step;
        if (std::fabs(step) <= kStepTolerance * std::fabs(t)) {
            break;
        }
    }
    return t;
}

} // namespace

long double erf(long double t) noexcept
{
    const long double r = std::erf(std::fabs(t));
    return std::signbit(t) ? -r : r;
}

long double erfc(long double t) noexcept
{
    return std::erfc(t);
}

long double erf_inv(long double p)
{
    if (!(p > -1.0L && p < 1.0L)) {
        throw DomainError("erf_inv: argument " + std::to_string(static_cast<double>(p)) + " outside (-1, 1)");
    }
    const long double a = std::fabs(p);
    long double r = 0.0L;
    if (a > 0.5L) {
        r = erfc_inv_tail(1.0L - a);
    } else if (a > 0.0L) {
        r = erf_inv_central(a);
    }
    return std::signbit(p) ? -r : r;
}

long double erfc_inv(long double q)
{
    if (!(q > 0.0L && q < 2.0L)) {
        throw DomainError("erfc_inv: argument " + std::to_string(static_cast<double>(q)) + " outside (0, 2)");
    }
    if (q < 0.5L) {
        return erfc_inv_tail(q);
    }
    if (q > 1.5L) {
        return -erfc_inv_tail(2.0L - q);
    }
    return erf_inv(1.0L - q);
}

long double normal_cdf(long double z) noexcept
{
    return 0.5L * std::erfc(-z / kSqrt2);
}

long double normal_quantile(long double u)
{
    if (!(u > 0.0L && u < 1.0L)) {
        throw DomainError("normal_quantile: probability " + std::to_string(static_cast<double>(u)) +
                          " outside (0, 1)");
    }
    return -kSqrt2 * erfc_inv(2.0L * u);
}

} // namespace drank::numerics

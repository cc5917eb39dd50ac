#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace opuc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Bad inputs, domain violations, unsupported requests.  CLI exit code 2.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runtime numerical degeneracy (lost positive definiteness, singular pivot,
/// non-convergent quadrature, ...).  CLI exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double t) {
    t = std::fmod(t, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
}

inline cplx unit_circle(double theta) { return cplx(std::cos(theta), std::sin(theta)); }

}  // namespace opuc

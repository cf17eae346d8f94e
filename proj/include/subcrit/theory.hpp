#ifndef SUBCRIT_THEORY_HPP
#define SUBCRIT_THEORY_HPP

#include <optional>
#include <vector>

#include "subcrit/type_space.hpp"

namespace subcrit {

// Natural-log overflow guard for all exponent evaluations. Atoms pushing an
// exponent past this raise ExponentOverflow instead of returning infinity,
// which keeps bracketing and monotone iteration well-defined.
inline constexpr double kExponentGuard = 700.0;

enum class Regime { subcritical, at_or_above_critical };

/// Tangency point and decay constant for either the progeny radius r(c) or
/// the activity radius alpha(c), with solver diagnostics.
struct TangencySolution {
    double y0;             // tangency point, > 1 subcritically, 1 otherwise
    double z0;             // decay constant r(c) or alpha(c); 1 at/above critical
    double residual_fixed; // |z0*f(y0) - y0|, resp. |F(y0,z0) - y0|
    double residual_slope; // |z0*f'(y0) - 1|, resp. |dF/dy(y0,z0) - 1|
    long iterations;
    Regime regime;
};

struct FSlope {
    double value;
    double slope;
};

/// f(y) = (1/m1) E[psi(X) exp{c psi(X) m1 (y-1)}] and its y-derivative
/// c E[psi^2(X) exp{c psi(X) m1 (y-1)}], both as exact sums over atoms.
FSlope f_eval(const TypeSpace& space, double c, double y);

/// The unique y > 1 with y = f(y)/f'(y), i.e. the root of
/// g(y) = f(y) - y f'(y); requires c strictly below c_critical.
double solve_y(const TypeSpace& space, double c);

TangencySolution r_solution(const TypeSpace& space, double c);
TangencySolution alpha_solution(const TypeSpace& space, double c);

/// Decay constant of the activity-weighted progeny generating function;
/// equals 1 for c >= c_critical.
double r_of_c(const TypeSpace& space, double c);

/// Decay constant of the total-activity generating function; equals 1 for
/// c >= c_critical.
double alpha_of_c(const TypeSpace& space, double c);

enum class IterationVerdict { converged, diverged, inconclusive };

struct GFIterationTrace {
    double z;
    IterationVerdict verdict;
    std::optional<double> limit_value; // minimal fixed point when converged
    long iterations;
};

/// Monotone iteration H <- z E[psi(X) exp{c psi(X)(H - m1)}] from H = 0.
/// cap <= 0 selects the default divergence cap 1e12 * m1.
GFIterationTrace iterate_H(const TypeSpace& space, double c, double z,
                           long max_iter = 100000, double cap = -1.0,
                           std::vector<double>* history = nullptr);

/// Activity-weighted variant: G <- E[z^psi(X) psi(X) exp{c psi(X)(G - m1)}].
GFIterationTrace iterate_G(const TypeSpace& space, double c, double z,
                           long max_iter = 100000, double cap = -1.0,
                           std::vector<double>* history = nullptr);

enum class ScanMode { progeny, activity };

struct ScanBracket {
    double z_lo; // converged
    double z_hi; // diverged
};

/// Brackets the radius of convergence by bisection on the iteration verdict;
/// the independent oracle for r_of_c and alpha_of_c.
ScanBracket radius_scan(const TypeSpace& space, double c, ScanMode mode,
                        double rel_tol);

/// Closed form log r = c - 1 + |log c| of the homogeneous model, 0 < c < 1.
double er_log_r(double c);

} // namespace subcrit

#endif

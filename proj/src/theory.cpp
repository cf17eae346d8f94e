#include "subcrit/theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace subcrit {

namespace {

struct Curve {
    double value;
    double slope;
    double curvature;
};

// f(y,z) = z * (1/m1) E[psi e^{c psi m1 (y-1)}] in the progeny case and
// F(y,z) = (1/m1) E[z^psi psi e^{c psi m1 (y-1)}] in the activity case.
// Both reduce to per-atom exponents psi*(log_z_factor + c*m1*(y-1)).
Curve map_eval(const TypeSpace& space, double c, double m1, double y, double log_z,
               bool activity_weighted) {
    const Eigen::ArrayXd& psi = space.activities;
    Eigen::ArrayXd expo = psi * (c * m1 * (y - 1.0));
    if (activity_weighted) expo += psi * log_z;

    const double max_expo = expo.maxCoeff();
    if (max_expo > kExponentGuard) throw ExponentOverflow(max_expo, kExponentGuard);

    const Eigen::ArrayXd base = space.weights * psi * expo.exp();
    Curve out;
    out.value = base.sum() / m1;
    out.slope = c * (base * psi).sum();
    out.curvature = c * c * m1 * (base * psi.square()).sum();
    return out;
}

double max_activity(const TypeSpace& space) { return space.activities.maxCoeff(); }

// Largest y with every exponent at or below the guard, for a given log z.
double guard_boundary_y(const TypeSpace& space, double c, double m1, double log_z) {
    const double pm = max_activity(space);
    return 1.0 + (kExponentGuard / pm - log_z) / (c * m1);
}

struct Feasibility {
    bool feasible;
    double y_star;         // minimizer of F(y,z) - y over y >= 1
    double min_value;      // F(y_star,z) - y_star
    double slope_residual; // |dF/dy(y_star,z) - 1|; 0 when the minimum sits at y = 1
    long evals;
};

// Convex inner problem: minimize F(y,z) - y over y >= 1 by solving
// dF/dy = 1 (Newton with bisection fallback; the slope is increasing in y).
Feasibility minimize_gap(const TypeSpace& space, double c, double m1, double z) {
    const double log_z = std::log(z);
    Feasibility out{};

    Curve at1 = map_eval(space, c, m1, 1.0, log_z, true);
    ++out.evals;
    if (at1.slope >= 1.0) {
        out.y_star = 1.0;
        out.min_value = at1.value - 1.0;
        out.slope_residual = 0.0;
        out.feasible = out.min_value <= 0.0;
        return out;
    }

    // Bracket the slope crossing. Overflow means the crossing sits below the
    // representable boundary, so fall back to just inside it.
    double lo = 1.0, hi = 1.0 + 0.5;
    const double y_guard = guard_boundary_y(space, c, m1, log_z) * (1.0 - 1e-12);
    while (true) {
        if (hi >= y_guard) {
            hi = y_guard;
            Curve g = map_eval(space, c, m1, hi, log_z, true);
            ++out.evals;
            if (g.slope < 1.0) {
                std::ostringstream msg;
                msg << "activity map slope stays below 1 up to the overflow guard (z=" << z
                    << ", y_guard=" << y_guard << ", slope=" << g.slope << ")";
                throw BracketNotFound(msg.str());
            }
            break;
        }
        Curve g = map_eval(space, c, m1, hi, log_z, true);
        ++out.evals;
        if (g.slope >= 1.0) break;
        lo = hi;
        hi = 1.0 + 2.0 * (hi - 1.0);
    }

    // Safeguarded Newton on s(y) = dF/dy - 1.
    double y = 0.5 * (lo + hi);
    Curve cur{};
    for (int it = 0; it < 200; ++it) {
        cur = map_eval(space, c, m1, y, log_z, true);
        ++out.evals;
        const double s = cur.slope - 1.0;
        if (std::abs(s) <= 1e-12) break;
        if (s > 0.0) hi = y; else lo = y;
        double y_next = y - s / cur.curvature;
        if (!(y_next > lo) || !(y_next < hi)) y_next = 0.5 * (lo + hi);
        if (y_next == y) break;
        y = y_next;
    }

    out.y_star = y;
    out.min_value = cur.value - y;
    out.slope_residual = std::abs(cur.slope - 1.0);
    out.feasible = out.min_value <= 0.0;
    return out;
}

} // namespace

FSlope f_eval(const TypeSpace& space, double c, double y) {
    const double m1 = moments(space).m1;
    Curve cur = map_eval(space, c, m1, y, 0.0, false);
    return {cur.value, cur.slope};
}

double solve_y(const TypeSpace& space, double c) {
    const double c_cr = c_critical(space);
    if (!(c < c_cr)) throw NotSubcritical(c, c_cr);
    const double m1 = moments(space).m1;

    auto gap = [&](const Curve& cur, double y) { return cur.value - y * cur.slope; };

    // g(1) = 1 - c/c_cr > 0; expand until the convex map crosses below zero.
    double lo = 1.0, hi = 2.0;
    while (true) {
        Curve cur;
        try {
            cur = map_eval(space, c, m1, hi, 0.0, false);
        } catch (const ExponentOverflow&) {
            std::ostringstream msg;
            msg << "g(y) = f - y f' kept its sign up to the overflow guard (c=" << c
                << ", y=" << hi << ")";
            throw BracketNotFound(msg.str());
        }
        if (gap(cur, hi) < 0.0) break;
        lo = hi;
        hi = 1.0 + 2.0 * (hi - 1.0);
        if (hi > 1e15) {
            std::ostringstream msg;
            msg << "g(y) = f - y f' has no sign change below y = 1e15 (c=" << c << ")";
            throw BracketNotFound(msg.str());
        }
    }

    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        Curve cur = map_eval(space, c, m1, y, 0.0, false);
        const double g = gap(cur, y);
        if (std::abs(g) / cur.slope <= 1e-13 * y) return y;
        if (g > 0.0) lo = y; else hi = y;
        double y_next = y + g / (y * cur.curvature); // g' = -y f''
        if (!(y_next > lo) || !(y_next < hi)) y_next = 0.5 * (lo + hi);
        if (y_next == y) return y;
        y = y_next;
    }
    return y;
}

TangencySolution r_solution(const TypeSpace& space, double c) {
    const double c_cr = c_critical(space);
    if (c >= c_cr)
        return {1.0, 1.0, 0.0, 0.0, 0, Regime::at_or_above_critical};

    const double m1 = moments(space).m1;
    const double y0 = solve_y(space, c);
    Curve cur = map_eval(space, c, m1, y0, 0.0, false);
    const double z0 = 1.0 / cur.slope;
    TangencySolution sol;
    sol.y0 = y0;
    sol.z0 = z0;
    sol.residual_fixed = std::abs(z0 * cur.value - y0);
    sol.residual_slope = std::abs(z0 * cur.slope - 1.0);
    sol.iterations = 0;
    sol.regime = Regime::subcritical;
    return sol;
}

TangencySolution alpha_solution(const TypeSpace& space, double c) {
    const double c_cr = c_critical(space);
    if (c >= c_cr)
        return {1.0, 1.0, 0.0, 0.0, 0, Regime::at_or_above_critical};

    const double m1 = moments(space).m1;
    // Keep z^psi inside the certified summable domain of the untruncated
    // family when a tail certificate is present.
    const double z_cap = space.tail_rate ? std::exp(*space.tail_rate)
                                         : std::exp(0.5 * kExponentGuard / max_activity(space));

    long iters = 0;
    double z_lo = 1.0, y_lo = 1.0;
    double min_lo = 0.0, slope_res_lo = 0.0;
    double z_hi = std::numeric_limits<double>::quiet_NaN();

    double step = 0.5;
    while (true) {
        double z_try = 1.0 + step;
        bool at_cap = false;
        if (z_try >= z_cap) {
            z_try = z_cap;
            at_cap = true;
        }
        Feasibility f = minimize_gap(space, c, m1, z_try);
        iters += f.evals;
        if (f.feasible) {
            if (at_cap) {
                std::ostringstream msg;
                msg << "activity radius exceeds the z-search cap " << z_cap
                    << (space.tail_rate ? " = exp(tail_rate)" : " (overflow guard)")
                    << "; feasible at the cap with gap " << f.min_value;
                throw BracketNotFound(msg.str());
            }
            z_lo = z_try;
            y_lo = f.y_star;
            min_lo = f.min_value;
            slope_res_lo = f.slope_residual;
            step *= 2.0;
        } else {
            z_hi = z_try;
            break;
        }
    }

    while (z_hi - z_lo > 5e-13 * z_lo) {
        const double z_mid = 0.5 * (z_lo + z_hi);
        Feasibility f = minimize_gap(space, c, m1, z_mid);
        iters += f.evals;
        if (f.feasible) {
            z_lo = z_mid;
            y_lo = f.y_star;
            min_lo = f.min_value;
            slope_res_lo = f.slope_residual;
        } else {
            z_hi = z_mid;
        }
    }

    TangencySolution sol;
    sol.y0 = y_lo;
    sol.z0 = z_lo;
    sol.residual_fixed = std::abs(min_lo);
    sol.residual_slope = slope_res_lo;
    sol.iterations = iters;
    sol.regime = Regime::subcritical;
    return sol;
}

double r_of_c(const TypeSpace& space, double c) { return r_solution(space, c).z0; }

double alpha_of_c(const TypeSpace& space, double c) { return alpha_solution(space, c).z0; }

namespace {

GFIterationTrace iterate_impl(const TypeSpace& space, double c, double z, long max_iter,
                              double cap, bool activity_weighted,
                              std::vector<double>* history) {
    const double m1 = moments(space).m1;
    const double cap_value = cap > 0.0 ? cap : 1e12 * m1;
    const double log_z = activity_weighted ? std::log(z) : 0.0;
    const double psi_max = max_activity(space);
    const Eigen::ArrayXd& psi = space.activities;

    GFIterationTrace trace;
    trace.z = z;
    trace.verdict = IterationVerdict::inconclusive;
    trace.iterations = 0;

    double h = 0.0;
    if (history) history->push_back(h);
    for (long it = 1; it <= max_iter; ++it) {
        trace.iterations = it;

        // Map output would exceed e^700 >> cap: divergence is already decided.
        const double factor = log_z + c * (h - m1);
        if (factor > 0.0 && psi_max * factor > kExponentGuard) {
            trace.verdict = IterationVerdict::diverged;
            return trace;
        }

        Eigen::ArrayXd expo = psi * (c * (h - m1));
        if (activity_weighted) expo += psi * log_z;
        double h_next = (space.weights * psi * expo.exp()).sum();
        if (!activity_weighted) h_next *= z;

        if (history) history->push_back(h_next);
        if (!std::isfinite(h_next) || h_next > cap_value) {
            trace.verdict = IterationVerdict::diverged;
            return trace;
        }
        if (std::abs(h_next - h) < 1e-12 * std::abs(h_next)) {
            trace.verdict = IterationVerdict::converged;
            trace.limit_value = h_next;
            return trace;
        }
        h = h_next;
    }
    return trace;
}

} // namespace

GFIterationTrace iterate_H(const TypeSpace& space, double c, double z, long max_iter,
                           double cap, std::vector<double>* history) {
    return iterate_impl(space, c, z, max_iter, cap, false, history);
}

GFIterationTrace iterate_G(const TypeSpace& space, double c, double z, long max_iter,
                           double cap, std::vector<double>* history) {
    return iterate_impl(space, c, z, max_iter, cap, true, history);
}

ScanBracket radius_scan(const TypeSpace& space, double c, ScanMode mode, double rel_tol) {
    if (!(rel_tol > 1e-6) || !(rel_tol < 0.1))
        throw OutOfRange("radius_scan rel_tol must lie in (1e-6, 0.1), got " +
                         std::to_string(rel_tol));
    const double c_cr = c_critical(space);
    if (!(c < c_cr)) throw NotSubcritical(c, c_cr);

    auto verdict_at = [&](double z) {
        long iters = 100000;
        for (int attempt = 0; attempt < 4; ++attempt) {
            GFIterationTrace t = mode == ScanMode::progeny
                                     ? iterate_H(space, c, z, iters)
                                     : iterate_G(space, c, z, iters);
            if (t.verdict != IterationVerdict::inconclusive) return t.verdict;
            iters *= 10;
        }
        std::ostringstream msg;
        msg << "iteration verdict still inconclusive at z=" << z << " after " << iters
            << " iterations";
        throw BracketNotFound(msg.str());
    };

    double z_lo = 1.0;
    double z_hi = std::numeric_limits<double>::quiet_NaN();
    double step = 0.5;
    while (true) {
        const double z_try = 1.0 + step;
        if (verdict_at(z_try) == IterationVerdict::diverged) {
            z_hi = z_try;
            break;
        }
        z_lo = z_try;
        step *= 2.0;
        if (step > 1e9) throw BracketNotFound("no divergent z found below 1e9");
    }

    while (z_hi / z_lo - 1.0 > rel_tol) {
        const double z_mid = 0.5 * (z_lo + z_hi);
        if (verdict_at(z_mid) == IterationVerdict::diverged)
            z_hi = z_mid;
        else
            z_lo = z_mid;
    }
    return {z_lo, z_hi};
}

double er_log_r(double c) {
    if (!(c > 0.0) || !(c < 1.0))
        throw OutOfRange("er_log_r requires 0 < c < 1, got " + std::to_string(c));
    return c - 1.0 + std::abs(std::log(c));
}

} // namespace subcrit

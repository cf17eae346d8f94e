#ifndef SUBCRIT_TYPE_SPACE_HPP
#define SUBCRIT_TYPE_SPACE_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "subcrit/errors.hpp"

namespace subcrit {

/// One atom of a discrete type space: a label x, its probability mass, and
/// the activity psi(x) that drives edge intensities.
struct TypeAtom {
    double label;
    double weight;
    double activity;
};

/// Finite discrete type space (S, mu, psi). Countable families enter only
/// after truncation, which records the discarded mass and, when the family
/// certifies an exponential tail, the certifying rate.
///
/// Immutable after construction; safe to share across parallel workers.
struct TypeSpace {
    Eigen::ArrayXd labels;     // sorted ascending, pairwise distinct
    Eigen::ArrayXd weights;    // positive, sums to 1
    Eigen::ArrayXd activities; // positive

    // Rate a with sum_x exp(a*psi(x)) mu(x) < infinity over the pre-truncation
    // family; absent for natively finite spaces and bounded-psi families.
    std::optional<double> tail_rate;

    // Mass discarded by truncation (0 for natively finite spaces).
    double truncation_residual = 0.0;

    Eigen::Index size() const { return labels.size(); }

    /// Atom index of an exact label, or -1.
    Eigen::Index find_label(double label) const {
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        return -1;
    }
};

/// First and second activity moments under mu.
struct Moments {
    double m1; // E psi(X)
    double m2; // E psi^2(X)
};

/// Validates, sorts by label and normalizes weights to sum 1.
TypeSpace build_space(const std::vector<TypeAtom>& atoms);

enum class FamilyKind { homogeneous, two_type, geometric };

enum class PsiKind { identity, constant };

/// Descriptor for a built-in family. `param` is the success probability for
/// the geometric family and is ignored otherwise. `psi_value` applies only to
/// PsiKind::constant.
struct FamilySpec {
    FamilyKind kind = FamilyKind::homogeneous;
    double param = 0.0;
    PsiKind psi = PsiKind::identity;
    double psi_value = 1.0;
};

/// Truncates a countable family to the smallest support {x <= D} whose
/// discarded mass is below tail_tol, renormalizing the retained weights.
/// Finite families pass through unchanged with zero residual.
TypeSpace truncate_family(const FamilySpec& family, double tail_tol);

// Convenience builders for the test-matrix spaces.
TypeSpace homogeneous_space(double activity = 1.0);
TypeSpace two_type_space();

Moments moments(const TypeSpace& space);

/// Critical kernel constant 1 / E psi^2(X).
double c_critical(const TypeSpace& space);

std::string family_name(FamilyKind kind);

} // namespace subcrit

#endif

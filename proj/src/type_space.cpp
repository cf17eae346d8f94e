#include "subcrit/type_space.hpp"

#include <algorithm>
#include <cmath>

namespace subcrit {

TypeSpace build_space(const std::vector<TypeAtom>& atoms) {
    if (atoms.empty()) throw EmptySpace();

    std::vector<TypeAtom> sorted = atoms;
    std::sort(sorted.begin(), sorted.end(),
              [](const TypeAtom& a, const TypeAtom& b) { return a.label < b.label; });

    double total = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].weight > 0.0)) throw NonPositiveWeight(sorted[i].weight);
        if (!(sorted[i].activity > 0.0)) throw NonPositiveActivity(sorted[i].activity);
        if (i > 0 && sorted[i].label == sorted[i - 1].label)
            throw DuplicateLabel(sorted[i].label);
        total += sorted[i].weight;
    }

    TypeSpace space;
    const Eigen::Index n = static_cast<Eigen::Index>(sorted.size());
    space.labels.resize(n);
    space.weights.resize(n);
    space.activities.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        space.labels[i] = sorted[i].label;
        space.weights[i] = sorted[i].weight / total;
        space.activities[i] = sorted[i].activity;
    }
    return space;
}

TypeSpace homogeneous_space(double activity) {
    return build_space({{1.0, 1.0, activity}});
}

TypeSpace two_type_space() {
    return build_space({{1.0, 0.5, 1.0}, {2.0, 0.5, 2.0}});
}

TypeSpace truncate_family(const FamilySpec& family, double tail_tol) {
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) throw TolOutOfRange(tail_tol);

    switch (family.kind) {
    case FamilyKind::homogeneous: {
        double act = family.psi == PsiKind::constant ? family.psi_value : 1.0;
        return homogeneous_space(act);
    }
    case FamilyKind::two_type:
        return two_type_space();
    case FamilyKind::geometric: {
        const double q = family.param; // success probability, support {1, 2, ...}
        if (!(q > 0.0) || !(q < 1.0))
            throw OutOfRange("geometric success probability must lie in (0, 1), got " +
                             std::to_string(q));
        const double rho = 1.0 - q; // failure probability; mu(k) = q * rho^(k-1)

        // Tail mass beyond D atoms is rho^D; take the smallest D with the
        // discarded mass at or below tol.
        long d = 1;
        double tail = rho;
        while (tail > tail_tol) {
            ++d;
            tail *= rho;
            if (d > 100000)
                throw TailTooHeavy("geometric(" + std::to_string(q) + ")");
        }

        std::vector<TypeAtom> atoms;
        atoms.reserve(static_cast<std::size_t>(d));
        double mass = q;
        for (long k = 1; k <= d; ++k) {
            double act = family.psi == PsiKind::constant ? family.psi_value
                                                         : static_cast<double>(k);
            atoms.push_back({static_cast<double>(k), mass, act});
            mass *= rho;
        }
        TypeSpace space = build_space(atoms); // renormalizes by M_D
        space.truncation_residual = tail;
        if (family.psi == PsiKind::identity) {
            // Any a < log(1/rho) certifies sum exp(a*k) mu(k) < infinity over
            // the untruncated family; half the supremum leaves a clean margin.
            space.tail_rate = 0.5 * std::log(1.0 / rho);
        }
        return space;
    }
    }
    throw OutOfRange("unknown family kind");
}

Moments moments(const TypeSpace& space) {
    Moments m;
    m.m1 = (space.weights * space.activities).sum();
    m.m2 = (space.weights * space.activities.square()).sum();
    return m;
}

double c_critical(const TypeSpace& space) {
    return 1.0 / moments(space).m2;
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::homogeneous: return "homogeneous";
    case FamilyKind::two_type: return "two-type";
    case FamilyKind::geometric: return "geometric";
    }
    return "?";
}

} // namespace subcrit

#pragma once

#include <variant>
#include <vector>

#include "cvis/geom.hpp"

namespace cvis {

// Oriented generalized circle S(x) = a|x - o|^2 + <b, x - o> + c around an
// origin o, normalized so |b|^2 - 4ac = 1. The left side is S < 0, the
// signed curvature is 2a and |S| approximates the distance near the curve.
struct Support {
    Point origin;
    double a = 0.0;
    Point b{1.0, 0.0};
    double c = 0.0;

    static Support of(const ArcSegment& arc, Point origin);
    Support moved_to(Point origin) const;

    double value(Point x) const;
    Point gradient(Point x) const;
    bool is_line() const { return a == 0.0; }
    double curvature() const { return 2.0 * a; }
    double radius() const;
    Point center() const;
    // Unit tangent at a point of the support, oriented so the left side is S < 0.
    Point tangent_at(Point x) const;
};

// Inversive product of two normalized supports sharing an origin; +1 for
// coherently oriented tangency, -1 for oppositely oriented tangency.
double inversive_product(const Support& s, const Support& t);

struct TangentTo {
    ArcSegment seg;
};
struct Through {
    Point q;
};
using SupportConstraint = std::variant<TangentTo, Through>;

// All circles and lines through p satisfying both constraints with radius at
// most cap, sorted by radius ascending (lines last). Each circle is reported
// once; its orientation is arbitrary. Throws IllConditioned when the linear
// system is rank deficient.
std::vector<Support> apollonius_arcs(Point p, const SupportConstraint& first,
                                     const SupportConstraint& second, double cap,
                                     const Tolerances& tol = {});

// Arc from start to end along the support, following its orientation.
ArcSegment arc_from_support(const Support& s, Point start, Point end);

}  // namespace cvis

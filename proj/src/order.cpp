#include "cvis/order.hpp"

#include <algorithm>
#include <cmath>

namespace cvis {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* to_string(BoundaryCase c) {
    switch (c) {
        case BoundaryCase::InteriorStart: return "InteriorStart";
        case BoundaryCase::StartAtSigma0: return "StartAtSigma0";
        case BoundaryCase::StartAtSigma1: return "StartAtSigma1";
        case BoundaryCase::ClosureExtremal: return "ClosureExtremal";
    }
    return "?";
}

const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::Less: return "Less";
        case Ordering::Equal: return "Equal";
        case Ordering::Greater: return "Greater";
    }
    return "?";
}

const char* to_string(DecidingCase c) {
    switch (c) {
        case DecidingCase::StartOrderNoLeftCut: return "StartOrderNoLeftCut";
        case DecidingCase::StartOrderWithLeftCut: return "StartOrderWithLeftCut";
        case DecidingCase::SameStartTangentDot: return "SameStartTangentDot";
        case DecidingCase::ExtendedCutAtEnd: return "ExtendedCutAtEnd";
    }
    return "?";
}

ConnectingArc make_connecting(const ArcSegment& sigma, const ArcSegment& arc, const Tolerances& tol) {
    ConnectingArc g;
    g.arc = arc;
    const double eps = tol.abs();
    double t = std::clamp(sigma.param_of(arc.start), 0.0, 1.0);
    const double len = sigma.length();
    if (dist(arc.start, sigma.start) <= eps) t = 0.0;
    if (dist(arc.start, sigma.end) <= eps) t = 1.0;
    g.t_sigma = t;
    const double lean = dot(sigma.normal(t), arc.tangent(0.0));
    if (t * len > eps && (1.0 - t) * len > eps)
        g.boundary_case = BoundaryCase::InteriorStart;
    else if (lean <= tol.eps_angle)
        g.boundary_case = BoundaryCase::ClosureExtremal;
    else
        g.boundary_case = t == 0.0 ? BoundaryCase::StartAtSigma0 : BoundaryCase::StartAtSigma1;
    return g;
}

ConnectingArc connecting_from(const ArcSegment& sigma, double t, Point tau, Point p,
                              const Tolerances& tol) {
    const Point s = sigma.at(t);
    ConnectingArc g = make_connecting(
        sigma, arc_with_tangent(Direction::of(tau), s, p, TangentAt::Start), tol);
    g.t_sigma = t;
    return g;
}

bool left_cut(const ConnectingArc& a, const ConnectingArc& b, const Tolerances& tol) {
    const double eps = tol.abs();
    const ArcSegment& ga = a.arc;
    const ArcSegment& gb = b.arc;
    // start-point extensions
    if (gb.distance_to(ga.start) <= eps) return true;
    if (ga.distance_to(gb.start) <= eps) return true;
    // equal end tangents with b arriving from the right of [a]
    const Point ta = ga.tangent(1.0), tb = gb.tangent(1.0);
    if (dot(ta, tb) > 0.0 && std::abs(cross(ta, tb)) <= tol.eps_angle) {
        const int side = emanating_side(ga, 1.0, -tb, -gb.curvature(), tol);
        if (side < 0) return true;
    }
    std::vector<CutEvent> ev;
    try {
        ev = intersect(gb, ga, tol);
    } catch (const Error&) {
        return false;  // identical supports: same arc up to tolerance
    }
    const double la = ga.length(), lb = gb.length();
    for (const auto& e : ev) {
        if (e.kind != CutKind::CrossFromLeft) continue;
        if (e.t_other * la <= eps || (1.0 - e.t_other) * la <= eps) continue;
        if (e.t_self * lb <= eps || (1.0 - e.t_self) * lb <= eps) continue;
        return true;
    }
    return false;
}

OrderResult compare(const ArcSegment& sigma, const ConnectingArc& g1, const ConnectingArc& g2,
                    const Tolerances& tol) {
    const double eps = tol.abs();
    if (dist(g1.arc.end, g2.arc.end) > eps || sigma.distance_to(g1.arc.start) > eps ||
        sigma.distance_to(g2.arc.start) > eps)
        throw Error(ErrorKind::MixedQuery, "connecting arcs do not share sigma and p");
    if (dist(g1.arc.start, g2.arc.start) <= eps &&
        std::abs(g1.arc.bulge - g2.arc.bulge) <= 1e-12 * (1.0 + std::abs(g1.arc.bulge)))
        return {Ordering::Equal, DecidingCase::SameStartTangentDot};

    const double len = sigma.length();
    if (std::abs(g1.t_sigma - g2.t_sigma) * len < eps) {
        const Point st = sigma.tangent(0.5 * (g1.t_sigma + g2.t_sigma));
        const double d1 = dot(st, g1.arc.tangent(0.0));
        const double d2 = dot(st, g2.arc.tangent(0.0));
        if (std::abs(d1 - d2) <= tol.eps_angle) return {Ordering::Equal, DecidingCase::SameStartTangentDot};
        return {d1 < d2 ? Ordering::Less : Ordering::Greater, DecidingCase::SameStartTangentDot};
    }
    const bool first_earlier = g1.t_sigma < g2.t_sigma;
    const ConnectingArc& a = first_earlier ? g1 : g2;
    const ConnectingArc& b = first_earlier ? g2 : g1;
    const bool cut = left_cut(a, b, tol);
    // a < b exactly when a does not cut b from the left
    const bool a_less = !cut;
    const DecidingCase dc = cut ? DecidingCase::StartOrderWithLeftCut : DecidingCase::StartOrderNoLeftCut;
    const bool g1_less = first_earlier ? a_less : !a_less;
    return {g1_less ? Ordering::Less : Ordering::Greater, dc};
}

namespace {

// Major arc of radius cap from s to p, turning left (ccw) or right.
ArcSegment capped_arc(Point s, Point p, double cap, bool ccw) {
    const double L = dist(s, p);
    const double r = std::max(cap, 0.5 * L * (1.0 + 1e-12));
    const double phi = 2.0 * kPi - 2.0 * std::asin(std::min(1.0, L / (2.0 * r)));
    const double b = std::tan(phi / 4.0);
    return {s, p, ccw ? b : -b};
}

bool strictly_right(const ArcSegment& sigma, Point p, const Tolerances& tol) {
    return side_of(sigma, p, tol) == SideClass::StrictRight;
}

// Exact extremal arc from s with start tangent tau; when it only follows
// the support of sigma (curvature k_follow) or runs past the cap, a
// substitute bending off by 1/cap is used instead.
ArcSegment extremal_arc(Point s, Point tau, Point p, double k_follow, double cap, bool ccw,
                        const Tolerances& tol) {
    const double turn = ccw ? 1.0 : -1.0;
    try {
        const ArcSegment arc = arc_with_tangent(Direction::of(tau), s, p, TangentAt::Start);
        const bool follows = std::abs(arc.curvature() - k_follow) * dist(s, p) <= tol.eps_angle;
        if (!follows) return arc.length() <= 2.0 * kPi * cap ? arc : capped_arc(s, p, cap, ccw);
    } catch (const Error&) {
    }
    // minor arc with curvature k_follow + turn / cap, when it fits
    const double k = k_follow + turn / cap;
    const double L = dist(s, p);
    if (std::abs(k) * L < 2.0) {
        const double phi = 2.0 * std::asin(std::abs(k) * L / 2.0);
        return {s, p, k > 0.0 ? std::tan(phi / 4.0) : -std::tan(phi / 4.0)};
    }
    return capped_arc(s, p, cap, ccw);
}

}  // namespace

ConnectingArc max_connecting_arc(const Channel& ch, Point p, double cap) {
    const Tolerances tol = ch.tolerances();
    const ArcSegment& s = ch.sigma;
    if (strictly_right(s, p, tol)) {
        try {
            return make_connecting(s, arc_through(s.start, s.end, p), tol);
        } catch (const Error&) {
            return make_connecting(s, capped_arc(s.start, p, cap, true), tol);
        }
    }
    return make_connecting(s, extremal_arc(s.end, s.tangent(1.0), p, s.curvature(), cap, true, tol), tol);
}

ConnectingArc min_connecting_arc(const Channel& ch, Point p, double cap) {
    const Tolerances tol = ch.tolerances();
    const ArcSegment& s = ch.sigma;
    if (strictly_right(s, p, tol)) {
        try {
            return make_connecting(s, arc_through(s.end, s.start, p), tol);
        } catch (const Error&) {
            return make_connecting(s, capped_arc(s.end, p, cap, false), tol);
        }
    }
    return make_connecting(s, extremal_arc(s.start, -s.tangent(0.0), p, -s.curvature(), cap, false, tol), tol);
}

}  // namespace cvis

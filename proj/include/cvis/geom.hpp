#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvis {

// Tolerance record shared by every predicate. eps_geom is relative to scale,
// which callers set to the channel diameter.
struct Tolerances {
    double eps_geom = 1e-9;
    double eps_bulge = 1e-12;
    double eps_angle = 1e-9;
    double scale = 1.0;

    double abs() const { return eps_geom * scale; }
    Tolerances scaled(double s) const {
        Tolerances t = *this;
        t.scale = s;
        return t;
    }
};

enum class ErrorKind {
    DegenerateThroughArc,
    DegenerateTangentArc,
    OverlapError,
    IllConditioned,
    MixedQuery,
    NotClosed,
    SelfIntersecting,
    WrongOrientation,
    NonConvexStartCorner,
    PointNotInterior,
    ChannelInvalid,
    NoCandidate,
    InternalInvariantBroken,
    ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator-(Point a) { return {-a.x, -a.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point rot90(Point a) { return {-a.y, a.x}; }
inline Point rotate(Point a, double ang) {
    const double c = std::cos(ang), s = std::sin(ang);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Point unit(Point a) {
    const double n = norm(a);
    return {a.x / n, a.y / n};
}

struct Direction {
    double dx = 1.0;
    double dy = 0.0;

    static Direction of(Point v) {
        const Point u = unit(v);
        return {u.x, u.y};
    }
    Point vec() const { return {dx, dy}; }
};

// Circular arc or line segment in bulge form. bulge = tan(sweep / 4),
// positive for counterclockwise arcs, zero for a line segment.
struct ArcSegment {
    Point start;
    Point end;
    double bulge = 0.0;

    bool is_line() const;
    double effective_bulge() const;
    Point chord() const { return end - start; }
    double chord_length() const { return norm(end - start); }
    double sweep() const;
    double curvature() const;
    double radius() const;
    Point center() const;
    double length() const;

    Point at(double t) const;
    Point tangent(double t) const;
    Point normal(double t) const { return rot90(tangent(t)); }

    // Signed offset function: positive strictly left, zero on the support,
    // approximately the signed distance near the curve.
    double support_value(Point x) const;
    // Exact signed distance to the support (left positive).
    double signed_distance(Point x) const;
    // Parameter of a point on or near the support. Values outside [0, 1]
    // lie on the support beyond the endpoints.
    double param_of(Point x) const;
    double distance_to(Point x) const;

    ArcSegment reversed() const { return {end, start, -bulge}; }
};

bool operator==(const ArcSegment& a, const ArcSegment& b);

enum class SideClass { StrictLeft, On, StrictRight };
const char* to_string(SideClass s);

SideClass side_of(const ArcSegment& arc, Point p, const Tolerances& tol = {});

std::pair<Direction, Direction> tangent_and_normal(const ArcSegment& arc, double t);

ArcSegment arc_through(Point p, Point r, Point q);

enum class TangentAt { Start, End };
ArcSegment arc_with_tangent(Direction tau, Point p, Point q, TangentAt where);

// Kind describes how the other curve meets this one: CrossFromRight means
// the other curve cuts self from the right, TouchLeft means it stays
// locally left of self's support.
enum class CutKind { CrossFromLeft, CrossFromRight, TouchLeft, TouchRight };
const char* to_string(CutKind k);

struct CutEvent {
    double t_self = 0.0;
    double t_other = 0.0;
    CutKind kind = CutKind::CrossFromLeft;
    Point point;
};

std::vector<CutEvent> intersect(const ArcSegment& self, const ArcSegment& other,
                                const Tolerances& tol = {});

// Side of a curve emanating from a point of arc at parameter t, given its
// initial unit direction and signed curvature. Returns +1 left, -1 right,
// 0 when the curve follows the support of arc to second order.
int emanating_side(const ArcSegment& arc, double t, Point dir, double curvature,
                   const Tolerances& tol = {});

// Count of geometric primitive evaluations (intersections, arc and tangent
// circle constructions, side tests) made on the calling thread.
std::uint64_t primitive_calls();
void count_primitive();

}  // namespace cvis

#include "cvis/geom.hpp"

#include <algorithm>
#include <limits>

namespace cvis {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBulgeEps = 1e-12;

double half_angle_ratio(double t, double phi) {
    // sin(t*phi/2) / sin(phi/2), continuous at phi = 0
    if (std::abs(phi) < 1e-6) return t * (1.0 + phi * phi * (1.0 - t * t) / 24.0);
    return std::sin(0.5 * t * phi) / std::sin(0.5 * phi);
}

}  // namespace

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateThroughArc: return "DegenerateThroughArc";
        case ErrorKind::DegenerateTangentArc: return "DegenerateTangentArc";
        case ErrorKind::OverlapError: return "OverlapError";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::MixedQuery: return "MixedQuery";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::SelfIntersecting: return "SelfIntersecting";
        case ErrorKind::WrongOrientation: return "WrongOrientation";
        case ErrorKind::NonConvexStartCorner: return "NonConvexStartCorner";
        case ErrorKind::PointNotInterior: return "PointNotInterior";
        case ErrorKind::ChannelInvalid: return "ChannelInvalid";
        case ErrorKind::NoCandidate: return "NoCandidate";
        case ErrorKind::InternalInvariantBroken: return "InternalInvariantBroken";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const char* to_string(SideClass s) {
    switch (s) {
        case SideClass::StrictLeft: return "StrictLeft";
        case SideClass::On: return "On";
        case SideClass::StrictRight: return "StrictRight";
    }
    return "?";
}

const char* to_string(CutKind k) {
    switch (k) {
        case CutKind::CrossFromLeft: return "CrossFromLeft";
        case CutKind::CrossFromRight: return "CrossFromRight";
        case CutKind::TouchLeft: return "TouchLeft";
        case CutKind::TouchRight: return "TouchRight";
    }
    return "?";
}

bool operator==(const ArcSegment& a, const ArcSegment& b) {
    return a.start == b.start && a.end == b.end && a.bulge == b.bulge;
}

bool ArcSegment::is_line() const { return std::abs(bulge) <= kBulgeEps; }

double ArcSegment::effective_bulge() const { return is_line() ? 0.0 : bulge; }

double ArcSegment::sweep() const { return 4.0 * std::atan(effective_bulge()); }

double ArcSegment::curvature() const {
    const double b = effective_bulge();
    return 4.0 * b / (chord_length() * (1.0 + b * b));
}

double ArcSegment::radius() const {
    const double k = curvature();
    return k == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(k);
}

Point ArcSegment::center() const {
    const double b = effective_bulge();
    if (b == 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const double L = chord_length();
    const Point mid = 0.5 * (start + end);
    const Point n = rot90(unit(chord()));
    return mid + (L * (1.0 - b * b) / (4.0 * b)) * n;
}

double ArcSegment::length() const {
    const double phi = std::abs(sweep());
    const double f = phi < 1e-6 ? 1.0 + phi * phi / 24.0 : 0.5 * phi / std::sin(0.5 * phi);
    return chord_length() * f;
}

Point ArcSegment::at(double t) const {
    if (t == 0.0) return start;
    if (t == 1.0) return end;
    const double phi = sweep();
    const Point c = chord();
    const Point tau0 = rotate(unit(c), -0.5 * phi);
    const double l = norm(c) * half_angle_ratio(t, phi);
    return start + l * rotate(tau0, 0.5 * t * phi);
}

Point ArcSegment::tangent(double t) const {
    const double phi = sweep();
    return rotate(unit(chord()), phi * (t - 0.5));
}

double ArcSegment::support_value(Point x) const {
    const double phi = sweep();
    const Point tau0 = rotate(unit(chord()), -0.5 * phi);
    const Point d = x - start;
    return dot(rot90(tau0), d) - 0.5 * curvature() * dot(d, d);
}

double ArcSegment::signed_distance(Point x) const {
    const double g = support_value(x);
    const double k = curvature();
    const double disc = std::max(0.0, 1.0 - 2.0 * k * g);
    return 2.0 * g / (1.0 + std::sqrt(disc));
}

double ArcSegment::param_of(Point x) const {
    const double phi = sweep();
    const Point c = chord();
    const double L = norm(c);
    const Point d = x - start;
    if (std::abs(phi) < 0.5) {
        const double l = norm(d);
        const double sgn = dot(d, c) < 0.0 ? -1.0 : 1.0;
        if (std::abs(phi) < 1e-6) return sgn * l / L;
        const double arg = std::clamp(l * std::sin(0.5 * phi) / L, -1.0, 1.0);
        return sgn * 2.0 * std::asin(arg) / phi;
    }
    const Point tau0 = rotate(unit(c), -0.5 * phi);
    double s = 2.0 * std::atan2(cross(tau0, d), dot(tau0, d));
    const double lo = 0.5 * phi - kPi;
    while (s < lo) s += 2.0 * kPi;
    while (s >= lo + 2.0 * kPi) s -= 2.0 * kPi;
    return s / phi;
}

double ArcSegment::distance_to(Point x) const {
    const double t = param_of(x);
    double best = std::min(dist(x, start), dist(x, end));
    if (t > 0.0 && t < 1.0) best = std::min(best, std::abs(signed_distance(x)));
    return best;
}

SideClass side_of(const ArcSegment& arc, Point p, const Tolerances& tol) {
    const double d = arc.signed_distance(p);
    if (std::abs(d) <= tol.abs()) return SideClass::On;
    return d > 0.0 ? SideClass::StrictLeft : SideClass::StrictRight;
}

std::pair<Direction, Direction> tangent_and_normal(const ArcSegment& arc, double t) {
    const Point tg = arc.tangent(t);
    const Point n = rot90(tg);
    return {Direction{tg.x, tg.y}, Direction{n.x, n.y}};
}

ArcSegment arc_through(Point p, Point r, Point q) {
    count_primitive();
    if (p == r || r == q || p == q)
        throw Error(ErrorKind::DegenerateThroughArc, "points are not pairwise distinct");
    const Point u = r - p;
    const Point v = q - r;
    const double cr = cross(u, v);
    const double denom = norm(u) * norm(v) + dot(u, v);
    // denom vanishes when the walk p -> r -> q reverses direction
    if (denom <= 1e-15 * norm(u) * norm(v))
        throw Error(ErrorKind::DegenerateThroughArc, "collinear points in excluded order");
    double b = cr / denom;
    if (std::abs(b) <= kBulgeEps) b = 0.0;
    return {p, q, b};
}

ArcSegment arc_with_tangent(Direction tau, Point p, Point q, TangentAt where) {
    count_primitive();
    if (p == q) throw Error(ErrorKind::DegenerateTangentArc, "start equals end");
    const Point c = q - p;
    const Point t = unit(tau.vec());
    const double L = norm(c);
    const double cr = where == TangentAt::Start ? cross(t, c) : cross(c, t);
    const double denom = L + dot(t, c);
    if (denom <= 1e-15 * L)
        throw Error(ErrorKind::DegenerateTangentArc, "tangent points along p - q");
    double b = cr / denom;
    if (std::abs(b) <= kBulgeEps) b = 0.0;
    return {p, q, b};
}

int emanating_side(const ArcSegment& arc, double t, Point dir, double curvature,
                   const Tolerances& tol) {
    count_primitive();
    const Point tg = arc.tangent(t);
    const double s = dot(rot90(tg), dir);
    if (std::abs(s) > tol.eps_angle) return s > 0.0 ? 1 : -1;
    const double ka = arc.curvature();
    // second-order normal offset of the curve relative to the support
    const double off = dot(tg, dir) > 0.0 ? curvature - ka : -(curvature + ka);
    const double keps = tol.eps_angle * (std::abs(ka) + std::abs(curvature) + 1.0 / tol.scale);
    if (std::abs(off) <= keps) return 0;
    return off > 0.0 ? 1 : -1;
}

namespace {

struct LocalForm {
    // g(x) = <n, x - a> - k/2 |x - a|^2, left positive
    Point a;
    Point n;
    double k;

    double value(Point x) const {
        const Point d = x - a;
        return dot(n, d) - 0.5 * k * dot(d, d);
    }
    Point grad(Point x) const { return n - k * (x - a); }
};

LocalForm local_form(const ArcSegment& s, Point origin) {
    const double phi = s.sweep();
    const Point tau0 = rotate(unit(s.chord()), -0.5 * phi);
    return {s.start - origin, rot90(tau0), s.curvature()};
}

bool in_range(double t, double slack) { return t >= -slack && t <= 1.0 + slack; }

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

void check_overlap(const ArcSegment& self, const ArcSegment& other, double tol) {
    // a shared piece of positive length contains a point just inside an
    // endpoint of one arc, or both midpoints
    auto inside = [&](const ArcSegment& a, const ArcSegment& b) {
        const double da = std::min(0.25, 10.0 * tol / a.length());
        const double db = std::min(0.25, 10.0 * tol / b.length());
        for (double s : {da, 0.5, 1.0 - da}) {
            const Point x = a.at(s);
            const double t = b.param_of(x);
            if (t > db && t < 1.0 - db && std::abs(b.signed_distance(x)) <= tol) return true;
        }
        return false;
    };
    if (inside(other, self) || inside(self, other))
        throw Error(ErrorKind::OverlapError, "segments share a common support");
}

}  // namespace

std::vector<CutEvent> intersect(const ArcSegment& self, const ArcSegment& other,
                                const Tolerances& tol) {
    count_primitive();
    std::vector<CutEvent> out;
    const Point origin = self.start;
    const LocalForm fa = local_form(self, origin);
    const LocalForm fb = local_form(other, origin);
    const double ka = fa.k, kb = fb.k;
    const double tol_abs = tol.abs();
    const double la = self.length(), lb = other.length();
    const double slack_a = tol_abs / la, slack_b = tol_abs / lb;

    std::vector<std::pair<Point, bool>> candidates;  // point, is_touch
    double vertex_sign = 0.0;                        // >0 when roots exist at a touch

    if (ka == 0.0 && kb == 0.0) {
        const Point ua = unit(self.chord()), ub = unit(other.chord());
        const double den = cross(ua, ub);
        if (std::abs(den) <= tol.eps_angle) {
            if (std::abs(fa.value(fb.a)) <= tol_abs) check_overlap(self, other, tol_abs);
            return out;
        }
        const Point w = fb.a - fa.a;
        const double s = cross(w, ub) / den;
        candidates.push_back({fa.a + s * ua, false});
    } else {
        // radical line kb*ga - ka*gb = 0 is linear in x
        const Point w = kb * (fa.n + ka * fa.a) - ka * (fb.n + kb * fb.a);
        const double h = kb * (-dot(fa.n, fa.a) - 0.5 * ka * dot(fa.a, fa.a)) -
                         ka * (-dot(fb.n, fb.a) - 0.5 * kb * dot(fb.a, fb.a));
        const double wn = norm(w);
        if (wn <= 1e-14 * (std::abs(ka) + std::abs(kb))) {
            if (std::abs(self.signed_distance(other.start)) <= tol_abs)
                check_overlap(self, other, tol_abs);
            return out;
        }
        const Point x0 = (-h / (wn * wn)) * w;
        const Point u = rot90((1.0 / wn) * w);
        const bool use_a = std::abs(ka) >= std::abs(kb);
        const LocalForm& f = use_a ? fa : fb;
        const LocalForm& g = use_a ? fb : fa;
        const double A = -0.5 * f.k;
        const double B = dot(f.grad(x0), u);
        const double C = f.value(x0);
        const double disc = B * B - 4.0 * A * C;
        const double sv = -B / (2.0 * A);
        const Point v = x0 + sv * u;
        const double gap = std::abs(f.value(v)) + std::abs(g.value(v));
        const double r_small = 1.0 / std::max(std::abs(ka), std::abs(kb));
        const double window = tol.eps_geom * std::max(tol.scale, std::min(r_small, tol.scale));
        if (gap <= window) {
            candidates.push_back({v, true});
            vertex_sign = disc > 0.0 ? 1.0 : -1.0;
        } else if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
            const double s1 = qq / A;
            const double s2 = qq != 0.0 ? C / qq : -s1;
            candidates.push_back({x0 + s1 * u, false});
            candidates.push_back({x0 + s2 * u, false});
        }
    }

    const double kother = other.curvature();
    for (auto [xl, touch] : candidates) {
        const Point x = xl + origin;
        double ta = self.param_of(x);
        double tb = other.param_of(x);
        if (!in_range(ta, slack_a) || !in_range(tb, slack_b)) continue;
        ta = clamp01(ta);
        tb = clamp01(tb);
        const Point na = self.normal(ta);
        const Point tbv = other.tangent(tb);
        const double s = dot(na, tbv);
        CutEvent ev{ta, tb, CutKind::CrossFromLeft, x};
        if (!touch && std::abs(s) > tol.eps_angle) {
            ev.kind = s > 0.0 ? CutKind::CrossFromRight : CutKind::CrossFromLeft;
        } else {
            int side = emanating_side(self, ta, tbv, kother, tol);
            if (side == 0) {
                const double d = self.signed_distance(other.at(tb));
                side = d > 0.0 ? 1 : -1;
                if (vertex_sign > 0.0) side = -side;
            }
            ev.kind = side > 0 ? CutKind::TouchLeft : CutKind::TouchRight;
        }
        out.push_back(ev);
    }
    std::sort(out.begin(), out.end(),
              [](const CutEvent& a, const CutEvent& b) { return a.t_self < b.t_self; });
    // merge duplicates produced by nearly coincident roots
    std::vector<CutEvent> merged;
    for (const auto& e : out) {
        if (!merged.empty() && dist(merged.back().point, e.point) <= tol_abs) continue;
        merged.push_back(e);
    }
    return merged;
}

namespace {
thread_local std::uint64_t g_primitive_calls = 0;
}  // namespace

std::uint64_t primitive_calls() { return g_primitive_calls; }
void count_primitive() { ++g_primitive_calls; }

}  // namespace cvis

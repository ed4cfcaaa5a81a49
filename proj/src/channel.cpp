#include "cvis/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvis {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ArcSpline ArcSpline::reversed() const {
    ArcSpline out;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) out.segments.push_back(it->reversed());
    return out;
}

void BoundingBox::add(const BoundingBox& b) {
    lo = {std::min(lo.x, b.lo.x), std::min(lo.y, b.lo.y)};
    hi = {std::max(hi.x, b.hi.x), std::max(hi.y, b.hi.y)};
}

bool BoundingBox::overlaps(const BoundingBox& b, double pad) const {
    return lo.x <= b.hi.x + pad && b.lo.x <= hi.x + pad && lo.y <= b.hi.y + pad &&
           b.lo.y <= hi.y + pad;
}

BoundingBox bounding_box(const ArcSegment& s) {
    BoundingBox box{{std::min(s.start.x, s.end.x), std::min(s.start.y, s.end.y)},
                    {std::max(s.start.x, s.end.x), std::max(s.start.y, s.end.y)}};
    const double phi = s.sweep();
    if (phi == 0.0) return box;
    if (std::abs(phi) < 1e-6) {
        // sagitta of a near-straight arc
        const double pad = 0.5 * s.chord_length() * std::abs(s.effective_bulge());
        box.lo = box.lo - Point{pad, pad};
        box.hi = box.hi + Point{pad, pad};
        return box;
    }
    const Point c = s.center();
    const double r = s.radius();
    for (Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
        const Point x = c + r * d;
        const double t = s.param_of(x);
        if (t > 0.0 && t < 1.0) box.add(BoundingBox{x, x});
    }
    return box;
}

double signed_area(const std::vector<ArcSegment>& loop) {
    double area = 0.0;
    for (const auto& s : loop) {
        area += 0.5 * cross(s.start, s.end);
        const double phi = s.sweep();
        if (phi == 0.0) continue;
        const double L = s.chord_length();
        // circular segment between chord and arc, signed by the sweep
        double seg;
        if (std::abs(phi) < 1e-4)
            seg = L * L * phi / 12.0 * (1.0 + phi * phi / 30.0);
        else {
            const double sh = std::sin(0.5 * phi);
            seg = L * L / (8.0 * sh * sh) * (phi - std::sin(phi));
        }
        area += seg;
    }
    return area;
}

namespace {

bool is_cross(CutKind k) { return k == CutKind::CrossFromLeft || k == CutKind::CrossFromRight; }

std::string describe(std::size_t i, std::size_t j) {
    std::ostringstream os;
    auto name = [](std::size_t k) { return k == 0 ? std::string("sigma") : "kappa_" + std::to_string(k); };
    os << name(i) << " and " << name(j);
    return os.str();
}

// Pairs of loop segments whose boxes overlap, found by a sweep over x.
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    const std::vector<BoundingBox>& boxes, double pad) {
    std::vector<std::size_t> order(boxes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return boxes[a].lo.x < boxes[b].lo.x; });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<std::size_t> active;
    for (std::size_t idx : order) {
        const double x = boxes[idx].lo.x;
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](std::size_t a) { return boxes[a].hi.x + pad < x; }),
                     active.end());
        for (std::size_t a : active)
            if (boxes[a].overlaps(boxes[idx], pad)) out.emplace_back(std::min(a, idx), std::max(a, idx));
        active.push_back(idx);
    }
    return out;
}

}  // namespace

ValidationReport check_channel(const ArcSegment& sigma, const ArcSpline& kappa,
                               const Tolerances& base) {
    ValidationReport rep;
    auto fail = [&](ErrorKind k, const std::string& msg) { rep.diagnostics.push_back({k, msg}); };

    std::vector<ArcSegment> loop;
    loop.push_back(sigma);
    for (const auto& s : kappa.segments) loop.push_back(s);
    if (kappa.size() == 0) {
        fail(ErrorKind::NotClosed, "boundary spline is empty");
        return rep;
    }
    for (const auto& s : loop) {
        if (!std::isfinite(s.start.x) || !std::isfinite(s.start.y) || !std::isfinite(s.end.x) ||
            !std::isfinite(s.end.y) || !std::isfinite(s.bulge)) {
            fail(ErrorKind::ChannelInvalid, "non-finite coordinate");
            return rep;
        }
    }

    BoundingBox box = bounding_box(loop[0]);
    std::vector<BoundingBox> boxes;
    for (const auto& s : loop) {
        boxes.push_back(bounding_box(s));
        box.add(boxes.back());
    }
    const double diameter = std::max(box.diagonal(), 1e-300);
    const Tolerances tol = base.scaled(diameter);
    const double eps = tol.abs();

    for (std::size_t i = 0; i < loop.size(); ++i) {
        if (loop[i].chord_length() <= eps)
            fail(ErrorKind::ChannelInvalid, "segment " + std::to_string(i) + " has coincident endpoints");
    }
    if (!rep.diagnostics.empty()) return rep;

    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = (i + 1) % m;
        const double gap = dist(loop[i].end, loop[j].start);
        if (gap > eps) {
            std::ostringstream os;
            os << "gap of " << gap << " between " << describe(i, j);
            fail(ErrorKind::NotClosed, os.str());
        }
    }
    if (!rep.diagnostics.empty()) return rep;

    // simplicity: adjacent segments may only share their common breakpoint
    bool simple = true;
    for (auto [i, j] : candidate_pairs(boxes, eps)) {
        const bool adj_ij = (i + 1) % m == j;
        const bool adj_ji = (j + 1) % m == i;
        std::vector<Point> allowed;
        if (adj_ij) allowed.push_back(loop[i].end);
        if (adj_ji) allowed.push_back(loop[j].end);
        std::vector<CutEvent> ev;
        try {
            ev = intersect(loop[i], loop[j], tol);
        } catch (const Error&) {
            fail(ErrorKind::SelfIntersecting, describe(i, j) + " overlap along a common support");
            simple = false;
            continue;
        }
        for (const auto& e : ev) {
            bool ok = false;
            for (Point a : allowed)
                if (dist(a, e.point) <= 1e3 * eps) ok = true;
            if (!ok) {
                fail(ErrorKind::SelfIntersecting, describe(i, j) + " intersect");
                simple = false;
                break;
            }
        }
    }
    // adjacent segments folding back onto each other
    for (std::size_t i = 0; i < m && simple; ++i) {
        const std::size_t j = (i + 1) % m;
        const Point t0 = loop[i].tangent(1.0), t1 = loop[j].tangent(0.0);
        if (dot(t0, t1) < 0.0 && std::abs(cross(t0, t1)) <= tol.eps_angle &&
            emanating_side(loop[i].reversed(), 0.0, t1, loop[j].curvature(), tol) == 0) {
            fail(ErrorKind::SelfIntersecting, describe(i, j) + " fold back");
            simple = false;
        }
    }
    if (!simple) return rep;

    if (signed_area(loop) <= 0.0)
        fail(ErrorKind::WrongOrientation, "interior is not locally left of sigma");

    const Point ns1 = sigma.normal(1.0), ns0 = sigma.normal(0.0);
    const double c0 = dot(ns1, kappa.segments.front().tangent(0.0));
    const double c1 = dot(ns0, kappa.segments.back().tangent(1.0));
    if (!(c0 > tol.eps_angle) || !(c1 < -tol.eps_angle))
        fail(ErrorKind::NonConvexStartCorner, "boundary must leave sigma to the left at both ends");

    if (rep.diagnostics.empty()) rep.channel = Channel{sigma, kappa, diameter};
    return rep;
}

Channel validate_channel(const ArcSegment& sigma, const ArcSpline& kappa, const Tolerances& base) {
    ValidationReport rep = check_channel(sigma, kappa, base);
    if (!rep.ok()) throw Error(rep.diagnostics.front().kind, rep.diagnostics.front().message);
    return *rep.channel;
}

const char* to_string(Location loc) {
    switch (loc) {
        case Location::Interior: return "Interior";
        case Location::Boundary: return "Boundary";
        case Location::Exterior: return "Exterior";
    }
    return "?";
}

Location point_in_channel(const Channel& ch, Point q) {
    const Tolerances tol = ch.tolerances();
    const double eps = tol.abs();
    for (std::size_t j = 0; j <= ch.n(); ++j)
        if (ch.segment(j).distance_to(q) <= eps) return Location::Boundary;

    // crossing parity along a ray; rays grazing a breakpoint or tangent are retried
    Point origin = q;
    for (int attempt = 0; attempt < 8; ++attempt) {
        if (attempt == 4) origin = q + Point{eps, 0.37 * eps};
        const double ang = 0.7853981633974483 + attempt * (2.0 * kPi * 0.6180339887498949);
        const Point dir{std::cos(ang), std::sin(ang)};
        const ArcSegment ray{origin, origin + (4.0 * ch.diameter + norm(q)) * dir, 0.0};
        int crossings = 0;
        bool clean = true;
        for (std::size_t j = 0; j <= ch.n() && clean; ++j) {
            const ArcSegment& s = ch.segment(j);
            const auto ev = intersect(s, ray, tol);
            for (const auto& e : ev) {
                const double len = s.length();
                if (!is_cross(e.kind) || e.t_self * len <= 1e3 * eps ||
                    (1.0 - e.t_self) * len <= 1e3 * eps ||
                    std::abs(dot(s.normal(e.t_self), dir)) < 1e-6) {
                    clean = false;
                    break;
                }
                ++crossings;
            }
        }
        if (clean) return crossings % 2 == 1 ? Location::Interior : Location::Exterior;
    }
    return Location::Boundary;
}

}  // namespace cvis

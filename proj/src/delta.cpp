#include "cvis/delta.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cvis {

const char* to_string(Cause c) {
    switch (c) {
        case Cause::ApproachLeft: return "ApproachLeft";
        case Cause::ApproachRight: return "ApproachRight";
        case Cause::LeaveLeft: return "LeaveLeft";
        case Cause::LeaveRight: return "LeaveRight";
    }
    return "?";
}

const char* to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::RestrictionLeft: return "RestrictionLeft";
        case SegmentKind::RestrictionRight: return "RestrictionRight";
        case SegmentKind::ViolationLeft: return "ViolationLeft";
        case SegmentKind::ViolationRight: return "ViolationRight";
        case SegmentKind::Neutral: return "Neutral";
    }
    return "?";
}

const char* to_string(StartRestriction s) {
    switch (s) {
        case StartRestriction::Left: return "Left";
        case StartRestriction::Right: return "Right";
        case StartRestriction::None: return "None";
    }
    return "?";
}

namespace {

// Largest offset of seg from [gamma] over [t0, t1], sampled.
double max_offset(const ArcSegment& g, const ArcSegment& seg, double t0, double t1) {
    double best = 0.0;
    for (int i = 0; i <= 16; ++i) best = std::max(best, std::abs(g.signed_distance(seg.at(t0 + (t1 - t0) * i / 16.0))));
    return best;
}

int leave_of(CutKind k) { return k == CutKind::CrossFromRight || k == CutKind::TouchLeft ? 1 : -1; }

// Side of [gamma] on which a path leaving gamma(tg) along seg runs. A
// crossing reached before seg leaves the tolerance band belongs to the
// vertex contact and decides the side instead.
int side_along(const ArcSegment& g, double tg, const ArcSegment& seg, const Tolerances& tol) {
    const int s = emanating_side(g, tg, seg.tangent(0.0), seg.curvature(), tol);
    if (s != 0) {
        std::vector<CutEvent> cuts;
        try {
            cuts = intersect(g, seg, tol);
        } catch (const Error&) {
            return s;
        }
        const CutEvent* first = nullptr;
        for (const auto& e : cuts)
            if (dist(e.point, seg.start) > 2.0 * tol.abs() && (!first || e.t_other < first->t_other)) first = &e;
        if (first && max_offset(g, seg, 0.0, first->t_other) <= tol.abs()) return leave_of(first->kind);
        return s;
    }
    for (double u : {0.25, 0.5, 1.0}) {
        const double d = g.signed_distance(seg.at(u));
        if (std::abs(d) > tol.abs()) return d > 0.0 ? 1 : -1;
    }
    throw Error(ErrorKind::OverlapError, "boundary segment runs along the connecting arc");
}

double gamma_param(const ArcSegment& g, Point x) { return std::clamp(g.param_of(x), 0.0, 1.0); }

// Contacts of g with seg; prev is the preceding path segment (null at an
// open path start, where the approach is taken from the right).
std::vector<Contact> contacts_on(const ArcSegment& g, const ArcSegment& seg, const ArcSegment* prev,
                                 bool end_contact, std::size_t index, const Tolerances& tol) {
    const double w = tol.abs();
    const double skip = 2.0 * w, touch = 3.0 * w;
    std::vector<Contact> out;
    if (g.distance_to(seg.start) <= touch) {
        Contact c;
        c.segment = index;
        c.t = 0.0;
        c.point = seg.start;
        c.t_gamma = gamma_param(g, seg.start);
        c.approach = prev ? side_along(g, c.t_gamma, prev->reversed(), tol) : -1;
        c.leave = side_along(g, c.t_gamma, seg, tol);
        out.push_back(c);
    }
    for (const auto& e : intersect(g, seg, tol)) {
        if (dist(e.point, seg.start) <= skip || dist(e.point, seg.end) <= skip) continue;
        // absorbed by a vertex contact, see side_along
        if (g.distance_to(seg.start) <= touch && max_offset(g, seg, 0.0, e.t_other) <= w) continue;
        if (g.distance_to(seg.end) <= touch && max_offset(g, seg, e.t_other, 1.0) <= w) continue;
        Contact c;
        c.segment = index;
        c.t = e.t_other;
        c.t_gamma = e.t_self;
        c.point = e.point;
        switch (e.kind) {
            case CutKind::CrossFromRight: c.approach = -1; c.leave = 1; break;
            case CutKind::CrossFromLeft: c.approach = 1; c.leave = -1; break;
            case CutKind::TouchLeft: c.approach = 1; c.leave = 1; break;
            case CutKind::TouchRight: c.approach = -1; c.leave = -1; break;
        }
        out.push_back(c);
    }
    if (end_contact && g.distance_to(seg.end) <= touch) {
        Contact c;
        c.segment = index;
        c.t = 1.0;
        c.point = seg.end;
        c.t_gamma = gamma_param(g, seg.end);
        c.approach = side_along(g, c.t_gamma, seg.reversed(), tol);
        c.leave = 0;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Contact& a, const Contact& b) { return a.t < b.t; });
    return out;
}

}  // namespace

std::vector<Contact> segment_contacts(const ArcSegment& gamma, const Channel& ch, std::size_t j) {
    const ArcSegment* prev = j > 1 ? &ch.kappa[j - 2] : nullptr;
    return contacts_on(gamma, ch.kappa[j - 1], prev, j == ch.n(), j, ch.tolerances());
}

int DeltaProfile::prefix(std::size_t j, double t) const {
    int v = entry[j];
    for (const auto& c : contacts) {
        if (c.segment != j) continue;
        if (c.t < t) v += approach_contribution(c.approach) + leave_contribution(c.leave);
        else if (c.t == t) v += approach_contribution(c.approach);
    }
    return v;
}

DeltaProfile build_profile(const ConnectingArc& gamma, const Channel& ch) {
    DeltaProfile prof;
    prof.arc = gamma;
    prof.entry.assign(ch.n() + 2, 0);
    int cur = 0;
    for (std::size_t j = 1; j <= ch.n(); ++j) {
        prof.entry[j] = cur;
        for (Contact c : segment_contacts(gamma.arc, ch, j)) {
            c.delta = cur + approach_contribution(c.approach);
            prof.events.push_back({j, c.t, approach_contribution(c.approach),
                                   c.approach > 0 ? Cause::ApproachLeft : Cause::ApproachRight});
            if (c.leave != 0)
                prof.events.push_back({j, c.t, leave_contribution(c.leave),
                                       c.leave > 0 ? Cause::LeaveLeft : Cause::LeaveRight});
            cur += approach_contribution(c.approach) + leave_contribution(c.leave);
            prof.contacts.push_back(c);
        }
    }
    prof.entry[ch.n() + 1] = cur;
    prof.total = cur;
    return prof;
}

int delta(const ArcSegment& gamma, const std::vector<ArcSegment>& path, bool closed,
          const Tolerances& tol) {
    int total = 0;
    const std::size_t m = path.size();
    for (std::size_t i = 0; i < m; ++i) {
        const ArcSegment* prev = i > 0 ? &path[i - 1] : (closed ? &path[m - 1] : nullptr);
        const bool end_contact = !closed && i + 1 == m;
        for (const auto& c : contacts_on(gamma, path[i], prev, end_contact, i + 1, tol))
            total += approach_contribution(c.approach) + leave_contribution(c.leave);
    }
    return total;
}

std::vector<LocalContact> local_contacts(const ArcSegment& gamma, const ArcSegment& seg,
                                         const Tolerances& tol) {
    const double w = tol.abs();
    std::vector<LocalContact> out;
    if (gamma.distance_to(seg.start) <= 3.0 * w) {
        const double tg = gamma_param(gamma, seg.start);
        out.push_back({seg.start, 0.0, tg, 0, side_along(gamma, tg, seg, tol)});
    }
    for (const auto& e : intersect(gamma, seg, tol)) {
        if (dist(e.point, seg.start) <= 2.0 * w || dist(e.point, seg.end) <= 2.0 * w) continue;
        if (gamma.distance_to(seg.start) <= 3.0 * w && max_offset(gamma, seg, 0.0, e.t_other) <= w) continue;
        if (gamma.distance_to(seg.end) <= 3.0 * w && max_offset(gamma, seg, e.t_other, 1.0) <= w) continue;
        LocalContact c{e.point, e.t_other, e.t_self, 0, 0};
        switch (e.kind) {
            case CutKind::CrossFromRight: c.before = -1; c.after = 1; break;
            case CutKind::CrossFromLeft: c.before = 1; c.after = -1; break;
            case CutKind::TouchLeft: c.before = c.after = 1; break;
            case CutKind::TouchRight: c.before = c.after = -1; break;
        }
        out.push_back(c);
    }
    if (gamma.distance_to(seg.end) <= 3.0 * w) {
        const double tg = gamma_param(gamma, seg.end);
        out.push_back({seg.end, 1.0, tg, side_along(gamma, tg, seg.reversed(), tol), 0});
    }
    return out;
}

int local_restriction_side(const std::vector<LocalContact>& contacts) {
    int side = 0;
    for (const auto& c : contacts)
        for (int s : {c.before, c.after}) {
            if (s == 0) continue;
            if (side != 0 && s != side) return 0;
            side = s;
        }
    return side;
}

double penetration(const ArcSegment& gamma, const ArcSegment& seg, double t0, double t1) {
    constexpr int kSamples = 16;
    double best = 0.0, best_t = t0;
    for (int i = 1; i < kSamples; ++i) {
        const double t = t0 + (t1 - t0) * i / kSamples;
        const double d = gamma.distance_to(seg.at(t));
        if (d > best) {
            best = d;
            best_t = t;
        }
    }
    // golden-section refinement around the best sample
    const double h = (t1 - t0) / kSamples;
    double a = std::max(t0, best_t - h), b = std::min(t1, best_t + h);
    const double gr = 0.6180339887498949;
    for (int it = 0; it < 40; ++it) {
        const double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        if (gamma.distance_to(seg.at(x1)) > gamma.distance_to(seg.at(x2)))
            b = x2;
        else
            a = x1;
    }
    return std::max(best, gamma.distance_to(seg.at(0.5 * (a + b))));
}

SegmentScan scan_segment(const ArcSegment& gamma, const Channel& ch, std::size_t j, int entry,
                         double d_tol) {
    return scan_segment(gamma, ch, j, entry, d_tol, segment_contacts(gamma, ch, j));
}

SegmentScan scan_segment(const ArcSegment& gamma, const Channel& ch, std::size_t j, int entry,
                         double d_tol, const std::vector<Contact>& contacts) {
    const ArcSegment& seg = ch.kappa[j - 1];
    SegmentScan scan;
    scan.contacts = contacts;

    struct Interval {
        double t0, t1;
        int value;
    };
    std::vector<Interval> intervals;
    int cur = entry;
    double from = 0.0;
    bool open = true;  // an interval starts at `from`
    for (auto& c : scan.contacts) {
        if (open && c.t > from) intervals.push_back({from, c.t, cur});
        c.delta = cur + approach_contribution(c.approach);
        cur += approach_contribution(c.approach) + leave_contribution(c.leave);
        from = c.t;
        open = c.t < 1.0;
    }
    if (open) intervals.push_back({from, 1.0, cur});
    scan.exit_value = cur;

    // shared breakpoint with the next segment, counted there
    std::optional<Contact> end;
    if (j < ch.n()) {
        const Tolerances tol = ch.tolerances();
        if (gamma.distance_to(seg.end) <= 3.0 * tol.abs()) {
            Contact c;
            c.segment = j;
            c.t = 1.0;
            c.point = seg.end;
            c.t_gamma = std::clamp(gamma.param_of(seg.end), 0.0, 1.0);
            c.approach = side_along(gamma, c.t_gamma, seg.reversed(), tol);
            c.delta = cur + approach_contribution(c.approach);
            end = c;
        }
    }

    // violations count only when they reach deeper than d_tol
    double deep_left = 0.0, deep_right = 0.0;
    Point wit_left, wit_right;
    for (const auto& iv : intervals) {
        if (std::abs(iv.value) < 2) continue;
        const double pen = penetration(gamma, seg, iv.t0, iv.t1);
        if (iv.value > 0 && pen > deep_right) {
            deep_right = pen;
            wit_right = seg.at(0.5 * (iv.t0 + iv.t1));
        }
        if (iv.value < 0 && pen > deep_left) {
            deep_left = pen;
            wit_left = seg.at(0.5 * (iv.t0 + iv.t1));
        }
    }
    SegmentClass& cls = scan.cls;
    cls.depth_left = deep_left;
    cls.depth_right = deep_right;
    cls.violation_left = deep_left > d_tol;
    cls.violation_right = deep_right > d_tol;

    auto clamp = [&](int v) {
        if (v >= 2 && !cls.violation_right) return 1;
        if (v <= -2 && !cls.violation_left) return -1;
        return v;
    };
    bool has_minus = false, has_plus = false, other = false;
    auto note = [&](int v) {
        if (v == -1) has_minus = true;
        else if (v == 1) has_plus = true;
        else if (v != 0) other = true;
    };
    for (auto& iv : intervals) note(clamp(iv.value));
    for (auto& c : scan.contacts) {
        c.delta = clamp(c.delta);
        note(c.delta);
    }
    if (end) {
        end->delta = clamp(end->delta);
        note(end->delta);
    }
    auto restriction = [&](const Contact& c) {
        if (c.delta == 1 || c.delta == -1)
            scan.restrictions.push_back({c.point, c.t_gamma, -c.delta, j});
    };
    for (const auto& c : scan.contacts) restriction(c);
    if (end) restriction(*end);

    if (cls.violation_left) {
        cls.kind = SegmentKind::ViolationLeft;
        cls.witness = wit_left;
        cls.clearance = -deep_left;
    } else if (cls.violation_right) {
        cls.kind = SegmentKind::ViolationRight;
        cls.witness = wit_right;
        cls.clearance = deep_right;
    } else if (has_minus && !has_plus && !other) {
        cls.kind = SegmentKind::RestrictionLeft;
    } else if (has_plus && !has_minus && !other) {
        cls.kind = SegmentKind::RestrictionRight;
    }
    if (cls.kind == SegmentKind::RestrictionLeft || cls.kind == SegmentKind::RestrictionRight) {
        const int want = cls.kind == SegmentKind::RestrictionLeft ? -1 : 1;
        cls.witness = seg.at(0.5);
        for (const auto& r : scan.restrictions)
            if (-r.side == want) {
                cls.witness = r.point;
                break;
            }
    }
    return scan;
}

SegmentClass classify_segment(const DeltaProfile& profile, const Channel& ch, std::size_t j,
                              double d_tol) {
    std::vector<Contact> contacts;
    for (const auto& c : profile.contacts)
        if (c.segment == j) contacts.push_back(c);
    return scan_segment(profile.arc.arc, ch, j, profile.entry[j], d_tol, contacts).cls;
}

StartRestriction starting_restriction(const ConnectingArc& gamma, const Channel& ch) {
    const Tolerances tol = ch.tolerances();
    const ArcSegment& s = ch.sigma;
    const ArcSegment& g = gamma.arc;
    const double t = gamma.t_sigma;
    const double len = s.length();
    const double eps = tol.abs();
    const Point fwd = s.tangent(t);
    const double k = s.curvature();
    int side = 0;
    if (t * len <= eps) {
        side = emanating_side(g, 0.0, fwd, k, tol);
    } else if ((1.0 - t) * len <= eps) {
        side = emanating_side(g, 0.0, -fwd, -k, tol);
    } else {
        const int a = emanating_side(g, 0.0, fwd, k, tol);
        const int b = emanating_side(g, 0.0, -fwd, -k, tol);
        side = a == b ? a : 0;
    }
    if (side > 0) return StartRestriction::Right;
    if (side < 0) return StartRestriction::Left;
    return StartRestriction::None;
}

}  // namespace cvis

#include "cvis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvis {

const char* to_string(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::DefinitelyVisible: return "DefinitelyVisible";
        case OracleVerdict::DefinitelyBlocked: return "DefinitelyBlocked";
        case OracleVerdict::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

// Side of [gamma] a path leaving a point of gamma along seg ends up on: the
// sign of the offset where it first leaves the tolerance band.
std::pair<int, double> band_exit(const ArcSegment& g, const ArcSegment& seg, double w) {
    for (double u = 1e-14; u < 1.0; u *= 1.1) {
        const double d = g.signed_distance(seg.at(u));
        if (std::abs(d) > w) return {d > 0.0 ? 1 : -1, u};
    }
    const double d = g.signed_distance(seg.end);
    if (std::abs(d) > w) return {d > 0.0 ? 1 : -1, 1.0};
    throw Error(ErrorKind::OverlapError, "boundary segment runs along the connecting arc");
}

std::vector<Contact> naive_contacts(const ArcSegment& g, const Channel& ch, std::size_t j) {
    const ArcSegment& seg = ch.kappa[j - 1];
    const double w = ch.tolerances().abs();
    const bool at_start = g.distance_to(seg.start) <= 3.0 * w;
    const bool at_end = g.distance_to(seg.end) <= 3.0 * w;
    double lo = 0.0, hi = 1.0;  // interior crossings outside (lo, hi) belong to a vertex
    std::vector<Contact> out;
    if (at_start) {
        Contact c;
        c.segment = j;
        c.point = seg.start;
        c.t_gamma = std::clamp(g.param_of(seg.start), 0.0, 1.0);
        // the first boundary segment starts at sigma(1) and counts as coming from the right
        c.approach = j == 1 ? -1 : band_exit(g, ch.kappa[j - 2].reversed(), w).first;
        const auto [side, u] = band_exit(g, seg, w);
        c.leave = side;
        lo = u;
        out.push_back(c);
    }
    if (at_end) hi = 1.0 - band_exit(g, seg.reversed(), w).second;
    for (const auto& e : intersect(g, seg, ch.tolerances())) {
        if (dist(e.point, seg.start) <= 2.0 * w || dist(e.point, seg.end) <= 2.0 * w) continue;
        if ((at_start && e.t_other < lo) || (at_end && e.t_other > hi)) continue;
        Contact c;
        c.segment = j;
        c.t = e.t_other;
        c.t_gamma = e.t_self;
        c.point = e.point;
        const bool cross = e.kind == CutKind::CrossFromLeft || e.kind == CutKind::CrossFromRight;
        const int after = e.kind == CutKind::CrossFromRight || e.kind == CutKind::TouchLeft ? 1 : -1;
        c.leave = after;
        c.approach = cross ? -after : after;
        out.push_back(c);
    }
    if (at_end && j == ch.n()) {
        Contact c;
        c.segment = j;
        c.t = 1.0;
        c.point = seg.end;
        c.t_gamma = std::clamp(g.param_of(seg.end), 0.0, 1.0);
        c.approach = band_exit(g, seg.reversed(), w).first;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Contact& a, const Contact& b) { return a.t < b.t; });
    return out;
}

int contribution(const Contact& c) { return approach_contribution(c.approach) + leave_contribution(c.leave); }

}  // namespace

DeltaProfile delta_naive(const ConnectingArc& gamma, const Channel& ch) {
    const std::size_t n = ch.n();
    std::vector<std::vector<Contact>> per(n + 1);
    for (std::size_t j = 1; j <= n; ++j) per[j] = naive_contacts(gamma.arc, ch, j);

    DeltaProfile prof;
    prof.arc = gamma;
    prof.entry.assign(n + 2, 0);
    for (std::size_t j = 1; j <= n + 1; ++j) {
        int v = 0;
        for (std::size_t i = 1; i < j; ++i)
            for (const auto& c : per[i]) v += contribution(c);
        prof.entry[j] = v;
    }
    prof.total = prof.entry[n + 1];
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t k = 0; k < per[j].size(); ++k) {
            Contact c = per[j][k];
            int v = prof.entry[j];
            for (std::size_t i = 0; i < k; ++i) v += contribution(per[j][i]);
            c.delta = v + approach_contribution(c.approach);
            prof.events.push_back({j, c.t, approach_contribution(c.approach),
                                   c.approach > 0 ? Cause::ApproachLeft : Cause::ApproachRight});
            if (c.leave != 0)
                prof.events.push_back({j, c.t, leave_contribution(c.leave),
                                       c.leave > 0 ? Cause::LeaveLeft : Cause::LeaveRight});
            prof.contacts.push_back(c);
        }
    }
    return prof;
}

std::vector<RestrictionPoint> naive_restrictions(const DeltaProfile& prof, const Channel& ch) {
    std::vector<RestrictionPoint> out;
    const StartRestriction s = starting_restriction(prof.arc, ch);
    if (s != StartRestriction::None)
        out.push_back({prof.arc.arc.start, 0.0, s == StartRestriction::Left ? 1 : -1, 0});
    for (const auto& c : prof.contacts)
        if (c.delta == 1 || c.delta == -1) out.push_back({c.point, c.t_gamma, -c.delta, c.segment});
    return out;
}

bool has_alternating_triple(std::vector<RestrictionPoint> pts, double t_eps) {
    std::stable_sort(pts.begin(), pts.end(), [](const RestrictionPoint& a, const RestrictionPoint& b) {
        if (a.t_gamma != b.t_gamma) return a.t_gamma < b.t_gamma;
        return a.segment == 0 && b.segment != 0;
    });
    const std::size_t m = pts.size();
    auto before = [&](std::size_t a, std::size_t b) {
        return pts[b].t_gamma > pts[a].t_gamma + t_eps || (pts[a].segment == 0 && pts[b].segment != 0);
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            if (pts[b].side != -pts[a].side || !before(a, b)) continue;
            for (std::size_t c = b + 1; c < m; ++c)
                if (pts[c].side == pts[a].side && pts[c].t_gamma > pts[b].t_gamma + t_eps) return true;
        }
    return false;
}

double sampled_clearance(const ConnectingArc& gamma, const Channel& ch, int arc_samples) {
    const ArcSegment& g = gamma.arc;
    const double w = ch.tolerances().abs();
    const double len = g.length();
    // gamma may not come back to sigma
    for (const auto& e : intersect(g, ch.sigma, ch.tolerances()))
        if (e.t_self * len > 10.0 * w) return -1.0;
    double best = INFINITY;
    for (std::size_t j = 1; j <= ch.n(); ++j) {
        const ArcSegment& seg = ch.kappa[j - 1];
        for (const auto& e : intersect(g, seg, ch.tolerances())) {
            if (e.t_self * len <= 10.0 * w) continue;  // the corner at the start
            if (e.kind == CutKind::CrossFromLeft || e.kind == CutKind::CrossFromRight) return -1.0;
            best = 0.0;
        }
    }
    auto away_from_start = [&](Point q) { return dist(q, g.start) > 10.0 * w; };
    for (int i = 1; i <= arc_samples; ++i) {
        const Point x = g.at(static_cast<double>(i) / arc_samples);
        for (const auto& seg : ch.kappa.segments) best = std::min(best, seg.distance_to(x));
    }
    const int per_seg = std::max(4, arc_samples / 16);
    for (const auto& seg : ch.kappa.segments)
        for (int i = 0; i <= per_seg; ++i) {
            const Point q = seg.at(static_cast<double>(i) / per_seg);
            if (away_from_start(q)) best = std::min(best, g.distance_to(q));
        }
    return best;
}

std::vector<ConnectingArc> oracle_arcs(const Channel& ch, Point p, const OracleConfig& cfg) {
    const ArcSegment& s = ch.sigma;
    const Tolerances tol = ch.tolerances();
    std::vector<ConnectingArc> out;
    for (int i = 0; i <= cfg.start_samples; ++i) {
        const double t = static_cast<double>(i) / cfg.start_samples;
        // at the ends of sigma the closure adds the direction along sigma
        const bool end = i == 0 || i == cfg.start_samples;
        const int k0 = end ? 0 : 1;
        for (int k = k0; k <= cfg.angle_samples; ++k) {
            const double ang = std::numbers::pi * k / cfg.angle_samples;
            try {
                const ConnectingArc g = connecting_from(s, t, rotate(s.tangent(t), ang), p, tol);
                // tangential departures must still bend into the left of sigma
                if (emanating_side(s, t, g.arc.tangent(0.0), g.arc.curvature(), tol) < 0) continue;
                out.push_back(g);
            } catch (const Error&) {
            }
        }
    }
    return out;
}

OracleResult oracle_visible(const Channel& ch, Point p, const OracleConfig& cfg) {
    OracleResult res;
    const std::vector<ConnectingArc> arcs = oracle_arcs(ch, p, cfg);
    std::vector<const ConnectingArc*> uncontained;
    for (const auto& g : arcs) {
        double c;
        try {
            c = sampled_clearance(g, ch, cfg.arc_samples);
        } catch (const Error&) {
            continue;
        }
        if (c >= cfg.margin) {
            res.verdict = OracleVerdict::DefinitelyVisible;
            res.witness = g;
            return res;
        }
        if (c >= 0.0)
            ++res.contained_at_zero;
        else
            uncontained.push_back(&g);
    }
    if (res.contained_at_zero > 0) return res;
    for (const ConnectingArc* g : uncontained) {
        try {
            const DeltaProfile prof = delta_naive(*g, ch);
            if (has_alternating_triple(naive_restrictions(prof, ch), 1e-9)) {
                res.verdict = OracleVerdict::DefinitelyBlocked;
                res.witness = *g;
                return res;
            }
        } catch (const Error&) {
        }
    }
    return res;
}

}  // namespace cvis

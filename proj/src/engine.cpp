#include "cvis/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cvis/apollonius.hpp"

namespace cvis {

namespace {

constexpr double kPi = 3.14159265358979323846;

int side_of_start(StartRestriction s) {
    if (s == StartRestriction::Left) return 1;
    if (s == StartRestriction::Right) return -1;
    return 0;
}

Support negated(const Support& s) {
    Support n = s;
    n.a = -s.a;
    n.b = -s.b;
    n.c = -s.c;
    return n;
}

// Points where the full support meets sigma.
std::vector<Point> support_meets_sigma(const Support& s, Point p, const ArcSegment& sigma,
                                       double span, const Tolerances& tol) {
    std::vector<ArcSegment> pieces;
    if (s.is_line()) {
        const Point d = s.tangent_at(p);
        pieces.push_back({p - span * d, p + span * d, 0.0});
    } else {
        const Point c = s.center();
        const Point q = 2.0 * c - p;
        pieces.push_back({p, q, 1.0});
        pieces.push_back({q, p, 1.0});
    }
    std::vector<Point> out;
    auto add = [&](Point x) {
        for (Point y : out)
            if (dist(x, y) <= 10.0 * tol.abs()) return;
        out.push_back(x);
    };
    for (Point end : {sigma.start, sigma.end})
        if (std::abs(s.value(end)) <= tol.abs()) add(end);
    for (const auto& piece : pieces) {
        try {
            for (const auto& e : intersect(sigma, piece, tol)) add(e.point);
        } catch (const Error&) {
            // support of sigma itself: every start would be degenerate
        }
    }
    return out;
}

std::array<SupportConstraint, 3> constraints_for(const ArcSegment& seg) {
    return {TangentTo{seg}, Through{seg.start}, Through{seg.end}};
}

// Every connecting arc through p whose support satisfies one constraint
// on each of the two segments, in both orientations.
std::vector<ConnectingArc> candidate_arcs(const Channel& ch, Point p, std::size_t a, std::size_t b,
                                          double cap) {
    const Tolerances tol = ch.tolerances();
    const ArcSegment& sigma = ch.sigma;
    std::vector<ConnectingArc> out;
    std::vector<std::pair<SupportConstraint, SupportConstraint>> pairs;
    if (a == b) {
        // only sigma pairs with itself: the arc through both of its ends
        pairs.push_back({Through{sigma.start}, Through{sigma.end}});
    } else {
        for (const auto& ca : constraints_for(ch.segment(a)))
            for (const auto& cb : constraints_for(ch.segment(b))) pairs.push_back({ca, cb});
    }
    for (const auto& [ca, cb] : pairs) {
        std::vector<Support> sols;
        try {
            // the cap bounds length, so nearly straight supports must survive here
            sols = apollonius_arcs(p, ca, cb, 1e6 * cap, tol);
        } catch (const Error&) {
            continue;
        }
        for (const Support& s0 : sols)
            for (const Support& s : {s0, negated(s0)})
                for (Point start : support_meets_sigma(s, p, sigma, 4.0 * cap, tol)) {
                    if (dist(start, p) <= tol.abs()) continue;
                    try {
                        const ArcSegment arc = arc_from_support(s, start, p);
                        if (arc.length() > 2.0 * kPi * cap) continue;
                        ConnectingArc g = make_connecting(sigma, arc, tol);
                        const double lean = dot(sigma.normal(g.t_sigma), arc.tangent(0.0));
                        if (lean < -tol.eps_angle) continue;
                        // a tangent start must not bend to the right of sigma
                        if (lean <= tol.eps_angle &&
                            emanating_side(sigma, g.t_sigma, arc.tangent(0.0), arc.curvature(), tol) < 0)
                            continue;
                        out.push_back(g);
                    } catch (const Error&) {
                    }
                }
    }
    return out;
}

// Restrictions anchored at sigma: the starting restriction, and the ends of
// kappa where they lie on gamma. kappa(1) = sigma(0) always carries the
// value -1 there and kappa(0) = sigma(1) the value +1.
std::vector<RestrictionPoint> sigma_records(const ConnectingArc& g, const Channel& ch) {
    const Tolerances tol = ch.tolerances();
    std::vector<RestrictionPoint> out;
    const int s = side_of_start(starting_restriction(g, ch));
    if (s != 0) out.push_back({g.arc.start, 0.0, s, 0});
    auto on_gamma = [&](Point q, int side, std::size_t seg) {
        if (g.arc.distance_to(q) > 10.0 * tol.abs()) return;
        const double t = dist(q, g.arc.start) <= 10.0 * tol.abs() ? 0.0 : std::clamp(g.arc.param_of(q), 0.0, 1.0);
        out.push_back({q, t, side, seg});
    };
    on_gamma(ch.sigma.start, 1, ch.n());
    on_gamma(ch.sigma.end, -1, 1);
    return out;
}

// Parameters along gamma of the restriction points segment j would give on
// the wanted side, judged locally; empty when it is not such a restriction.
std::vector<double> local_restriction(const ConnectingArc& g, const Channel& ch, std::size_t j,
                                      int want) {
    if (j == 0) {
        std::vector<double> ts;
        for (const auto& q : sigma_records(g, ch))
            if (q.side == want) ts.push_back(q.t_gamma);
        return ts;
    }
    const auto contacts = local_contacts(g.arc, ch.kappa[j - 1], ch.tolerances());
    if (local_restriction_side(contacts) != want) return {};
    std::vector<double> ts;
    for (const auto& c : contacts) ts.push_back(c.t_gamma);
    return ts;
}

double t_eps(const ConnectingArc& g, const Tolerances& tol) {
    return tol.abs() / std::max(g.arc.length(), tol.abs());
}

bool precedes(const RestrictionPoint& a, const RestrictionPoint& b, double eps, bool allow_equal) {
    if (allow_equal) return a.t_gamma <= b.t_gamma + eps;
    return b.t_gamma - a.t_gamma > eps;
}

}  // namespace

std::optional<AlternatingSequence> find_alt3(const std::vector<RestrictionPoint>& points,
                                             double eps) {
    std::vector<RestrictionPoint> pts = points;
    std::stable_sort(pts.begin(), pts.end(), [](const RestrictionPoint& a, const RestrictionPoint& b) {
        if (a.t_gamma != b.t_gamma) return a.t_gamma < b.t_gamma;
        return (a.segment == 0) > (b.segment == 0);
    });
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            if (pts[j].side != -pts[i].side) continue;
            if (!precedes(pts[i], pts[j], eps, pts[i].segment == 0)) continue;
            for (std::size_t k = j + 1; k < m; ++k) {
                if (pts[k].side != pts[i].side) continue;
                if (!precedes(pts[j], pts[k], eps, false)) continue;
                return AlternatingSequence{pts[i], pts[j], pts[k]};
            }
        }
    return std::nullopt;
}

std::optional<ConnectingArc> push_update(const Channel& ch, Point p, std::size_t right_seg,
                                         std::size_t left_seg, double cap, const ConnectingArc* near,
                                         int direction) {
    const Tolerances tol = ch.tolerances();
    struct Scored {
        ConnectingArc arc;
        bool monotone;
        double distance;
    };
    std::vector<Scored> kept;
    for (const ConnectingArc& g : candidate_arcs(ch, p, right_seg, left_seg, cap)) {
        std::vector<double> tr, tl;
        try {
            tr = local_restriction(g, ch, right_seg, -1);
            if (tr.empty()) continue;
            tl = local_restriction(g, ch, left_seg, 1);
            if (tl.empty()) continue;
        } catch (const Error&) {
            continue;
        }
        const double eps = t_eps(g, tol);
        // right-blocking: the right restriction comes first along the arc
        if (*std::min_element(tr.begin(), tr.end()) > *std::max_element(tl.begin(), tl.end()) + eps)
            continue;
        bool monotone = true;
        double distance = 0.0;
        if (near) {
            distance = std::abs(g.arc.curvature() - near->arc.curvature());
            if (direction != 0) {
                const Ordering o = compare(ch.sigma, *near, g, tol).order;
                monotone = direction > 0 ? o == Ordering::Less : o == Ordering::Greater;
            }
        }
        kept.push_back({g, monotone, distance});
    }
    if (kept.empty()) return std::nullopt;
    // the pushed arc is the first one the continuous family reaches, i.e.
    // the monotone candidate nearest to the current arc in the order
    const Scored* best = nullptr;
    for (const Scored& c : kept) {
        if (!best) {
            best = &c;
            continue;
        }
        if (c.monotone != best->monotone) {
            if (c.monotone) best = &c;
            continue;
        }
        bool closer = c.distance < best->distance;
        if (c.monotone && direction != 0) {
            try {
                const Ordering o = compare(ch.sigma, c.arc, best->arc, tol).order;
                closer = direction > 0 ? o == Ordering::Less : o == Ordering::Greater;
            } catch (const Error&) {
            }
        }
        if (closer) best = &c;
    }
    return best->arc;
}

double audit_violation(const ConnectingArc& gamma, const Channel& ch, double d_tol) {
    const DeltaProfile prof = build_profile(gamma, ch);
    double worst = 0.0;
    for (std::size_t j = 1; j <= ch.n(); ++j) {
        const SegmentClass c = classify_segment(prof, ch, j, d_tol);
        worst = std::max({worst, c.depth_left, c.depth_right});
    }
    return worst;
}

bool verify_sequence(const ConnectingArc& gamma, const Channel& ch, const AlternatingSequence& seq,
                     double d_tol) {
    if (seq.size() != 3) return false;
    const Tolerances tol = ch.tolerances();
    const DeltaProfile prof = build_profile(gamma, ch);
    for (const auto& q : seq) {
        if (q.segment == 0) {
            if (side_of_start(starting_restriction(gamma, ch)) != q.side) return false;
            continue;
        }
        std::vector<Contact> contacts;
        for (const auto& c : prof.contacts)
            if (c.segment == q.segment) contacts.push_back(c);
        const SegmentScan scan =
            scan_segment(gamma.arc, ch, q.segment, prof.entry[q.segment], d_tol, contacts);
        bool found = false;
        for (const auto& r : scan.restrictions)
            if (r.side == q.side && dist(r.point, q.point) <= 10.0 * tol.abs()) found = true;
        if (!found) return false;
    }
    const double eps = t_eps(gamma, tol);
    return seq[1].side == -seq[0].side && seq[2].side == seq[0].side &&
           precedes(seq[0], seq[1], eps, seq[0].segment == 0) && precedes(seq[1], seq[2], eps, false);
}

std::optional<ProbeResult> blocking_triple_probe(const Channel& ch, Point p,
                                                 const std::vector<std::size_t>& segs, double cap,
                                                 double d_tol) {
    std::vector<std::size_t> uniq;
    for (std::size_t s : segs)
        if (std::find(uniq.begin(), uniq.end(), s) == uniq.end()) uniq.push_back(s);
    const Tolerances tol = ch.tolerances();
    std::vector<ConnectingArc> cands;
    for (std::size_t i = 0; i < uniq.size(); ++i)
        for (std::size_t k = uniq[i] == 0 ? i : i + 1; k < uniq.size(); ++k)
            for (ConnectingArc& g : candidate_arcs(ch, p, uniq[i], uniq[k], cap)) cands.push_back(std::move(g));
    // a push family that runs off sigma ends at an extremal arc
    cands.push_back(min_connecting_arc(ch, p, cap));
    cands.push_back(max_connecting_arc(ch, p, cap));
    auto accept = [&](const ConnectingArc& g, const std::vector<RestrictionPoint>& pts) -> std::optional<ProbeResult> {
        const auto seq = find_alt3(pts, t_eps(g, tol));
        if (!seq) return std::nullopt;
        try {
            if (verify_sequence(g, ch, *seq, d_tol)) return ProbeResult{g, *seq};
        } catch (const Error&) {
        }
        return std::nullopt;
    };
    // touching contacts first: they are decided by each segment alone
    for (const ConnectingArc& g : cands) {
        std::vector<RestrictionPoint> pts;
        try {
            pts = sigma_records(g, ch);
            for (std::size_t s : uniq)
                for (int want : {1, -1})
                    for (double t : s == 0 ? std::vector<double>{} : local_restriction(g, ch, s, want))
                        pts.push_back({g.arc.at(t), t, want, s});
        } catch (const Error&) {
            continue;
        }
        if (auto r = accept(g, pts)) return r;
    }
    // crossings carry +-1 as well, but their values need the whole profile;
    // this runs at most once per query
    for (const ConnectingArc& g : cands) {
        std::vector<RestrictionPoint> pts;
        try {
            const DeltaProfile prof = build_profile(g, ch);
            pts = sigma_records(g, ch);
            for (std::size_t s : uniq) {
                if (s == 0) continue;
                std::vector<Contact> contacts;
                for (const auto& c : prof.contacts)
                    if (c.segment == s) contacts.push_back(c);
                const SegmentScan scan = scan_segment(g.arc, ch, s, prof.entry[s], d_tol, contacts);
                pts.insert(pts.end(), scan.restrictions.begin(), scan.restrictions.end());
            }
        } catch (const Error&) {
            continue;
        }
        if (auto r = accept(g, pts)) return r;
    }
    return std::nullopt;
}

namespace {

class Engine {
public:
    Engine(const Channel& ch, Point p, const EngineOptions& opt)
        : ch_(ch), p_(p), tol_(ch.tolerances()), opt_(opt), n_(ch.n()) {
        d_tol_ = opt.d_tol > 0.0 ? opt.d_tol : 1e-6 * ch.diameter;
        cap_ = opt.cap > 0.0 ? opt.cap : default_cap(ch);
    }

    Certificate run() {
        const std::uint64_t calls0 = primitive_calls();
        gamma_ = min_connecting_arc(ch_, p_, cap_);
        reset_window();
        Certificate cert = loop();
        cert.iterations = iterations_;
        cert.d_tol = d_tol_;
        cert.primitive_calls = primitive_calls() - calls0;
        return cert;
    }

private:
    struct Cursor {
        std::size_t idx = 0;
        int entry = 0;
        SegmentScan scan;
    };

    Certificate loop() {
        while (l_.idx < n_ || r_.idx < n_) {
            if (++iterations_ > static_cast<int>(2 * n_))
                throw Error(ErrorKind::InternalInvariantBroken, "scan exceeded 2n iterations");
            advance(l_);
            advance(r_);

            if (auto seq = find_alt3(extremes(), t_eps(gamma_, tol_))) return finish(gamma_, *seq);

            StepAction action = StepAction::Advance;
            if (l_.scan.cls.violation_left) {
                push(R_, l_.idx, +1);
                L_ = l_.idx;
                rebase(l_, L_, 1);
                rebase(r_, R_, -1);
                action = StepAction::PushLeft;
            } else if (r_.scan.cls.violation_right) {
                push(r_.idx, L_, -1);
                R_ = r_.idx;
                rebase(r_, R_, -1);
                rebase(l_, L_, 1);
                action = StepAction::PushRight;
            }
            if (action != StepAction::Advance) {
                if (probe_) return finish(probe_->arc, probe_->sequence);
                reset_window();
            }
            if (opt_.observer)
                opt_.observer({iterations_, l_.idx, r_.idx, L_, R_, l_.entry, r_.entry, gamma_, action});
        }
        return finish(gamma_, std::nullopt);
    }

    // Moves a cursor one segment forward, carrying the value across the
    // breakpoint, and scans the new segment.
    void advance(Cursor& c) {
        if (c.idx >= n_) {
            if (c.idx == n_ && n_ > 0) scan(c);
            return;
        }
        c.entry = c.idx == 0 ? 0 : c.scan.exit_value;
        ++c.idx;
        scan(c);
        note(c.scan.restrictions);
    }

    void scan(Cursor& c) { c.scan = scan_segment(gamma_.arc, ch_, c.idx, c.entry, d_tol_); }

    // Re-anchors a cursor on a restriction segment of the new arc: values
    // just after its start vanish, so its entry follows from the start contact.
    void rebase(Cursor& c, std::size_t idx, int side) {
        (void)side;
        c.idx = idx;
        if (idx == 0) {
            c.entry = 0;
            c.scan = {};
            return;
        }
        int entry = 0;
        for (const auto& k : segment_contacts(gamma_.arc, ch_, idx))
            if (k.t == 0.0) entry = -(approach_contribution(k.approach) + leave_contribution(k.leave));
        c.entry = entry;
        scan(c);
    }

    void push(std::size_t right, std::size_t left, int direction) {
        const auto next = push_update(ch_, p_, right, left, cap_, &gamma_, direction);
        if (next) {
            gamma_ = *next;
            return;
        }
        // the arc cannot be pushed: an arc with three alternating
        // restrictions among the current segments must exist
        probe_ = blocking_triple_probe(ch_, p_, {0, L_, R_, l_.idx, r_.idx}, cap_, d_tol_);
        if (!probe_)
            throw Error(ErrorKind::InternalInvariantBroken, "no arc for the push update");
    }

    void reset_window() {
        min_left_.reset();
        max_left_.reset();
        min_right_.reset();
        max_right_.reset();
        note(sigma_records(gamma_, ch_));
        if (l_.idx > 0) note(l_.scan.restrictions);
        if (r_.idx > 0) note(r_.scan.restrictions);
    }

    void note(const std::vector<RestrictionPoint>& pts) {
        for (const auto& q : pts) {
            auto& lo = q.side > 0 ? min_left_ : min_right_;
            auto& hi = q.side > 0 ? max_left_ : max_right_;
            if (!lo || q.t_gamma < lo->t_gamma) lo = q;
            if (!hi || q.t_gamma > hi->t_gamma) hi = q;
        }
    }

    std::vector<RestrictionPoint> extremes() const {
        std::vector<RestrictionPoint> out;
        for (const auto* q : {&min_left_, &max_left_, &min_right_, &max_right_})
            if (*q) out.push_back(**q);
        return out;
    }

    Certificate finish(const ConnectingArc& g, const std::optional<AlternatingSequence>& seq) {
        Certificate cert;
        cert.arc = g;
        if (audit_violation(g, ch_, d_tol_) <= d_tol_) {
            cert.visible = true;
            return cert;
        }
        if (!seq) throw Error(ErrorKind::InternalInvariantBroken, "final arc fails the containment audit");
        if (!verify_sequence(g, ch_, *seq, d_tol_))
            throw Error(ErrorKind::InternalInvariantBroken, "alternating sequence fails verification");
        cert.sequence = *seq;
        return cert;
    }

    const Channel& ch_;
    Point p_;
    Tolerances tol_;
    const EngineOptions& opt_;
    std::size_t n_;
    double d_tol_ = 0.0, cap_ = 0.0;
    ConnectingArc gamma_;
    std::size_t L_ = 0, R_ = 0;
    Cursor l_, r_;
    int iterations_ = 0;
    std::optional<RestrictionPoint> min_left_, max_left_, min_right_, max_right_;
    std::optional<ProbeResult> probe_;
};

}  // namespace

Certificate query_visibility(const Channel& ch, Point p, const EngineOptions& opt) {
    if (point_in_channel(ch, p) != Location::Interior)
        throw Error(ErrorKind::PointNotInterior, "query point is not inside the channel");
    return Engine(ch, p, opt).run();
}

}  // namespace cvis

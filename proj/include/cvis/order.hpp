#pragma once

#include "cvis/channel.hpp"
#include "cvis/geom.hpp"

namespace cvis {

enum class BoundaryCase { InteriorStart, StartAtSigma0, StartAtSigma1, ClosureExtremal };
const char* to_string(BoundaryCase c);

// An arc from a point of the starting arc to the query point.
struct ConnectingArc {
    ArcSegment arc;
    double t_sigma = 0.0;
    BoundaryCase boundary_case = BoundaryCase::InteriorStart;

    Point p() const { return arc.end; }
};

// Wraps an arc starting on sigma, deriving its start parameter and case.
ConnectingArc make_connecting(const ArcSegment& sigma, const ArcSegment& arc,
                              const Tolerances& tol = {});

// Arc from sigma(t) with start tangent tau to p.
ConnectingArc connecting_from(const ArcSegment& sigma, double t, Point tau, Point p,
                              const Tolerances& tol = {});

enum class Ordering { Less, Equal, Greater };
enum class DecidingCase { StartOrderNoLeftCut, StartOrderWithLeftCut, SameStartTangentDot, ExtendedCutAtEnd };
const char* to_string(Ordering o);
const char* to_string(DecidingCase c);

struct OrderResult {
    Ordering order = Ordering::Equal;
    DecidingCase deciding_case = DecidingCase::SameStartTangentDot;
};

// True when a cuts b from the left somewhere, including the endpoint and
// start-point extensions. a must start no later than b on sigma.
bool left_cut(const ConnectingArc& a, const ConnectingArc& b, const Tolerances& tol = {});

OrderResult compare(const ArcSegment& sigma, const ConnectingArc& g1, const ConnectingArc& g2,
                    const Tolerances& tol = {});

ConnectingArc max_connecting_arc(const Channel& ch, Point p, double cap);
ConnectingArc min_connecting_arc(const Channel& ch, Point p, double cap);

// Default length cap: four times the channel diameter.
inline double default_cap(const Channel& ch) { return 4.0 * ch.diameter; }

}  // namespace cvis

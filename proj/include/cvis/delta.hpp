#pragma once

#include <vector>

#include "cvis/channel.hpp"
#include "cvis/order.hpp"

namespace cvis {

// Sides are encoded as +1 (left), -1 (right), 0 (none).
enum class Cause { ApproachLeft, ApproachRight, LeaveLeft, LeaveRight };
const char* to_string(Cause c);

// A point where the boundary meets the connecting arc. segment is 1-based
// into kappa; breakpoints belong to the later segment (t = 0).
struct Contact {
    std::size_t segment = 0;
    double t = 0.0;
    double t_gamma = 0.0;
    Point point;
    int approach = 0;
    int leave = 0;
    int delta = 0;  // value at the contact point itself
};

struct DeltaEvent {
    std::size_t segment = 0;
    double t = 0.0;
    int contribution = 0;
    Cause cause = Cause::ApproachLeft;
};

// Contributions of one contact in approach/leave order.
inline int approach_contribution(int side) { return -side; }
inline int leave_contribution(int side) { return side; }

struct DeltaProfile {
    ConnectingArc arc;
    std::vector<Contact> contacts;
    std::vector<DeltaEvent> events;
    std::vector<int> entry;  // entry[j]: value just before kappa_j(0), j = 1..n+1
    int total = 0;

    // Value at kappa_j(t).
    int prefix(std::size_t j, double t) const;
};

// Contacts of gamma with kappa_j, attributed per the breakpoint rule.
std::vector<Contact> segment_contacts(const ArcSegment& gamma, const Channel& ch, std::size_t j);

// Profile from contacts already computed for every segment.
DeltaProfile build_profile(const ConnectingArc& gamma, const Channel& ch);

// Generic count over a path; closed paths wrap the breakpoint at their start.
int delta(const ArcSegment& gamma, const std::vector<ArcSegment>& path, bool closed,
          const Tolerances& tol = {});

enum class SegmentKind { RestrictionLeft, RestrictionRight, ViolationLeft, ViolationRight, Neutral };
const char* to_string(SegmentKind k);

struct SegmentClass {
    SegmentKind kind = SegmentKind::Neutral;
    Point witness;
    double clearance = 0.0;
    bool violation_left = false;
    bool violation_right = false;
    double depth_left = 0.0;  // deepest penetration of a left violation interval
    double depth_right = 0.0;
};

// Boundary point with value -1 (side +1, restriction from the left) or +1
// (side -1, restriction from the right).
struct RestrictionPoint {
    Point point;
    double t_gamma = 0.0;
    int side = 0;
    std::size_t segment = 0;  // 0 marks a starting restriction on sigma
};

// Values taken on the closed segment kappa_j after shallow violations are
// clamped. The breakpoint kappa_j(1) contributes its value here although
// its events are counted on kappa_{j+1}.
struct SegmentScan {
    SegmentClass cls;
    std::vector<Contact> contacts;  // with clamped values
    std::vector<RestrictionPoint> restrictions;
    int exit_value = 0;             // value just after the segment
};

SegmentScan scan_segment(const ArcSegment& gamma, const Channel& ch, std::size_t j, int entry,
                         double d_tol);
SegmentScan scan_segment(const ArcSegment& gamma, const Channel& ch, std::size_t j, int entry,
                         double d_tol, const std::vector<Contact>& contacts);

SegmentClass classify_segment(const DeltaProfile& profile, const Channel& ch, std::size_t j,
                              double d_tol);

enum class StartRestriction { Left, Right, None };
const char* to_string(StartRestriction s);

StartRestriction starting_restriction(const ConnectingArc& gamma, const Channel& ch);

// Point shared by gamma and a single segment, with the sides of [gamma] on
// which the segment lies just before and after it (0 past an endpoint).
struct LocalContact {
    Point point;
    double t = 0.0;
    double t_gamma = 0.0;
    int before = 0;
    int after = 0;
};

std::vector<LocalContact> local_contacts(const ArcSegment& gamma, const ArcSegment& seg,
                                         const Tolerances& tol);

// Side (+1 left, -1 right) on which seg stays next to every point it shares
// with gamma; 0 when it crosses, has no common point, or is ambiguous.
int local_restriction_side(const std::vector<LocalContact>& contacts);

// Maximum distance from gamma of the kappa_j points strictly between t0 and t1.
double penetration(const ArcSegment& gamma, const ArcSegment& seg, double t0, double t1);

}  // namespace cvis

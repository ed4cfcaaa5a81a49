#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cvis/channel.hpp"
#include "cvis/delta.hpp"
#include "cvis/order.hpp"

namespace cvis {

// Restriction points ordered along the arc with alternating sides.
using AlternatingSequence = std::vector<RestrictionPoint>;

struct Certificate {
    bool visible = false;
    ConnectingArc arc;
    AlternatingSequence sequence;  // three entries when blocked
    int iterations = 0;
    double d_tol = 0.0;
    std::uint64_t primitive_calls = 0;
};

enum class StepAction { Advance, PushLeft, PushRight };

// Snapshot after each loop iteration, for tracing and tests.
struct EngineStep {
    int iteration = 0;
    std::size_t l = 0, r = 0, L = 0, R = 0;
    int entry_l = 0, entry_r = 0;  // cached values just before kappa_l(0), kappa_r(0)
    ConnectingArc gamma;
    StepAction action = StepAction::Advance;
};

struct EngineOptions {
    double d_tol = -1.0;  // default 1e-6 * diameter
    double cap = -1.0;    // default default_cap(ch)
    std::function<void(const EngineStep&)> observer;
};

// Decides circular visibility of p from sigma and returns a certificate.
Certificate query_visibility(const Channel& ch, Point p, const EngineOptions& opt = {});

// Unique connecting arc for which segment right_seg is a restriction from the
// right and left_seg one from the left, in that order along the arc. Index 0
// stands for sigma through a starting restriction. When several candidates
// survive, those moving away from `near` in the given direction (+1 up,
// -1 down the order) are preferred, then the one closest in curvature.
std::optional<ConnectingArc> push_update(const Channel& ch, Point p, std::size_t right_seg,
                                         std::size_t left_seg, double cap,
                                         const ConnectingArc* near = nullptr, int direction = 0);

// Arc through p with an alternating sequence of length three whose
// restrictions lie on the given segments (0 = sigma); checked against the
// full profile before it is returned.
struct ProbeResult {
    ConnectingArc arc;
    AlternatingSequence sequence;
};
std::optional<ProbeResult> blocking_triple_probe(const Channel& ch, Point p,
                                                 const std::vector<std::size_t>& segs, double cap,
                                                 double d_tol);

// Alternating sequence of length three among the given restriction points,
// if one exists.
std::optional<AlternatingSequence> find_alt3(const std::vector<RestrictionPoint>& points,
                                             double t_eps);

// Checks a sequence against the arc's full profile: sides alternate, the
// values are +-1 at the points, and the points are ordered along the arc.
bool verify_sequence(const ConnectingArc& gamma, const Channel& ch, const AlternatingSequence& seq,
                     double d_tol);

// Largest penetration of the boundary beyond the arc, over segments whose
// values show a violation; 0 for a visibility arc.
double audit_violation(const ConnectingArc& gamma, const Channel& ch, double d_tol);

}  // namespace cvis

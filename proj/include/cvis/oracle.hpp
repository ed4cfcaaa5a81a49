#pragma once

#include <optional>

#include "cvis/channel.hpp"
#include "cvis/delta.hpp"
#include "cvis/order.hpp"

namespace cvis {

// Brute-force ground truth, slow on purpose and independent of the engine.

struct OracleConfig {
    int start_samples = 64;   // grid over the start parameter on sigma
    int angle_samples = 64;   // grid over the departure direction
    int arc_samples = 256;    // containment samples along each arc
    double margin = 1e-6;     // clearance a witness must keep from kappa
};

enum class OracleVerdict { DefinitelyVisible, DefinitelyBlocked, Unknown };
const char* to_string(OracleVerdict v);

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::Unknown;
    std::optional<ConnectingArc> witness;  // contained arc, or the arc carrying the sequence
    int contained_at_zero = 0;             // sampled arcs contained with no margin
};

OracleResult oracle_visible(const Channel& ch, Point p, const OracleConfig& cfg = {});

// Every sampled connecting arc the oracle looks at, in sweep order.
std::vector<ConnectingArc> oracle_arcs(const Channel& ch, Point p, const OracleConfig& cfg);

// Smallest clearance of gamma from kappa, negative when gamma leaves the
// channel; sampled along gamma and checked against crossings.
double sampled_clearance(const ConnectingArc& gamma, const Channel& ch, int arc_samples);

// Delta profile recomputed from the approach/leave counters with no caching:
// every prefix value is summed from the first segment on.
DeltaProfile delta_naive(const ConnectingArc& gamma, const Channel& ch);

// Restriction points of gamma read off a profile (value +-1 at the point),
// plus the starting restriction and the ends of kappa lying on gamma.
std::vector<RestrictionPoint> naive_restrictions(const DeltaProfile& prof, const Channel& ch);

// Brute-force search for three restrictions with alternating sides along
// gamma; the first two may coincide only at a starting restriction.
bool has_alternating_triple(std::vector<RestrictionPoint> pts, double t_eps);

}  // namespace cvis

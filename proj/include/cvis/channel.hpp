#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvis/geom.hpp"

namespace cvis {

struct ArcSpline {
    std::vector<ArcSegment> segments;

    std::size_t size() const { return segments.size(); }
    const ArcSegment& operator[](std::size_t i) const { return segments[i]; }
    ArcSpline reversed() const;
};

struct BoundingBox {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};

    double diagonal() const { return dist(lo, hi); }
    void add(const BoundingBox& b);
    bool overlaps(const BoundingBox& b, double pad) const;
};

BoundingBox bounding_box(const ArcSegment& s);

// Signed area enclosed by a closed sequence of segments, positive when
// counterclockwise.
double signed_area(const std::vector<ArcSegment>& loop);

struct Channel {
    ArcSegment sigma;
    ArcSpline kappa;
    double diameter = 1.0;

    std::size_t n() const { return kappa.size(); }
    // Segment by the engine's index convention: 0 is sigma, j >= 1 is kappa_j.
    const ArcSegment& segment(std::size_t j) const { return j == 0 ? sigma : kappa[j - 1]; }
    Tolerances tolerances() const { return Tolerances{}.scaled(diameter); }
};

struct Diagnostic {
    ErrorKind kind;
    std::string message;
};

struct ValidationReport {
    std::optional<Channel> channel;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return channel.has_value(); }
};

// Checks closure, simplicity, orientation and the convex start corner,
// collecting every violated invariant.
ValidationReport check_channel(const ArcSegment& sigma, const ArcSpline& kappa,
                               const Tolerances& base = {});

// Like check_channel but throws the first diagnostic.
Channel validate_channel(const ArcSegment& sigma, const ArcSpline& kappa,
                         const Tolerances& base = {});

enum class Location { Interior, Boundary, Exterior };
const char* to_string(Location loc);

Location point_in_channel(const Channel& ch, Point q);

}  // namespace cvis

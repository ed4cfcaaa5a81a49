#pragma once

#include <string>

#include "cvis/channel.hpp"
#include "cvis/engine.hpp"

namespace cvis {

// Channel as read from disk, before validation.
struct ChannelData {
    ArcSegment sigma;
    ArcSpline kappa;
};

// {"sigma": {"start":[x,y], "end":[x,y], "bulge":b}, "kappa": [...]}.
// Throws ParseError with the byte offset or the offending field.
ChannelData parse_channel(const std::string& text);
ChannelData read_channel_file(const std::string& path);
std::string channel_to_json(const ArcSegment& sigma, const ArcSpline& kappa);

std::string certificate_to_json(const Certificate& cert);
// Inverse of certificate_to_json; the arc is re-anchored on the channel's sigma.
Certificate parse_certificate(const std::string& text, const Channel& ch);

std::string diagnostics_to_json(const ValidationReport& report);

struct RenderSpec {
    int width = 800;
    int height = 800;
    bool channel = true;
    bool sigma = true;
    bool arc = true;
    bool restrictions = true;
    bool violations = true;
    bool sequence = true;
};

// SVG with native arc commands: one path per boundary segment, one for the
// certificate arc. Left restrictions are open circles, right ones filled.
std::string render_svg(const Channel& ch, Point p, const Certificate* cert, const RenderSpec& spec = {});

}  // namespace cvis

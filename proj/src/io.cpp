#include "cvis/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cvis {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

json arc_json(const ArcSegment& s) {
    return {{"start", point_json(s.start)}, {"end", point_json(s.end)}, {"bulge", s.bulge}};
}

Point point_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::ParseError, where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ArcSegment arc_of(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, where + ": expected an object");
    for (const char* key : {"start", "end", "bulge"})
        if (!j.contains(key)) throw Error(ErrorKind::ParseError, where + ": missing \"" + key + "\"");
    if (!j["bulge"].is_number()) throw Error(ErrorKind::ParseError, where + ".bulge: expected a number");
    return {point_of(j["start"], where + ".start"), point_of(j["end"], where + ".end"), j["bulge"].get<double>()};
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

}  // namespace

ChannelData parse_channel(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("sigma") || !j.contains("kappa"))
        throw Error(ErrorKind::ParseError, "expected an object with \"sigma\" and \"kappa\"");
    ChannelData out;
    out.sigma = arc_of(j["sigma"], "sigma");
    const json& k = j["kappa"];
    if (!k.is_array()) throw Error(ErrorKind::ParseError, "kappa: expected an array");
    for (std::size_t i = 0; i < k.size(); ++i)
        out.kappa.segments.push_back(arc_of(k[i], "kappa[" + std::to_string(i) + "]"));
    return out;
}

ChannelData read_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_channel(ss.str());
}

std::string channel_to_json(const ArcSegment& sigma, const ArcSpline& kappa) {
    json k = json::array();
    for (const auto& s : kappa.segments) k.push_back(arc_json(s));
    return json{{"sigma", arc_json(sigma)}, {"kappa", k}}.dump(2);
}

std::string certificate_to_json(const Certificate& cert) {
    json seq = json::array();
    for (const auto& q : cert.sequence)
        seq.push_back({{"point", point_json(q.point)}, {"side", q.side > 0 ? "left" : "right"}, {"segment", q.segment}});
    return json{{"visible", cert.visible},
                {"arc", arc_json(cert.arc.arc)},
                {"sequence", seq},
                {"iterations", cert.iterations},
                {"d_tol", cert.d_tol}}
        .dump(2);
}

Certificate parse_certificate(const std::string& text, const Channel& ch) {
    const json j = parse_json(text);
    try {
        Certificate c;
        c.visible = j.at("visible").get<bool>();
        c.arc = make_connecting(ch.sigma, arc_of(j.at("arc"), "arc"), ch.tolerances());
        for (const auto& q : j.at("sequence")) {
            RestrictionPoint r;
            r.point = point_of(q.at("point"), "sequence.point");
            r.side = q.at("side").get<std::string>() == "left" ? 1 : -1;
            r.segment = q.at("segment").get<std::size_t>();
            r.t_gamma = r.segment == 0 ? 0.0 : std::clamp(c.arc.arc.param_of(r.point), 0.0, 1.0);
            c.sequence.push_back(r);
        }
        c.iterations = j.at("iterations").get<int>();
        c.d_tol = j.at("d_tol").get<double>();
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

std::string diagnostics_to_json(const ValidationReport& report) {
    json d = json::array();
    for (const auto& x : report.diagnostics) d.push_back({{"kind", to_string(x.kind)}, {"message", x.message}});
    return json{{"valid", report.ok()}, {"diagnostics", d}}.dump(2);
}

namespace {

struct Frame {
    BoundingBox box;
    double scale = 1.0, pad = 20.0;

    Point map(Point q) const { return {pad + (q.x - box.lo.x) * scale, pad + (box.hi.y - q.y) * scale}; }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// y is flipped, so counterclockwise arcs get the positive sweep flag.
std::string path_d(const Frame& f, const ArcSegment& s) {
    const Point a = f.map(s.start), b = f.map(s.end);
    std::string d = "M " + num(a.x) + " " + num(a.y) + " ";
    if (s.is_line()) return d + "L " + num(b.x) + " " + num(b.y);
    const double r = s.radius() * f.scale;
    const int large = std::abs(s.bulge) > 1.0 ? 1 : 0;
    const int sweep = s.bulge > 0.0 ? 1 : 0;
    return d + "A " + num(r) + " " + num(r) + " 0 " + std::to_string(large) + " " + std::to_string(sweep) + " " +
           num(b.x) + " " + num(b.y);
}

std::string marker(const Frame& f, Point q, bool filled, const char* cls) {
    const Point m = f.map(q);
    return std::string("<circle class=\"") + cls + "\" cx=\"" + num(m.x) + "\" cy=\"" + num(m.y) +
           "\" r=\"4\" fill=\"" + (filled ? "black" : "white") + "\" stroke=\"black\"/>\n";
}

}  // namespace

std::string render_svg(const Channel& ch, Point p, const Certificate* cert, const RenderSpec& spec) {
    Frame f;
    f.box = bounding_box(ch.sigma);
    for (const auto& s : ch.kappa.segments) f.box.add(bounding_box(s));
    if (cert) f.box.add(bounding_box(cert->arc.arc));
    const double w = std::max(f.box.hi.x - f.box.lo.x, 1e-12), h = std::max(f.box.hi.y - f.box.lo.y, 1e-12);
    f.scale = std::min((spec.width - 2 * f.pad) / w, (spec.height - 2 * f.pad) / h);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    if (spec.sigma)
        os << "<path class=\"sigma\" d=\"" << path_d(f, ch.sigma) << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"3\"/>\n";
    if (spec.channel)
        for (const auto& s : ch.kappa.segments)
            os << "<path class=\"kappa\" d=\"" << path_d(f, s) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    if (cert && spec.arc)
        os << "<path class=\"arc\" d=\"" << path_d(f, cert->arc.arc) << "\" fill=\"none\" stroke=\""
           << (cert->visible ? "#2ca02c" : "#d62728") << "\" stroke-width=\"2\"/>\n";
    if (cert) {
        const double dt = cert->d_tol > 0.0 ? cert->d_tol : 1e-6 * ch.diameter;
        const DeltaProfile prof = build_profile(cert->arc, ch);
        for (std::size_t j = 1; j <= ch.n(); ++j) {
            std::vector<Contact> cs;
            for (const auto& c : prof.contacts)
                if (c.segment == j) cs.push_back(c);
            const SegmentScan sc = scan_segment(cert->arc.arc, ch, j, prof.entry[j], dt, cs);
            if (spec.restrictions)
                for (const auto& r : sc.restrictions) os << marker(f, r.point, r.side < 0, "restriction");
            if (spec.violations && (sc.cls.violation_left || sc.cls.violation_right)) {
                const Point m = f.map(sc.cls.witness);
                os << "<text class=\"violation\" x=\"" << num(m.x) << "\" y=\"" << num(m.y)
                   << "\" fill=\"#d62728\" font-size=\"14\">x</text>\n";
            }
        }
        if (spec.sequence)
            for (std::size_t i = 0; i < cert->sequence.size(); ++i) {
                const Point m = f.map(cert->sequence[i].point);
                os << "<text class=\"sequence\" x=\"" << num(m.x + 6) << "\" y=\"" << num(m.y - 6)
                   << "\" font-size=\"12\">a" << i + 1 << "</text>\n";
            }
    }
    const Point mp = f.map(p);
    os << "<circle class=\"query\" cx=\"" << num(mp.x) << "\" cy=\"" << num(mp.y)
       << "\" r=\"3\" fill=\"#ff7f0e\"/>\n</svg>\n";
    return os.str();
}

}  // namespace cvis

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvis/engine.hpp"
#include "cvis/fixtures.hpp"
#include "cvis/io.hpp"
#include "cvis/oracle.hpp"

namespace py = pybind11;
using namespace cvis;

namespace {

using PointT = std::pair<double, double>;
using SegmentT = std::tuple<PointT, PointT, double>;

Point to_point(const PointT& p) { return {p.first, p.second}; }
PointT from_point(Point p) { return {p.x, p.y}; }
ArcSegment to_segment(const SegmentT& s) {
    return {to_point(std::get<0>(s)), to_point(std::get<1>(s)), std::get<2>(s)};
}
SegmentT from_segment(const ArcSegment& s) { return {from_point(s.start), from_point(s.end), s.bulge}; }

ArcSpline to_spline(const std::vector<SegmentT>& segs) {
    ArcSpline k;
    for (const auto& s : segs) k.segments.push_back(to_segment(s));
    return k;
}

py::dict report_dict(const ValidationReport& r) {
    py::list diags;
    for (const auto& d : r.diagnostics) {
        py::dict e;
        e["kind"] = to_string(d.kind);
        e["message"] = d.message;
        diags.append(e);
    }
    py::dict out;
    out["valid"] = r.ok();
    out["diagnostics"] = diags;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Circular visibility queries in arc-spline channels";

    // kept alive for the interpreter's lifetime; instances carry the error kind
    static py::handle error = py::exception<Error>(m, "CvisError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr ep) {
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<Channel>(m, "Channel")
        .def(py::init([](const SegmentT& sigma, const std::vector<SegmentT>& kappa) {
                 return validate_channel(to_segment(sigma), to_spline(kappa));
             }),
             py::arg("sigma"), py::arg("kappa"))
        .def_static(
            "from_json",
            [](const std::string& text) {
                const ChannelData d = parse_channel(text);
                return validate_channel(d.sigma, d.kappa);
            },
            py::arg("text"))
        .def_property_readonly("sigma", [](const Channel& c) { return from_segment(c.sigma); })
        .def_property_readonly("kappa",
                               [](const Channel& c) {
                                   std::vector<SegmentT> out;
                                   for (const auto& s : c.kappa.segments) out.push_back(from_segment(s));
                                   return out;
                               })
        .def_readonly("diameter", &Channel::diameter)
        .def_property_readonly("n", &Channel::n)
        .def("to_json", [](const Channel& c) { return channel_to_json(c.sigma, c.kappa); })
        .def("contains",
             [](const Channel& c, const PointT& p) {
                 return point_in_channel(c, to_point(p)) == Location::Interior;
             })
        .def("__repr__", [](const Channel& c) { return "<Channel n=" + std::to_string(c.n()) + ">"; });

    py::class_<RestrictionPoint>(m, "RestrictionPoint")
        .def_property_readonly("point", [](const RestrictionPoint& r) { return from_point(r.point); })
        .def_readonly("t_gamma", &RestrictionPoint::t_gamma)
        .def_property_readonly("side", [](const RestrictionPoint& r) { return r.side > 0 ? "left" : "right"; })
        .def_readonly("segment", &RestrictionPoint::segment);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("visible", &Certificate::visible)
        .def_property_readonly("arc", [](const Certificate& c) { return from_segment(c.arc.arc); })
        .def_readonly("sequence", &Certificate::sequence)
        .def_readonly("iterations", &Certificate::iterations)
        .def_readonly("d_tol", &Certificate::d_tol)
        .def_readonly("primitive_calls", &Certificate::primitive_calls)
        .def("to_json", [](const Certificate& c) { return certificate_to_json(c); })
        .def("__repr__", [](const Certificate& c) {
            return std::string("<Certificate ") + (c.visible ? "visible" : "blocked") + ">";
        });

    m.def(
        "check_channel",
        [](const SegmentT& sigma, const std::vector<SegmentT>& kappa) {
            return report_dict(check_channel(to_segment(sigma), to_spline(kappa)));
        },
        py::arg("sigma"), py::arg("kappa"), "Validation diagnostics as a dict.");

    m.def(
        "query",
        [](const Channel& ch, const PointT& p, std::optional<double> d_tol) {
            EngineOptions opt;
            if (d_tol) opt.d_tol = *d_tol;
            return query_visibility(ch, to_point(p), opt);
        },
        py::arg("channel"), py::arg("point"), py::arg("d_tol") = py::none(),
        "Decides visibility of point from the channel's starting arc.");

    m.def(
        "verify",
        [](const Channel& ch, const Certificate& c) {
            if (c.visible) return audit_violation(c.arc, ch, c.d_tol) <= c.d_tol;
            return c.sequence.size() == 3 && verify_sequence(c.arc, ch, c.sequence, c.d_tol);
        },
        py::arg("channel"), py::arg("certificate"), "Re-audits a certificate against the channel.");

    m.def(
        "oracle",
        [](const Channel& ch, const PointT& p, int samples) {
            OracleConfig cfg;
            cfg.start_samples = cfg.angle_samples = samples;
            cfg.arc_samples = 4 * samples;
            return std::string(to_string(oracle_visible(ch, to_point(p), cfg).verdict));
        },
        py::arg("channel"), py::arg("point"), py::arg("samples") = 64, "Brute-force reference verdict.");

    m.def(
        "render_svg",
        [](const Channel& ch, const PointT& p, const Certificate* cert) {
            return render_svg(ch, to_point(p), cert);
        },
        py::arg("channel"), py::arg("point"), py::arg("certificate") = nullptr);

    m.def("fixture_names", [] {
        std::vector<std::string> out;
        for (const auto& f : fixtures::all_fixtures()) out.push_back(f.name);
        return out;
    });
    m.def(
        "fixture",
        [](const std::string& name) {
            for (const auto& f : fixtures::all_fixtures())
                if (f.name == name) {
                    std::vector<PointT> vis, blk;
                    for (Point q : f.visible) vis.push_back(from_point(q));
                    for (Point q : f.blocked) blk.push_back(from_point(q));
                    return py::make_tuple(f.channel, vis, blk);
                }
            throw py::key_error(name);
        },
        py::arg("name"), "(channel, visible points, blocked points) of a named fixture.");
    m.def("random_star", &fixtures::random_star, py::arg("n"), py::arg("seed"));
    m.def("random_meander", &fixtures::random_meander, py::arg("n"), py::arg("seed"));
}

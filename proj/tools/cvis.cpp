#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "cvis/engine.hpp"
#include "cvis/fixtures.hpp"
#include "cvis/io.hpp"

namespace {

// Exit codes shared by the subcommands.
enum Exit { kVisible = 0, kInvalid = 1, kParse = 2, kBlocked = 3, kNotInterior = 4, kFailure = 5 };

cvis::Point parse_point(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw cvis::Error(cvis::ErrorKind::ParseError, "--point expects x,y");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw cvis::Error(cvis::ErrorKind::ParseError, "--point expects x,y");
    }
}

int cmd_validate(const std::string& path) {
    cvis::ChannelData data;
    try {
        data = cvis::read_channel_file(path);
    } catch (const cvis::Error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    }
    const cvis::ValidationReport report = cvis::check_channel(data.sigma, data.kappa);
    std::cout << cvis::diagnostics_to_json(report) << "\n";
    return report.ok() ? 0 : kInvalid;
}

int cmd_check(const std::string& path, const std::string& point, double tolerance, bool as_json,
              const std::string& svg) {
    cvis::ChannelData data;
    cvis::Point p;
    try {
        data = cvis::read_channel_file(path);
        p = parse_point(point);
    } catch (const cvis::Error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    }
    const cvis::ValidationReport report = cvis::check_channel(data.sigma, data.kappa);
    if (!report.ok()) {
        std::cerr << cvis::diagnostics_to_json(report) << "\n";
        return kInvalid;
    }
    const cvis::Channel& ch = *report.channel;
    cvis::EngineOptions opt;
    if (tolerance > 0.0) opt.d_tol = tolerance;
    cvis::Certificate cert;
    try {
        cert = cvis::query_visibility(ch, p, opt);
    } catch (const cvis::Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == cvis::ErrorKind::PointNotInterior ? kNotInterior : kFailure;
    }
    if (as_json)
        std::cout << cvis::certificate_to_json(cert) << "\n";
    else
        std::cout << (cert.visible ? "visible" : "blocked") << " after " << cert.iterations << " iterations\n";
    if (!svg.empty()) {
        std::ofstream out(svg);
        out << cvis::render_svg(ch, p, &cert);
        if (!out) {
            std::cerr << "cannot write " << svg << "\n";
            return kFailure;
        }
    }
    return cert.visible ? kVisible : kBlocked;
}

int cmd_bench(int n, std::uint64_t seed, int repeat) {
    std::cout << "n,iterations,micros\n";
    for (int i = 0; i < repeat; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        cvis::Channel ch;
        // a generator that cannot produce a valid channel is retried with the next seed
        for (std::uint64_t k = 0;; ++k) {
            try {
                ch = cvis::fixtures::random_star(std::max(n, 3), s + 7919 * k);
                break;
            } catch (const cvis::Error&) {
            }
        }
        std::mt19937_64 rng(s);
        const cvis::Point p = cvis::fixtures::random_interior_point(ch, rng);
        const auto t0 = std::chrono::steady_clock::now();
        const cvis::Certificate c = cvis::query_visibility(ch, p);
        const auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0);
        std::cout << ch.n() << "," << c.iterations << "," << us.count() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circular visibility queries in arc-spline channels"};
    app.require_subcommand(1);

    std::string path, point, svg;
    double tolerance = -1.0;
    bool as_json = false;
    int segments = 100, repeat = 1;
    std::uint64_t seed = 1;

    auto* validate = app.add_subcommand("validate", "check a channel file");
    validate->add_option("channel", path, "channel JSON file")->required();

    auto* check = app.add_subcommand("check", "decide visibility of a point");
    check->add_option("channel", path, "channel JSON file")->required();
    check->add_option("--point", point, "query point x,y")->required();
    check->add_option("--tolerance", tolerance, "violation depth tolerance (default 1e-6 x diameter)");
    check->add_flag("--json", as_json, "print the certificate as JSON");
    check->add_option("--svg", svg, "write a rendering to this file");

    auto* bench = app.add_subcommand("bench", "iteration counts and timings on random channels");
    bench->add_option("--segments", segments, "boundary segments per channel");
    bench->add_option("--seed", seed, "first seed");
    bench->add_option("--repeat", repeat, "number of channels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kParse;
    }
    if (*validate) return cmd_validate(path);
    if (*check) return cmd_check(path, point, tolerance, as_json, svg);
    return cmd_bench(segments, seed, repeat);
}

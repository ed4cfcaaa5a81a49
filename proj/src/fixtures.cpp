#include "cvis/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace cvis::fixtures {

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Splits the longest edges at jittered interior points until there are
// `target` edges in total.
void refine_edges(std::vector<Point>& verts, std::vector<double>& bulges, std::size_t target,
                  double jitter, std::mt19937_64& rng) {
    while (verts.size() < target) {
        std::size_t best = 1;  // never split sigma (edge 0)
        double len = -1.0;
        for (std::size_t i = 1; i < verts.size(); ++i) {
            const double l = dist(verts[i], verts[(i + 1) % verts.size()]);
            if (l > len) {
                len = l;
                best = i;
            }
        }
        const Point a = verts[best], b = verts[(best + 1) % verts.size()];
        const double s = uniform(rng, 0.35, 0.65);
        const Point m = a + s * (b - a) + uniform(rng, -jitter, jitter) * len * rot90(unit(b - a));
        verts.insert(verts.begin() + static_cast<long>(best) + 1, m);
        bulges.insert(bulges.begin() + static_cast<long>(best) + 1, 0.0);
        bulges[best] = 0.0;
    }
}

}  // namespace

Channel polygon_channel(const std::vector<Point>& verts, const std::vector<double>& bulges) {
    const std::size_t m = verts.size();
    auto bulge = [&](std::size_t i) { return i < bulges.size() ? bulges[i] : 0.0; };
    const ArcSegment sigma{verts[0], verts[1], bulge(0)};
    ArcSpline kappa;
    for (std::size_t i = 1; i < m; ++i) kappa.segments.push_back({verts[i], verts[(i + 1) % m], bulge(i)});
    return validate_channel(sigma, kappa);
}

Fixture unit_square() {
    Fixture f;
    f.name = "square";
    f.channel = polygon_channel({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    f.visible = {{0.5, 0.5}, {0.1, 0.9}, {0.9, 0.9}, {0.5, 0.05}};
    return f;
}

Fixture hook(double top_bulge) {
    Fixture f;
    f.name = "hook";
    const std::vector<Point> v{{0, 0},   {0.2, 0}, {0.2, 3}, {1, 3},
                               {1, 0},   {1.2, 0}, {1.2, 3.2}, {0, 3.2}};
    std::vector<double> b(v.size(), 0.0);
    b[6] = top_bulge;
    f.channel = polygon_channel(v, b);
    f.visible = {{0.1, 1.0}, {0.1, 2.5}};
    f.blocked = {{1.1, 0.5}, {1.1, 1.5}};
    return f;
}

Fixture spiral(int half_turns) {
    const double step = 0.5, width = 0.4, r0 = 0.3;
    auto center = [&](int k) { return k % 2 == 0 ? Point{0, 0} : Point{step, 0}; };
    // point where half-turn k starts, on the x axis
    auto start_x = [&](int k, double r) {
        const Point c = center(k);
        return k % 2 == 0 ? c.x + r : c.x - r;
    };
    ArcSpline kappa;
    const ArcSegment sigma{{r0, 0}, {r0 + width, 0}, 0.0};
    for (int k = 0; k < half_turns; ++k) {
        const double r = r0 + k * step + width;
        const Point a{start_x(k, r), 0}, b{2 * center(k).x - a.x, 0};
        kappa.segments.push_back({a, b, 1.0});
    }
    const Point outer_end = kappa.segments.back().end;
    std::vector<ArcSegment> inner;
    for (int k = 0; k < half_turns; ++k) {
        const double r = r0 + k * step;
        const Point a{start_x(k, r), 0}, b{2 * center(k).x - a.x, 0};
        inner.push_back({a, b, 1.0});
    }
    kappa.segments.push_back({outer_end, inner.back().end, 0.0});
    for (auto it = inner.rbegin(); it != inner.rend(); ++it) kappa.segments.push_back(it->reversed());
    Fixture f;
    f.name = "spiral";
    f.channel = validate_channel(sigma, kappa);
    f.visible = {{0.0, 0.5}, {0.45, 0.25}, {0.2, -1.0}};
    f.blocked = {{0.0, 1.5}, {1.5, 0.5}};
    return f;
}

Fixture critical(int m) {
    const Point c{2, 0};
    const double R = 2.0;
    const double span = kPi / 3.0;
    auto phi = [&](int k) { return kPi - k * span / m; };
    const double phi_m = phi(m);
    const double x_top = 2.0 + (R - 3.0 * std::sin(phi_m)) / std::cos(phi_m);
    std::vector<Point> v{{0, 0}, {4, 0}, {4, 3}, {x_top, 3}};
    for (int k = m; k > 0; --k) {
        const double mid = 0.5 * (phi(k) + phi(k - 1));
        const double half = 0.5 * (phi(k - 1) - phi(k));
        v.push_back(c + (R / std::cos(half)) * Point{std::cos(mid), std::sin(mid)});
    }
    Fixture f;
    f.name = "critical";
    f.channel = polygon_channel(v);
    f.visible = {{2, 2}};
    return f;
}

std::vector<Fixture> all_fixtures() {
    return {unit_square(), hook(), hook(0.05), spiral(), critical()};
}

Channel near_straight(const Channel& ch, double magnitude) {
    Channel out = ch;
    auto flat = [&](double b) { return b < 0.0 ? -magnitude : magnitude; };
    out.sigma.bulge = flat(out.sigma.bulge);
    for (auto& s : out.kappa.segments) s.bulge = flat(s.bulge);
    return validate_channel(out.sigma, out.kappa);
}

Channel random_star(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0;; ++attempt) {
        const int m = n + 1;
        std::vector<Point> v;
        std::vector<double> b;
        const double amp = attempt < 20 ? 0.15 : 0.0;
        double r = 1.0;
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * kPi * (i + uniform(rng, -0.3, 0.3) * (i > 1)) / m;
            if (i <= 1)
                r = 1.0;
            else
                r = std::clamp(0.5 * r + 0.5 * uniform(rng, 0.3, 1.0), 0.3, 0.98);
            v.push_back({r * std::cos(th), r * std::sin(th)});
            b.push_back(uniform(rng, 0.0, 1.0) < 0.5 ? uniform(rng, -amp, amp) : 0.0);
        }
        try {
            return polygon_channel(v, b);
        } catch (const Error&) {
            if (attempt > 200) throw;
        }
    }
}

Channel random_meander(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0;; ++attempt) {
        const double w = uniform(rng, 0.2, 0.4), t = uniform(rng, 0.1, 0.3), H = uniform(rng, 1.5, 3.5);
        auto edges_for = [](int k) { return k == 1 ? 4 : 4 * k + 2; };
        int k = 1;
        while (edges_for(k + 1) <= n) ++k;
        auto a = [&](int i) { return i * (w + t); };
        std::vector<Point> right{{a(0) + w, 0}}, left{{a(0), 0}};
        for (int i = 0; i < k; ++i) {
            const bool last = i == k - 1;
            if (i % 2 == 0) {
                if (!last) {
                    right.push_back({a(i) + w, H - w});
                    right.push_back({a(i + 1), H - w});
                    left.push_back({a(i), H});
                    left.push_back({a(i + 1) + w, H});
                } else {
                    right.push_back({a(i) + w, H});
                    left.push_back({a(i), H});
                }
            } else {
                if (!last) {
                    right.push_back({a(i), 0});
                    right.push_back({a(i + 1) + w, 0});
                    left.push_back({a(i) + w, w});
                    left.push_back({a(i + 1), w});
                } else {
                    right.push_back({a(i), 0});
                    left.push_back({a(i) + w, 0});
                }
            }
        }
        std::vector<Point> v{left[0]};
        for (const auto& p : right) v.push_back(p);
        for (auto it = left.rbegin(); it + 1 != left.rend(); ++it) v.push_back(*it);
        std::vector<double> b(v.size(), 0.0);
        refine_edges(v, b, static_cast<std::size_t>(n) + 1, attempt < 20 ? 0.01 : 0.0, rng);
        try {
            return polygon_channel(v, b);
        } catch (const Error&) {
            if (attempt > 200) throw;
        }
    }
}

Point random_interior_point(const Channel& ch, std::mt19937_64& rng) {
    BoundingBox box = bounding_box(ch.sigma);
    for (const auto& s : ch.kappa.segments) box.add(bounding_box(s));
    for (;;) {
        const Point q{uniform(rng, box.lo.x, box.hi.x), uniform(rng, box.lo.y, box.hi.y)};
        if (point_in_channel(ch, q) != Location::Interior) continue;
        // keep clear of the boundary so queries are not tolerance-dominated
        bool clear = true;
        for (std::size_t j = 0; j <= ch.n() && clear; ++j)
            if (ch.segment(j).distance_to(q) < 1e-4 * ch.diameter) clear = false;
        if (clear) return q;
    }
}

ConnectingArc random_connecting_arc(const ArcSegment& sigma, Point p, std::mt19937_64& rng,
                                    double closure_prob) {
    const Tolerances tol{};
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double t, ang;
        if (uniform(rng, 0.0, 1.0) < closure_prob) {
            t = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : 1.0;
            ang = uniform(rng, 0.0, 1.0) < 0.2 ? (uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : kPi)
                                               : uniform(rng, 0.0, kPi);
        } else {
            t = uniform(rng, 0.0, 1.0);
            ang = uniform(rng, 1e-3, kPi - 1e-3);
        }
        const Point tau = rotate(sigma.tangent(t), ang);
        try {
            ConnectingArc g = connecting_from(sigma, t, tau, p, tol);
            // a tangent departure belongs to the closure only if it does not bend to the right of sigma
            bool ok = emanating_side(sigma, t, tau, g.arc.curvature(), tol) >= 0;
            // no return to sigma after leaving it
            for (const auto& e : intersect(g.arc, sigma, tol))
                if (e.t_self * g.arc.length() > 1e-7) ok = false;
            if (ok) return g;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::NoCandidate, "could not sample a connecting arc");
}

Channel perturb(const Channel& ch, double magnitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 50; ++attempt) {
        ArcSpline kappa = ch.kappa;
        const std::size_t n = kappa.size();
        // move every breakpoint strictly inside kappa
        for (std::size_t j = 1; j < n; ++j) {
            const double ang = uniform(rng, 0.0, 2.0 * kPi);
            const double r = magnitude * uniform(rng, 0.5, 1.0);
            const Point d = r * Point{std::cos(ang), std::sin(ang)};
            const Point q = kappa.segments[j].start + d;
            kappa.segments[j].start = q;
            kappa.segments[j - 1].end = q;
        }
        try {
            return validate_channel(ch.sigma, kappa);
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::ChannelInvalid, "no valid perturbation found");
}

}  // namespace cvis::fixtures

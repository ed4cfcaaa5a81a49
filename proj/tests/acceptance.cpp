// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvis/delta.hpp"
#include "cvis/engine.hpp"
#include "cvis/fixtures.hpp"
#include "cvis/oracle.hpp"
#include "gen.hpp"

using namespace cvis;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(std::string why) {
        pass = false;
        if (failures.size() < 5) failures.push_back(std::move(why));
    }
};

Channel random_channel(int n, std::uint64_t seed) {
    return seed % 2 ? fixtures::random_star(n, seed) : fixtures::random_meander(n, seed);
}

// Empty when the certificate is sound.
std::string audit(const Channel& ch, Point p, const Certificate& c) {
    if (dist(c.arc.arc.end, p) > 1e-9) return "arc does not end at p";
    if (ch.sigma.distance_to(c.arc.arc.start) > ch.tolerances().abs()) return "arc does not start on sigma";
    const double depth = audit_violation(c.arc, ch, c.d_tol);
    if (c.visible) return depth <= c.d_tol ? "" : fmt("visible arc penetrated by %.3g > d_tol", depth);
    if (c.sequence.size() != 3) return "blocked without three restrictions";
    if (c.sequence[0].side != -c.sequence[1].side || c.sequence[1].side != -c.sequence[2].side)
        return "sides do not alternate";
    if (!verify_sequence(c.arc, ch, c.sequence, c.d_tol)) return "sequence fails re-verification";
    if (depth <= c.d_tol) return "blocking arc is contained in the channel";
    return "";
}

// Tally of certificate re-audits, reported as criterion 6.
struct Audits {
    int visible = 0, blocked = 0;
    double seconds = 0.0;
    Outcome outcome;

    void add(const Channel& ch, Point p, const Certificate& c) {
        const auto t0 = Clock::now();
        const std::string why = audit(ch, p, c);
        if (!why.empty()) outcome.fail(fmt("(%.6g, %.6g): %s", p.x, p.y, why.c_str()));
        (c.visible ? visible : blocked) += 1;
        seconds += seconds_since(t0);
    }
};

// Criterion 1: iteration bound and runtime.
Outcome iteration_bound(Audits& audits) {
    Outcome o;
    std::mt19937_64 rng(101);
    int queries = 0;
    double worst = 0.0;
    double query_time = 0.0;
    const double audit_before = audits.seconds;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const int n = 4 + static_cast<int>(rng() % 253);
        Channel ch;
        try {
            ch = random_channel(n, seed);
        } catch (const Error& e) {
            o.fail(fmt("seed %llu: generator failed: %s", (unsigned long long)seed, e.what()));
            continue;
        }
        for (int q = 0; q < 10; ++q, ++queries) {
            const Point p = fixtures::random_interior_point(ch, rng);
            try {
                const auto tq = Clock::now();
                const Certificate c = query_visibility(ch, p);
                query_time += seconds_since(tq);
                worst = std::max(worst, double(c.iterations) / double(ch.n()));
                if (c.iterations > 2 * static_cast<int>(ch.n()))
                    o.fail(fmt("seed %llu n=%d: %d iterations", (unsigned long long)seed, n, c.iterations));
                audits.add(ch, p, c);
            } catch (const Error& e) {
                o.fail(fmt("seed %llu n=%d: %s", (unsigned long long)seed, n, e.what()));
            }
        }
    }
    const double total = seconds_since(t0) - (audits.seconds - audit_before);
    if (total >= 60.0) o.fail(fmt("took %.1f s", total));
    o.detail = fmt("%d queries on 1000 channels, max iterations/n %.3f, %.1f s without audits (%.1f s in queries)", queries,
                   worst, total, query_time);
    return o;
}

// Criterion 2: primitive calls grow linearly in n.
Outcome linear_scaling() {
    Outcome o;
    const std::vector<int> sizes{100, 1000, 10000};
    std::vector<double> mean;
    std::mt19937_64 rng(102);
    for (int n : sizes) {
        double sum = 0.0;
        int count = 0;
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            const Channel ch = fixtures::random_meander(n, seed);
            for (int q = 0; q < 3; ++q) {
                try {
                    sum += double(query_visibility(ch, fixtures::random_interior_point(ch, rng)).primitive_calls);
                    ++count;
                } catch (const Error& e) {
                    o.fail(fmt("n=%d seed %llu: %s", n, (unsigned long long)seed, e.what()));
                }
            }
        }
        mean.push_back(sum / std::max(count, 1));
    }
    // Fit calls = a + b n with residuals relative to the observation, so the
    // small sizes are not drowned by the large one. Growth beyond linear shows
    // up as a positive residual at the largest n (n log n gives about +13%).
    const int k = static_cast<int>(sizes.size());
    Eigen::MatrixXd A(k, 2);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) {
        A(i, 0) = sizes[i] / mean[i];
        A(i, 1) = 1.0 / mean[i];
        y(i) = 1.0;
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
    const double top = 1.0 - (coef(0) * sizes.back() + coef(1)) / mean.back();
    if (!(top < 0.05)) o.fail(fmt("superlinear residual %.4f", top));
    o.detail = fmt("mean calls/n %.2f, %.2f, %.2f at n = 1e2, 1e3, 1e4; superlinear residual %+.4f (< 0.05)",
                   mean[0] / sizes[0], mean[1] / sizes[1], mean[2] / sizes[2], top);
    return o;
}

// Naive and incremental values agree at every step of the engine's trace.
int cache_mismatches(const Channel& ch, Point p, int& steps) {
    int bad = 0;
    EngineOptions opt;
    opt.observer = [&](const EngineStep& s) {
        const DeltaProfile naive = delta_naive(s.gamma, ch);
        if (s.l >= 1 && s.entry_l != naive.entry[s.l]) ++bad;
        if (s.r >= 1 && s.entry_r != naive.entry[s.r]) ++bad;
        ++steps;
    };
    query_visibility(ch, p, opt);
    return bad;
}

// Criterion 3: delta calculus.
Outcome delta_calculus() {
    Outcome o;
    std::mt19937_64 rng(103);
    int closing = 0;
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t seed = 3000 + i;
        const Channel ch = random_channel(10, seed);
        const Point p = fixtures::random_interior_point(ch, rng);
        const ConnectingArc g = fixtures::random_connecting_arc(ch.sigma, p, rng, 0.3);
        const bool closes = g.arc.distance_to(ch.kappa.segments.back().end) <= ch.tolerances().abs();
        closing += closes;
        const int total = build_profile(g, ch).total;
        if (total != (closes ? -1 : 0)) o.fail(fmt("final value %d, kappa(1) on arc %d", total, int(closes)));
    }

    testgen::Gen gen(104);
    int table[4] = {0, 0, 0, 0};
    for (int done = 0, i = 0; done < 500; ++i) {
        const Channel ch = fixtures::random_star(gen.integer(3, 12), 5000 + i);
        std::vector<ArcSegment> loop{ch.sigma};
        loop.insert(loop.end(), ch.kappa.segments.begin(), ch.kappa.segments.end());
        const ArcSegment g = gen.arc(2.0);
        const Location l0 = point_in_channel(ch, g.start), l1 = point_in_channel(ch, g.end);
        // the table covers endpoints off the curve
        if (l0 == Location::Boundary || l1 == Location::Boundary) continue;
        const bool in0 = l0 == Location::Interior, in1 = l1 == Location::Interior;
        const int expect = in0 == in1 ? 0 : (in0 ? 2 : -2);
        try {
            const int d = delta(g, loop, true, ch.tolerances());
            if (d != expect) o.fail(fmt("closed loop: %d, expected %d", d, expect));
        } catch (const Error& e) {
            o.fail(fmt("closed loop: %s", e.what()));
        }
        ++table[2 * in0 + in1];
        ++done;
    }
    for (int c : table)
        if (c == 0) o.fail("an endpoint case of the table was never drawn");

    int steps = 0, mismatches = 0;
    for (const auto& f : fixtures::all_fixtures())
        for (const auto* pts : {&f.visible, &f.blocked})
            for (Point p : *pts) mismatches += cache_mismatches(f.channel, p, steps);
    if (mismatches) o.fail(fmt("%d cache mismatches", mismatches));
    o.detail = fmt("500 final values (%d closing), endpoint table %d/%d/%d/%d, %d traced steps with %d mismatches",
                   closing, table[0], table[1], table[2], table[3], steps, mismatches);
    return o;
}

int sign_of(Ordering o) { return o == Ordering::Less ? -1 : o == Ordering::Greater ? 1 : 0; }

// Criterion 4: order axioms and extremality.
Outcome order_axioms() {
    Outcome o;
    std::mt19937_64 rng(105);
    int triples = 0;
    for (std::uint64_t seed = 1; triples < 10000; ++seed) {
        const Channel ch = fixtures::random_star(8, seed);
        const ArcSegment& s = ch.sigma;
        const Point p = fixtures::random_interior_point(ch, rng);
        for (int k = 0; k < 100; ++k, ++triples) {
            const ConnectingArc a = fixtures::random_connecting_arc(s, p, rng);
            const ConnectingArc b = fixtures::random_connecting_arc(s, p, rng);
            const ConnectingArc c = fixtures::random_connecting_arc(s, p, rng);
            try {
                auto cmp = [&](const ConnectingArc& x, const ConnectingArc& y) {
                    return sign_of(compare(s, x, y).order);
                };
                const int ab = cmp(a, b), ba = cmp(b, a), bc = cmp(b, c), ac = cmp(a, c);
                if (cmp(a, a) != 0) o.fail("not reflexive");
                if (ab != -ba) o.fail("not antisymmetric");
                if ((ab <= 0 && bc <= 0 && ac > 0) || (ab >= 0 && bc >= 0 && ac < 0)) o.fail("not transitive");
            } catch (const Error& e) {
                o.fail(fmt("incomparable pair: %s", e.what()));
            }
        }
    }
    int sampled = 0;
    for (const auto& f : fixtures::all_fixtures()) {
        const Channel& ch = f.channel;
        std::vector<Point> pts = f.visible;
        pts.insert(pts.end(), f.blocked.begin(), f.blocked.end());
        const int per_point = (10000 + static_cast<int>(pts.size()) - 1) / static_cast<int>(pts.size());
        for (Point p : pts) {
            const ConnectingArc mx = max_connecting_arc(ch, p, default_cap(ch));
            const ConnectingArc mn = min_connecting_arc(ch, p, default_cap(ch));
            for (int k = 0; k < per_point; ++k, ++sampled) {
                const ConnectingArc g = fixtures::random_connecting_arc(ch.sigma, p, rng);
                if (compare(ch.sigma, g, mx).order == Ordering::Greater) o.fail(f.name + ": sample above max");
                if (compare(ch.sigma, g, mn).order == Ordering::Less) o.fail(f.name + ": sample below min");
            }
        }
    }
    o.detail = fmt("%d triples, %d samples against extremal arcs", triples, sampled);
    return o;
}

struct Agreement {
    int queries = 0, unknown = 0, contradictions = 0, errors = 0;
};

void agree(const Channel& ch, Point p, Agreement& a, Outcome& o, Audits& audits, const std::string& what) {
    ++a.queries;
    try {
        const Certificate c = query_visibility(ch, p);
        audits.add(ch, p, c);
        const OracleVerdict v = oracle_visible(ch, p).verdict;
        if (v == OracleVerdict::Unknown) {
            ++a.unknown;
        } else if ((v == OracleVerdict::DefinitelyVisible) != c.visible) {
            ++a.contradictions;
            o.fail(fmt("%s (%.6g, %.6g): engine %s, oracle %s", what.c_str(), p.x, p.y,
                       c.visible ? "visible" : "blocked", to_string(v)));
        }
    } catch (const Error& e) {
        ++a.errors;
        o.fail(what + ": " + e.what());
    }
}

// Criterion 5: engine against the brute-force oracle.
Outcome oracle_agreement(Audits& audits) {
    Outcome o;
    Agreement fx, rnd;
    std::vector<fixtures::Fixture> suite = fixtures::all_fixtures();
    // convex family: the square with near-straight and visibly bent sides
    suite.push_back({"square-bent", fixtures::polygon_channel({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.0, 0.1, 0.1, 0.1}),
                     {{0.5, 0.5}, {0.95, 0.5}, {0.5, 1.02}}, {}});
    suite.push_back({"square-flat", fixtures::near_straight(fixtures::unit_square().channel, 1e-10),
                     fixtures::unit_square().visible, {}});
    for (const auto& f : suite) {
        for (Point p : f.visible) agree(f.channel, p, fx, o, audits, f.name);
        for (Point p : f.blocked) agree(f.channel, p, fx, o, audits, f.name);
    }
    std::mt19937_64 rng(106);
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Channel ch = random_channel(4 + static_cast<int>(seed % 9), seed);
        for (int q = 0; q < 3; ++q) agree(ch, fixtures::random_interior_point(ch, rng), rnd, o, audits, "random");
    }
    const double rate = double(rnd.unknown) / rnd.queries;
    if (rate >= 0.10) o.fail(fmt("oracle unknown rate %.3f", rate));
    o.detail = fmt("fixtures %d queries (%d unknown), random %d queries (%d unknown, rate %.3f), %d contradictions",
                   fx.queries, fx.unknown, rnd.queries, rnd.unknown, rate, fx.contradictions + rnd.contradictions);
    return o;
}

// Criterion 6: every certificate produced by the other runs is re-audited.
Outcome certificate_audits(const Audits& audits) {
    Outcome o = audits.outcome;
    o.detail = fmt("%d visible arcs and %d blocking sequences re-audited", audits.visible, audits.blocked);
    return o;
}

// Criterion 7: perturbations of the many-contact channel.
Outcome perturbation_stability(Audits& audits) {
    Outcome o;
    const auto f = fixtures::critical();
    int visible = 0, worst = 0;
    for (int s = 0; s < 100; ++s) {
        const double mag = std::pow(10.0, -9.0 + 6.0 * s / 99.0) * f.channel.diameter;
        try {
            const Channel ch = fixtures::perturb(f.channel, mag, 7000 + s);
            for (Point p : f.visible) {
                const Certificate c = query_visibility(ch, p);
                audits.add(ch, p, c);
                worst = std::max(worst, c.iterations);
                if (c.iterations > 2 * static_cast<int>(ch.n())) o.fail(fmt("seed %d: %d iterations", s, c.iterations));
                if (c.visible)
                    ++visible;
                else
                    o.fail(fmt("seed %d magnitude %.3g: blocked", s, mag));
            }
        } catch (const Error& e) {
            o.fail(fmt("seed %d magnitude %.3g: %s", s, mag, e.what()));
        }
    }
    o.detail = fmt("%d/100 perturbations (1e-9 to 1e-3 x diameter) visible, max %d iterations for n = %zu", visible,
                   worst, f.channel.n());
    return o;
}

// Criterion 8: the fixture and random suites on near-straight channels.
Outcome near_straight_suite() {
    Outcome o;
    constexpr double kFlat = 1e-10;
    int labelled = 0, steps = 0, rejected = 0;
    Audits audits;
    Agreement ag;
    for (const auto& f : fixtures::all_fixtures()) {
        Channel ch;
        try {
            ch = fixtures::near_straight(f.channel, kFlat);
        } catch (const Error& e) {
            // curved fixtures whose chords cross are no longer channels
            if (e.kind() != ErrorKind::SelfIntersecting) o.fail(f.name + ": " + e.what());
            ++rejected;
            continue;
        }
        for (int want_visible = 1; want_visible >= 0; --want_visible)
            for (Point p : want_visible ? f.visible : f.blocked) {
                try {
                    const Certificate c = query_visibility(ch, p);
                    ++labelled;
                    if (c.visible != bool(want_visible)) o.fail(f.name + ": label changed");
                    if (c.iterations > 2 * static_cast<int>(ch.n())) o.fail(f.name + ": iteration bound");
                    const std::string why = audit(ch, p, c);
                    if (!why.empty()) o.fail(f.name + ": " + why);
                    if (cache_mismatches(ch, p, steps)) o.fail(f.name + ": cache mismatch");
                } catch (const Error& e) {
                    o.fail(f.name + ": " + e.what());
                }
                agree(ch, p, ag, o, audits, f.name + "-flat");
            }
    }
    std::mt19937_64 rng(108);
    int random_queries = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const int n = 4 + static_cast<int>(seed % 60);
        Channel ch;
        try {
            ch = fixtures::near_straight(random_channel(n, seed), kFlat);
        } catch (const Error& e) {
            o.fail(fmt("random seed %llu: %s", (unsigned long long)seed, e.what()));
            continue;
        }
        for (int q = 0; q < 3; ++q, ++random_queries) {
            const Point p = fixtures::random_interior_point(ch, rng);
            if (n <= 12) {
                agree(ch, p, ag, o, audits, "random-flat");
                continue;
            }
            try {
                const Certificate c = query_visibility(ch, p);
                if (c.iterations > 2 * static_cast<int>(ch.n())) o.fail("random-flat: iteration bound");
                const std::string why = audit(ch, p, c);
                if (!why.empty()) o.fail("random-flat: " + why);
            } catch (const Error& e) {
                o.fail(std::string("random-flat: ") + e.what());
            }
        }
    }
    for (const auto& f : audits.outcome.failures) o.fail("flat audit: " + f);
    if (!audits.outcome.pass) o.pass = false;
    o.detail = fmt("%d labelled fixture queries (%d traced steps), %d fixtures rejected as self-intersecting, "
                   "%d random queries, oracle %d/%d unknown, %d contradictions",
                   labelled, steps, rejected, random_queries, ag.unknown, ag.queries, ag.contradictions);
    return o;
}

}  // namespace

int main() {
    Audits audits;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"iteration bound", [&] { return iteration_bound(audits); }},
        {"linear scaling", linear_scaling},
        {"delta calculus", delta_calculus},
        {"order axioms", order_axioms},
        {"oracle agreement", [&] { return oracle_agreement(audits); }},
        {"perturbation stability", [&] { return perturbation_stability(audits); }},
        {"certificate audits", [&] { return certificate_audits(audits); }},
        {"near-straight suites", near_straight_suite},
    };
    // criterion 6 audits the certificates of the others, so it runs late;
    // lines are printed in criterion order
    const int number[] = {1, 2, 3, 4, 5, 7, 6, 8};
    std::vector<std::string> lines(criteria.size() + 1);
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        const Outcome o = criteria[i].second();
        all = all && o.pass;
        std::string& line = lines[number[i]];
        line = fmt("criterion %d %-24s %s  ", number[i], criteria[i].first, o.pass ? "PASS" : "FAIL") + o.detail +
               fmt(" [%.1f s]\n", seconds_since(t0));
        for (const auto& f : o.failures) line += "    " + f + "\n";
    }
    for (const auto& line : lines) std::fputs(line.c_str(), stdout);
    return all ? 0 : 1;
}

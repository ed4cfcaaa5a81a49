#include "cvis/apollonius.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

namespace cvis {

Support Support::of(const ArcSegment& arc, Point origin) {
    const double phi = arc.sweep();
    const Point tau0 = rotate(unit(arc.chord()), -0.5 * phi);
    const Point n0 = rot90(tau0);
    const double k = arc.curvature();
    const Point d = arc.start - origin;
    Support s;
    s.origin = origin;
    s.a = 0.5 * k;
    s.b = -(k * d) - n0;
    s.c = 0.5 * k * dot(d, d) + dot(n0, d);
    return s;
}

Support Support::moved_to(Point o) const {
    Support s = *this;
    const Point d = o - origin;
    s.origin = o;
    s.b = b + 2.0 * a * d;
    s.c = value(o);
    return s;
}

double Support::value(Point x) const {
    const Point d = x - origin;
    return a * dot(d, d) + dot(b, d) + c;
}

Point Support::gradient(Point x) const { return 2.0 * a * (x - origin) + b; }

double Support::radius() const {
    return a == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 / std::abs(a);
}

Point Support::center() const { return origin - (0.5 / a) * b; }

Point Support::tangent_at(Point x) const {
    const Point n = -unit(gradient(x));
    return {n.y, -n.x};
}

double inversive_product(const Support& s, const Support& t) {
    const Support u = t.moved_to(s.origin);
    return dot(s.b, u.b) - 2.0 * (s.a * u.c + u.a * s.c);
}

namespace {

struct Row {
    Eigen::Vector3d coef;
    double rhs;
    bool tangent;
};

// Row in the scaled unknowns (a * h, bx, by) for supports through the origin.
Row row_for(const SupportConstraint& con, Point origin, double h) {
    if (const auto* th = std::get_if<Through>(&con)) {
        const Point d = th->q - origin;
        const double len = norm(d);
        if (len == 0.0) return {Eigen::Vector3d::Zero(), 0.0, false};
        return {Eigen::Vector3d(len / h, d.x / len, d.y / len), 0.0, false};
    }
    const Support k = Support::of(std::get<TangentTo>(con).seg, origin);
    return {Eigen::Vector3d(-2.0 * k.c / h, k.b.x, k.b.y), 1.0, true};
}

}  // namespace

std::vector<Support> apollonius_arcs(Point p, const SupportConstraint& first,
                                     const SupportConstraint& second, double cap,
                                     const Tolerances& tol) {
    count_primitive();
    const double h = tol.scale;
    const Row r1 = row_for(first, p, h);
    const Row r2 = row_for(second, p, h);

    Eigen::Matrix<double, 2, 3> M;
    M.row(0) = r1.coef.transpose();
    M.row(1) = r2.coef.transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(1) <= tol.eps_geom * sv(0))
        throw Error(ErrorKind::IllConditioned, "constraint system is rank deficient");
    const Eigen::Vector3d null = svd.matrixV().col(2);

    // tangency signs up to a global flip of the solution's orientation
    std::vector<std::pair<double, double>> signs;
    if (r1.tangent && r2.tangent)
        signs = {{1.0, 1.0}, {1.0, -1.0}};
    else
        signs = {{1.0, 1.0}};

    std::vector<Support> out;
    auto push = [&](const Eigen::Vector3d& x) {
        Support s;
        s.origin = p;
        s.a = x(0) / h;
        s.b = {x(1), x(2)};
        s.c = 0.0;
        const double r = s.radius();
        if (r > cap) {
            // numerically straight solutions are kept as exact lines
            if (r < 1e6 * cap) return;
            s.a = 0.0;
            s.b = unit(s.b);
        }
        for (const auto& o : out) {
            const double same = std::abs(o.a - s.a) * h + norm(o.b - s.b);
            const double flip = std::abs(o.a + s.a) * h + norm(o.b + s.b);
            if (std::min(same, flip) <= 1e-9) return;
        }
        out.push_back(s);
    };

    for (auto [e1, e2] : signs) {
        Eigen::Vector2d rhs(r1.rhs * e1, r2.rhs * e2);
        const Eigen::Vector3d x0 = svd.solve(rhs);
        // |b(lambda)|^2 = 1 along x0 + lambda * null
        const double qa = null(1) * null(1) + null(2) * null(2);
        const double qb = 2.0 * (x0(1) * null(1) + x0(2) * null(2));
        const double qc = x0(1) * x0(1) + x0(2) * x0(2) - 1.0;
        if (qa <= 1e-24) {
            if (std::abs(qc) <= tol.eps_geom)
                throw Error(ErrorKind::IllConditioned, "one-parameter family of solutions");
            continue;
        }
        double disc = qb * qb - 4.0 * qa * qc;
        // near-double roots are a single tangency split by rounding
        const double mag = qb * qb + std::abs(4.0 * qa * qc);
        if (disc < -1e-12 * mag) continue;
        if (disc < 1e-12 * mag) disc = 0.0;
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
        std::vector<double> roots;
        if (qq != 0.0) {
            roots.push_back(qq / qa);
            roots.push_back(qc / qq);
        } else {
            roots.push_back(0.0);
        }
        for (double lam : roots) push(x0 + lam * null);
    }

    std::sort(out.begin(), out.end(),
              [](const Support& x, const Support& y) { return x.radius() < y.radius(); });
    return out;
}

ArcSegment arc_from_support(const Support& s, Point start, Point end) {
    const Point tau = s.tangent_at(start);
    return arc_with_tangent(Direction{tau.x, tau.y}, start, end, TangentAt::Start);
}

}  // namespace cvis

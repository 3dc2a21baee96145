// Cycle integrals of J_m over the reduction cycle of an indefinite form.

#include "modlift/modfun.hpp"
#include "modlift/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace modlift::modfun {

using std::numbers::pi;
using qforms::Mat2;
using qforms::QuadForm;

namespace {

constexpr double kHoroHeight = 1.0;
constexpr double kSampleStep = 0.05;

// Points of the geodesic of f, parametrized by hyperbolic arclength s.
struct Arc {
    QuadForm f;
    double wp, wm;
    double kappa;  // dz / f(z, 1) = kappa ds

    explicit Arc(const QuadForm& g) : f(g) {
        double sd = std::sqrt(double(g.disc()));
        double r1 = (-g.b + sd) / (2.0 * g.a), r2 = (-g.b - sd) / (2.0 * g.a);
        wp = std::max(r1, r2);
        wm = std::min(r1, r2);
        kappa = -1.0 / (double(g.a) * (wp - wm));
    }
    cplx at(double s) const {
        cplx tau(0, std::exp(s));
        return (wp * tau + wm) / (tau + 1.0);
    }
    double param(cplx z) const { return std::log(std::abs(z - wm) / std::abs(z - wp)); }
};

struct Cusp {
    arith::Int num = 1, den = 0;  // gamma^{-1} infinity
    bool operator==(const Cusp&) const = default;
};

Cusp cusp_of(const Mat2& g) {
    // g^{-1} = [[s, -q], [-r, p]] sends infinity to -s/r... as a fraction s/(-r)
    arith::Int n = g.s, d = -g.r;
    if (d < 0 || (d == 0 && n < 0)) {
        n = -n;
        d = -d;
    }
    if (d == 0) return {1, 0};
    arith::Int gg = arith::gcd(std::abs(n), d);
    return {n / gg, d / gg};
}

struct Sample {
    double s;
    bool high;
    Cusp cusp;
    Mat2 gamma;
};

Sample sample(const Arc& arc, double s) {
    ModularPoint p = reduce_point(arc.at(s));
    bool high = p.z.imag() > kHoroHeight;
    return {s, high, high ? cusp_of(p.gamma) : Cusp{}, p.gamma};
}

// Crossing of Im(gamma z(s)) = 1 between s_in (inside the horoball) and s_out.
double crossing(const Arc& arc, const Mat2& gamma, double s_in, double s_out) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (s_in + s_out);
        if (mid == s_in || mid == s_out) break;
        if (gamma.act(arc.at(mid)).imag() > kHoroHeight) s_in = mid;
        else s_out = mid;
    }
    return 0.5 * (s_in + s_out);
}

// int_{u0}^{u0 - i inf} e(-m u) du / Qp(u)
cplx vertical(int m, cplx u0, const std::function<cplx(cplx)>& qp) {
    auto f = [&](double t) { return std::exp(-2 * pi * m * t) / qp(u0 - cplx(0, t)); };
    double tmax = 50.0 / (2 * pi * m);
    auto r = quad::integrate_or_throw(f, 0.0, tmax, quad::Options{0.0, 1e-15, 2000}, "vertical integral");
    return cplx(0, -1) * std::exp(cplx(0, -2 * pi * m) * u0) * r.value;
}

struct Piece {
    double a, b;
    bool high;
    Mat2 gamma;
    bool open_start, open_end;  // endpoint is a segment boundary inside a horoball
};

}  // namespace

Value faber_cycle_integral(int m, const QuadForm& q0, double tol, int order) {
    if (m < 0) throw std::invalid_argument("faber_cycle_integral: m must be >= 0");
    const auto d = q0.disc();
    if (d <= 0 || arith::is_square(d)) throw std::invalid_argument("faber_cycle_integral: needs positive nonsquare discriminant");
    auto series = faber(m, order);
    const QuadForm start = qforms::reduce_indefinite(q0).form;
    const auto cycle = qforms::reduce_cycle(start);
    const std::size_t k = cycle.size();

    // Segment i: on the geodesic of Q_i from i sqrt(-c/a) to sigma_i(i sqrt(-c'/a')).
    std::vector<Piece> pieces;
    std::vector<std::size_t> owner;
    std::vector<Arc> arcs;
    arcs.reserve(k);
    double one_total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const QuadForm& qi = cycle[i];
        const QuadForm& qn = cycle[(i + 1) % k];
        Mat2 sigma = qforms::rho_step(qi);
        arcs.emplace_back(qi);
        const Arc& arc = arcs.back();
        cplx p0(0, std::sqrt(-double(qi.c) / double(qi.a)));
        cplx p1 = sigma.act(cplx(0, std::sqrt(-double(qn.c) / double(qn.a))));
        double sa = arc.param(p0), sb = arc.param(p1);
        one_total += arc.kappa * (sb - sa);

        int nsteps = std::max(2, static_cast<int>(std::ceil(std::abs(sb - sa) / kSampleStep)));
        std::vector<Sample> smp;
        for (int j = 0; j <= nsteps; ++j) smp.push_back(sample(arc, sa + (sb - sa) * j / nsteps));

        // p = iy reduces to height max(y, 1/y); strictly inside a horoball the
        // boundary terms of adjacent pieces cancel and are skipped on both sides
        auto inside = [](const QuadForm& g) {
            double y = std::sqrt(-double(g.c) / double(g.a));
            return std::max(y, 1.0 / y) > kHoroHeight + 1e-9;
        };
        const bool open_a = inside(qi), open_b = inside(qn);
        if ((open_a && !smp.front().high) || (open_b && !smp.back().high))
            throw std::logic_error("faber_cycle_integral: inconsistent horoball classification");
        double cur = sa;
        Sample head = smp[0];
        bool open_start = open_a;
        for (int j = 1; j <= nsteps; ++j) {
            const Sample& nx = smp[j];
            bool same = (nx.high == head.high) && (!nx.high || nx.cusp == head.cusp);
            if (same) continue;
            const Sample& prev = smp[j - 1];
            if (head.high && nx.high) {
                // two horoballs, a low gap between them
                double exit = crossing(arc, head.gamma, prev.s, nx.s);
                double entry = crossing(arc, nx.gamma, nx.s, prev.s);
                pieces.push_back({cur, exit, true, head.gamma, open_start, false});
                pieces.push_back({exit, entry, false, {}, false, false});
                cur = entry;
            } else if (head.high) {
                double exit = crossing(arc, head.gamma, prev.s, nx.s);
                pieces.push_back({cur, exit, true, head.gamma, open_start, false});
                cur = exit;
            } else {
                double entry = crossing(arc, nx.gamma, nx.s, prev.s);
                pieces.push_back({cur, entry, false, {}, false, false});
                cur = entry;
            }
            open_start = false;
            head = nx;
        }
        pieces.push_back({cur, sb, head.high, head.gamma, open_start, open_b});
        owner.resize(pieces.size(), i);
    }

    const double period = 2.0 * arith::pell_minimal(start.primitive_part().disc()).log_epsilon / std::sqrt(double(d));
    if (std::abs(std::abs(one_total) - period) > 1e-8 * period)
        throw std::runtime_error("faber_cycle_integral: reduction cycle does not close up to one period");
    const double orient = one_total > 0 ? 1.0 : -1.0;

    cplx total = 0;
    double err = 0;
    const double piece_tol = tol / (4.0 * double(pieces.size()));
    for (std::size_t pi_ = 0; pi_ < pieces.size(); ++pi_) {
        const Piece& pc = pieces[pi_];
        const Arc& arc = arcs[owner[pi_]];
        if (pc.a == pc.b) continue;
        if (m == 0) {
            total += arc.kappa * (pc.b - pc.a);
            continue;
        }
        // integrand size is at most about e^{2 pi m} on these pieces
        const double floor_tol = 1e-14 * std::exp(2 * pi * m) * std::abs(pc.b - pc.a);
        quad::Options opt{std::max(piece_tol / std::abs(arc.kappa), floor_tol), 1e-15, 4000};
        if (!pc.high) {
            auto f = [&](double s) { return series->eval(reduce_point(arc.at(s)).z); };
            auto r = quad::integrate(f, pc.a, pc.b, opt);
            if (!r.converged) throw quad::NonConvergence("faber_cycle_integral", r.error);
            total += arc.kappa * r.value;
            err += std::abs(arc.kappa) * r.error;
            continue;
        }
        const Mat2 g = pc.gamma;
        auto f = [&](double s) { return series->eval(g.act(arc.at(s)), 1); };
        auto r = quad::integrate(f, pc.a, pc.b, opt);
        if (!r.converged) throw quad::NonConvergence("faber_cycle_integral", r.error);
        total += arc.kappa * r.value;
        err += std::abs(arc.kappa) * r.error;
        // principal part: int e(-m u) du / Q'(u), Q'(u) = Q(g^{-1} u) (c u + d)^2
        const Mat2 gi = g.inverse();
        const QuadForm& f0 = arc.f;
        auto qp = [&](cplx u) {
            cplx X = double(gi.p) * u + double(gi.q), Y = double(gi.r) * u + double(gi.s);
            return double(f0.a) * X * X + double(f0.b) * X * Y + double(f0.c) * Y * Y;
        };
        if (!pc.open_start) total += vertical(m, g.act(arc.at(pc.a)), qp);
        if (!pc.open_end) total -= vertical(m, g.act(arc.at(pc.b)), qp);
    }
    err += series->tail_bound(std::sqrt(3.0) / 2) * period;
    return {orient * total, err};
}

}  // namespace modlift::modfun

#include "polystab/quadfit.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace polystab {

GridSpec::GridSpec(double start_, double stop_, int points_)
    : start(start_), stop(stop_), points(points_) {
    if (!(start > 0.0) || !(stop > start) || points < 3)
        throw DomainError("GridSpec: need 0 < start < stop and points >= 3");
}

std::vector<double> GridSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    const double ratio = std::log(stop / start);
    for (int i = 0; i < points; ++i)
        v[static_cast<std::size_t>(i)] =
            start * std::exp(ratio * static_cast<double>(i) / (points - 1));
    v.front() = start;
    v.back() = stop;
    return v;
}

std::vector<long> GridSpec::integer_values() const {
    std::vector<long> out;
    for (double x : values()) {
        long n = std::lround(x);
        if (n < 1) n = 1;
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

double DecayFit::predict(double a) const {
    return std::exp(log_constant + exponent * std::log(a));
}

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
constexpr double kNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
constexpr double kWeightK[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kWeightG[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = kWeightK[0] * f0;
    double g = kWeightG[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kNodes[i];
        const double fi = f(c + dx) + f(c - dx);
        k += kWeightK[i] * fi;
        if (i % 2 == 0) g += kWeightG[i / 2] * fi;
    }
    k *= h;
    g *= h;
    const double diff = std::fabs(k - g);
    return {a, b, k, std::max(diff, std::fabs(k) * 1e-15)};
}

// One finite piece of a (possibly transformed) integral.
struct Piece {
    std::function<double(double)> f;
    double a, b;
};

QuadResult adaptive_pieces(std::vector<Piece> pieces, double tol) {
    constexpr double kAbsFloor = 1e-14;
    constexpr int kMaxSegments = 60000;

    // segments tagged by piece index
    struct Tagged : Segment {
        std::size_t piece;
    };
    auto cmp = [](const Tagged& x, const Tagged& y) { return x.error < y.error; };
    std::priority_queue<Tagged, std::vector<Tagged>, decltype(cmp)> heap(cmp);

    double total = 0.0, toterr = 0.0;
    int nseg = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Segment s = gk15(pieces[i].f, pieces[i].a, pieces[i].b);
        total += s.value;
        toterr += s.error;
        heap.push({{s.a, s.b, s.value, s.error}, i});
        ++nseg;
    }

    while (toterr > std::max(tol * std::fabs(total), kAbsFloor)) {
        if (nseg >= kMaxSegments || heap.empty())
            throw NoConvergence("adaptive_quad: subdivision budget exhausted");
        Tagged worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at machine resolution; keep its contribution as is
            continue;
        }
        const auto& f = pieces[worst.piece].f;
        Segment l = gk15(f, worst.a, mid);
        Segment r = gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        toterr += l.error + r.error - worst.error;
        heap.push({{l.a, l.b, l.value, l.error}, worst.piece});
        heap.push({{r.a, r.b, r.value, r.error}, worst.piece});
        ++nseg;
    }
    return {total, toterr};
}

} // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         double tol, const std::vector<double>& breakpoints) {
    if (std::isnan(a) || std::isnan(b) || !(a < b))
        throw DomainError("adaptive_quad: need a < b");
    if (tol <= 0.0) tol = 1e-10;

    const bool inf_lo = std::isinf(a);
    const bool inf_hi = std::isinf(b);

    // Finite core interval; infinite directions folded by u = 1/t past a cut.
    double lo = a, hi = b;
    std::vector<Piece> pieces;
    if (inf_lo) {
        lo = std::min(-10.0, inf_hi ? -10.0 : b - 10.0);
        pieces.push_back({[f, lo](double u) { return f(1.0 / u) / (u * u); },
                          1.0 / lo, 0.0});  // u in (1/lo, 0), lo < 0
    }
    if (inf_hi) {
        hi = std::max(10.0, inf_lo ? 10.0 : a + 10.0);
        if (!inf_lo && a > 0.0) hi = std::max(hi, 2.0 * a);
        pieces.push_back({[f, hi](double u) { return f(1.0 / u) / (u * u); },
                          0.0, 1.0 / hi});
    }

    // core, split at caller breakpoints
    std::vector<double> cuts;
    for (double x : breakpoints)
        if (x > lo && x < hi) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    double prev = lo;
    for (double x : cuts) {
        if (x > prev) pieces.push_back({f, prev, x});
        prev = x;
    }
    pieces.push_back({f, prev, hi});

    return adaptive_pieces(std::move(pieces), tol);
}

DecayFit loglog_fit(const std::vector<std::pair<double, double>>& points,
                    std::pair<double, double> window) {
    std::vector<std::pair<double, double>> sel;
    for (const auto& [x, y] : points) {
        if (x < window.first || x > window.second) continue;
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(y))
            throw DegenerateWindow("loglog_fit: nonpositive or nonfinite value in window");
        sel.emplace_back(std::log(x), std::log(y));
    }
    if (sel.size() < 3)
        throw DegenerateWindow("loglog_fit: fewer than 3 points in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [lx, ly] : sel) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double n = static_cast<double>(sel.size());
    const double den = n * sxx - sx * sx;
    if (std::fabs(den) < 1e-14 * n * sxx)
        throw DegenerateWindow("loglog_fit: degenerate abscissae");
    DecayFit fit;
    fit.exponent = (n * sxy - sx * sy) / den;
    fit.log_constant = (sy - fit.exponent * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [lx, ly] : sel) {
        const double r = ly - (fit.log_constant + fit.exponent * lx);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    fit.window_min = std::exp(sel.front().first);
    fit.window_max = std::exp(sel.back().first);
    for (const auto& [lx, ly] : sel) {
        fit.window_min = std::min(fit.window_min, std::exp(lx));
        fit.window_max = std::max(fit.window_max, std::exp(lx));
    }
    return fit;
}

DecayFit loglog_fit_tail(const std::vector<std::pair<double, double>>& points,
                         double drop_fraction) {
    if (points.empty()) throw DegenerateWindow("loglog_fit_tail: empty series");
    double lo = points.front().first, hi = points.front().first;
    for (const auto& [x, _] : points) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    // geometric drop of the leading transient
    const double cut = lo * std::pow(hi / lo, drop_fraction);
    return loglog_fit(points, {cut, hi});
}

double h_gamma(double gamma, double xi) {
    if (!(gamma > 0.0) || gamma > 0.5)
        throw DomainError("h_gamma: gamma must lie in (0, 1/2]");
    if (!(xi > 0.0) || !(xi < 1.0))
        throw DomainError("h_gamma: xi must lie in (0, 1)");
    if (gamma == 0.5) return 1.0 / std::log(1.0 / xi);
    return std::pow(xi, 1.0 - 2.0 * gamma);
}

double gamma_function(double s) {
    if (!(s > 0.0) || !(s < 1.0))
        throw DomainError("gamma_function: argument must lie in (0, 1)");
    return std::tgamma(s);
}

BoundCheck gautschi_bound_check(double tau) {
    if (!(tau > 0.0)) throw DomainError("gautschi_bound_check: tau must be positive");
    BoundCheck c;
    c.lhs = adaptive_quad([](double t) { return std::exp(-t) / t; }, tau, kInf, 1e-11).value;
    c.rhs = std::exp(-tau) * std::log1p(1.0 / tau);
    c.holds = c.lhs <= c.rhs + 1e-12;
    return c;
}

} // namespace polystab

#include "momentlab/quadrature.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace momentlab::quad {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7], g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        const double s = f(c - x) + f(c + x);
        k += wgk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, const std::vector<double>& breaks, const Options& opt) {
    Result r;
    if (breaks.size() < 2) return r;
    std::priority_queue<Piece> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Piece p = rule(f, breaks[i], breaks[i + 1]);
        r.evaluations += 15;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (err > target() && static_cast<int>(heap.size()) < opt.max_intervals && !heap.empty()) {
        Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            heap.push(p);
            break;
        }
        Piece l = rule(f, p.a, m), h = rule(f, m, p.b);
        r.evaluations += 30;
        total += l.value + h.value - p.value;
        err += l.error + h.error - p.error;
        heap.push(l);
        heap.push(h);
    }
    // resum to shed accumulated drift
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    r.value = total;
    r.error = err;
    r.converged = err <= target();
    return r;
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, const Options& opt) {
    return gauss_kronrod(f, std::vector<double>{a, b}, opt);
}

Result integrate(const std::function<double(double)>& f, const std::vector<double>& breaks, const Options& opt) {
    Result r = gauss_kronrod(f, breaks, opt);
    if (!r.converged) {
        std::ostringstream os;
        os << "quadrature did not converge: achieved error " << r.error << " against tolerance "
           << std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
        throw QuadratureError(os.str(), r);
    }
    return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt) {
    return integrate(f, std::vector<double>{a, b}, opt);
}

}  // namespace momentlab::quad

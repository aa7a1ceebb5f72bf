#include "decotime/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string>

#include "decotime/errors.hpp"

namespace decotime::numerics {

namespace {

// Kronrod abscissae; odd entries are the 10-point Gauss nodes.
constexpr double kXgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                             0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                             0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                             0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                             0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                             0.0};
constexpr double kWgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                             0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                             0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                             0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
                             0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                             0.149445554002916905664936468389821};
constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                           0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                           0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
    double a;
    double b;
    QuadResult r;
    bool operator<(const Panel& o) const { return r.abs_error < o.r.abs_error; }
};

double tolerance(double abs_tol, double rel_tol, double value) {
    return std::max(abs_tol, rel_tol * std::abs(value));
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "quadrature tolerances must be positive");
    }
    if (!(cutoff_multiplier >= 10.0)) {
        throw Error(ErrorCode::InvalidParameter, "quadrature cutoff multiplier must be >= 10");
    }
    if (max_subdivisions < 1) {
        throw Error(ErrorCode::InvalidParameter, "quadrature needs at least one subdivision");
    }
}

QuadratureConfig QuadratureConfig::from_environment() { return from_environment(QuadratureConfig{}); }

QuadratureConfig QuadratureConfig::from_environment(QuadratureConfig base) {
    if (const char* env = std::getenv("DECOTIME_QUAD_TOL"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::ConfigError, std::string("DECOTIME_QUAD_TOL is not a positive number: ") + env);
        }
        base.abs_tol = v;
    }
    return base;
}

QuadResult gauss_kronrod21(const Integrand& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    double fv1[10];
    double fv2[10];
    const double fc = f(centre);
    double res_gauss = 0.0;
    double res_kronrod = fc * kWgk[10];
    double res_abs = std::abs(res_kronrod);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += kWgk[j] * (f1 + f2);
        res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) {
            res_gauss += kWg[j / 2] * (f1 + f2);
        }
    }
    const double mean = res_kronrod * 0.5;
    double res_asc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }

    QuadResult out;
    out.value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > kTiny / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * res_abs, err);
    }
    out.abs_error = err;
    out.evaluations = 21;
    out.intervals = 1;
    if (!std::isfinite(out.value) || !std::isfinite(out.abs_error)) {
        throw Error(ErrorCode::QuadratureFailure, "integrand is not finite on [" + std::to_string(a) + ", " +
                                                      std::to_string(b) + "]");
    }
    return out;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                              int max_subdivisions) {
    if (a == b) {
        return {};
    }
    std::priority_queue<Panel> heap;
    QuadResult first = gauss_kronrod21(f, a, b);
    double total = first.value;
    double total_err = first.abs_error;
    int evaluations = first.evaluations;
    heap.push({a, b, first});

    while (total_err > tolerance(abs_tol, rel_tol, total)) {
        if (static_cast<int>(heap.size()) >= max_subdivisions) {
            throw Error(ErrorCode::QuadratureFailure,
                        "subdivision limit reached with error " + std::to_string(total_err));
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) <= 100.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            throw Error(ErrorCode::QuadratureFailure, "interval too small near " + std::to_string(mid) +
                                                          " (roundoff limits accuracy)");
        }
        const QuadResult left = gauss_kronrod21(f, worst.a, mid);
        const QuadResult right = gauss_kronrod21(f, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.r.value;
        total_err += left.abs_error + right.abs_error - worst.r.abs_error;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});

        // re-sum occasionally so running updates do not accumulate drift
        if (heap.size() % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().r.value;
                total_err += copy.top().r.abs_error;
                copy.pop();
            }
        }
    }

    QuadResult out;
    out.evaluations = evaluations;
    out.intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        out.value += heap.top().r.value;
        out.abs_error += heap.top().r.abs_error;
        heap.pop();
    }
    return out;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
    return integrate_adaptive(f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
}

double WynnEpsilon::add(double partial_sum) {
    std::vector<double> next;
    next.reserve(std::min(count_ + 1, max_depth_ + 1));
    next.push_back(partial_sum);
    const std::size_t depth = std::min(count_, max_depth_);
    for (std::size_t j = 1; j <= depth; ++j) {
        if (j - 1 >= diag_.size()) {
            break;
        }
        const double diff = next[j - 1] - diag_[j - 1];
        if (std::abs(diff) <= kTiny || !std::isfinite(diff)) {
            break;
        }
        const double aux = j >= 2 ? diag_[j - 2] : 0.0;
        next.push_back(aux + 1.0 / diff);
    }
    diag_ = std::move(next);
    ++count_;
    const std::size_t best = (diag_.size() - 1) & ~std::size_t{1};
    return diag_[best];
}

QuadResult integrate_oscillatory(const Integrand& f, double a, double b, double half_period,
                                 const QuadratureConfig& cfg) {
    if (!(half_period > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "oscillatory quadrature needs a positive half period");
    }
    const double length = b - a;
    if (length <= 0.0) {
        return {};
    }
    const auto n_panels = static_cast<long>(std::ceil(length / half_period));

    QuadResult out;
    WynnEpsilon wynn;
    double partial = 0.0;
    double panel_err = 0.0;
    double last_estimate = 0.0;
    int stable = 0;
    constexpr int kMinPanels = 8;
    constexpr int kStableRuns = 3;

    for (long k = 0; k < n_panels; ++k) {
        const double lo = a + static_cast<double>(k) * half_period;
        const double hi = std::min(b, lo + half_period);
        const double share = (hi - lo) / length;
        const QuadResult r = integrate_adaptive(f, lo, hi, cfg.abs_tol * share, cfg.rel_tol, cfg.max_subdivisions);
        partial += r.value;
        panel_err += r.abs_error;
        out.evaluations += r.evaluations;
        out.intervals += r.intervals;

        const double estimate = wynn.add(partial);
        const double tol = 0.1 * tolerance(cfg.abs_tol, cfg.rel_tol, estimate);
        if (k > 0 && std::abs(estimate - last_estimate) <= tol && std::abs(r.value) <= 1e3 * tol) {
            ++stable;
        } else {
            stable = 0;
        }
        last_estimate = estimate;
        if (k + 1 >= kMinPanels && stable >= kStableRuns) {
            out.value = estimate;
            out.abs_error = panel_err + tol;
            return out;
        }
    }
    out.value = partial;
    out.abs_error = panel_err;
    return out;
}

} // namespace decotime::numerics

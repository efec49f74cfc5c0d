#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfp/k4_process.hpp"
#include "tfp/pair_tracker.hpp"

namespace tfp {

// Scaled time of the K3 process, t = i / n^{3/2}.
inline double k3_time(std::uint64_t step, Vertex n) { return static_cast<double>(step) / std::pow(static_cast<double>(n), 1.5); }

// Scaled time of the K4 process, t = i / n^{8/5}.
inline double k4_time(std::uint64_t step, Vertex n) { return static_cast<double>(step) / std::pow(static_cast<double>(n), 1.6); }

namespace detail {
inline void require_nonnegative_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("scaled time must be nonnegative");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Triangle-free process

struct K3Values {
    double q = 0, x = 0, y = 0;
};

inline K3Values k3_eval(double t) {
    detail::require_nonnegative_time(t);
    const double e = std::exp(-4.0 * t * t);
    return {0.5 * e, e * e, 4.0 * t * e};
}

// Right-hand side of dq/dt = -y, dx/dt = -2xy/q, dy/dt = (2x - y^2)/q.
inline K3Values k3_ode_rhs(const K3Values& v) {
    return {-v.y, -2.0 * v.x * v.y / v.q, (2.0 * v.x - v.y * v.y) / v.q};
}

// Derivatives of the closed forms, taken analytically.
inline K3Values k3_derivative(double t) {
    detail::require_nonnegative_time(t);
    const double e = std::exp(-4.0 * t * t);
    return {-4.0 * t * e, -16.0 * t * e * e, (4.0 - 32.0 * t * t) * e};
}

inline K3Values k3_ode_residual(double t) {
    const K3Values d = k3_derivative(t);
    const K3Values r = k3_ode_rhs(k3_eval(t));
    return {d.q - r.q, d.x - r.x, d.y - r.y};
}

struct K3ErrorFunctions {
    double f_q = 0, f_x = 0, f_y = 0;
};

// f_q has a 1/t factor beyond t = 1; at t = 1 exactly the t <= 1 branch applies.
inline K3ErrorFunctions k3_error_functions(double t) {
    detail::require_nonnegative_time(t);
    const double a = std::exp(41.0 * t * t + 40.0 * t);
    return {t <= 1.0 ? a : a / t, std::exp(37.0 * t * t + 40.0 * t), a};
}

struct K3Envelope {
    double g_q = 0, g_x = 0, g_y = 0;
};

inline K3Envelope k3_envelope(double t, Vertex n) {
    if (n < 2) throw std::invalid_argument("k3_envelope: n must be at least 2");
    const auto f = k3_error_functions(t);
    const double s = std::pow(static_cast<double>(n), -1.0 / 6.0);
    return {f.f_q * s, f.f_x * s, f.f_y * s};
}

// ---------------------------------------------------------------------------
// Bad-event detection

struct Violation {
    std::string variable;  // "Q", "X", "Y", "Z", "X_f", "Y_f", "Y_3"
    int f = -1;            // index for the K4 families
    std::vector<Vertex> vertices;
    double observed = 0;
    double center = 0;
    double allowed = 0;
};

struct BadEventReport {
    std::uint64_t step = 0;
    std::vector<Violation> violations;

    bool clean() const { return violations.empty(); }
};

struct TrackedPair {
    VertexPair pair;
    PairCounts counts;
};

// Every tracked quantity outside its band at step `step`: |Q - q n^2| >= g_q n^2,
// | |X| - x n | >= g_x n, | |Y| - y sqrt(n) | >= g_y sqrt(n), |Z| >= (ln n)^2.
inline BadEventReport k3_bad_event(std::uint64_t q_observed, std::span<const TrackedPair> pairs, Vertex n,
                                   std::uint64_t step) {
    const double t = k3_time(step, n);
    const double nd = n;
    const auto c = k3_eval(t);
    const auto g = k3_envelope(t, n);
    BadEventReport rep{step, {}};
    const auto check = [&](const char* name, const std::vector<Vertex>& vs, double obs, double center, double allowed) {
        if (std::abs(obs - center) >= allowed) rep.violations.push_back({name, -1, vs, obs, center, allowed});
    };
    check("Q", {}, static_cast<double>(q_observed), c.q * nd * nd, g.g_q * nd * nd);
    const double ln2 = std::pow(std::log(nd), 2.0);
    for (const auto& tp : pairs) {
        const std::vector<Vertex> vs{tp.pair.u, tp.pair.v};
        check("X", vs, tp.counts.x, c.x * nd, g.g_x * nd);
        check("Y", vs, tp.counts.y, c.y * std::sqrt(nd), g.g_y * std::sqrt(nd));
        if (tp.counts.z >= ln2) rep.violations.push_back({"Z", -1, vs, double(tp.counts.z), 0.0, ln2});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// K4-free process

struct K4Values {
    double q = 0;
    std::array<double, 5> x{};
    std::array<double, 3> y{};
};

namespace detail {

inline double binom_small(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// log of x_f = 2^{f-1} C(5,f) t^f e^{-16(5-f)t^5}
inline double k4_log_x(int f, double t) {
    const double tf = f == 0 ? 0.0 : f * std::log(t);
    return (f - 1) * std::log(2.0) + std::log(binom_small(5, f)) + tf - 16.0 * (5 - f) * std::pow(t, 5);
}

// log of y_f = 2^f C(3,f) t^f e^{-16(3-f)t^5}
inline double k4_log_y(int f, double t) {
    const double tf = f == 0 ? 0.0 : f * std::log(t);
    return f * std::log(2.0) + std::log(binom_small(3, f)) + tf - 16.0 * (3 - f) * std::pow(t, 5);
}

inline double k4_log_q(double t) { return std::log(0.5) - 16.0 * std::pow(t, 5); }

}  // namespace detail

inline K4Values k4_eval(double t) {
    detail::require_nonnegative_time(t);
    K4Values v;
    v.q = 0.5 * std::exp(-16.0 * std::pow(t, 5));
    for (int f = 0; f < 5; ++f) v.x[f] = std::exp(detail::k4_log_x(f, t));
    for (int f = 0; f < 3; ++f) v.y[f] = std::exp(detail::k4_log_y(f, t));
    return v;
}

// d/dt of the closed forms: x_f' = c_f (f t^{f-1} - 80(5-f) t^{f+4}) e^{-16(5-f)t^5}, likewise y_f.
inline K4Values k4_derivative(double t) {
    detail::require_nonnegative_time(t);
    K4Values d;
    const double t4 = std::pow(t, 4);
    d.q = -40.0 * t4 * std::exp(-16.0 * std::pow(t, 5));
    for (int f = 0; f < 5; ++f) {
        const double c = std::pow(2.0, f - 1) * detail::binom_small(5, f);
        const double e = std::exp(-16.0 * (5 - f) * std::pow(t, 5));
        const double lead = f == 0 ? 0.0 : f * std::pow(t, f - 1);
        d.x[f] = c * (lead - 80.0 * (5 - f) * std::pow(t, f + 4)) * e;
    }
    for (int f = 0; f < 3; ++f) {
        const double c = std::pow(2.0, f) * detail::binom_small(3, f);
        const double e = std::exp(-16.0 * (3 - f) * std::pow(t, 5));
        const double lead = f == 0 ? 0.0 : f * std::pow(t, f - 1);
        d.y[f] = c * (lead - 80.0 * (3 - f) * std::pow(t, f + 4)) * e;
    }
    return d;
}

// Residuals of dq/dt = -x_4, dx_f/dt = ((6-f) x_{f-1} - (5-f) x_f x_4)/q,
// dy_f/dt = ((4-f) y_{f-1} - (3-f) y_f x_4)/q. Ratios by q are formed in the
// log domain so that large t does not produce 0/0.
inline K4Values k4_ode_residual(double t) {
    detail::require_nonnegative_time(t);
    const K4Values v = k4_eval(t);
    const K4Values d = k4_derivative(t);
    const double lq = detail::k4_log_q(t);
    const double x4_over_q = std::exp(detail::k4_log_x(4, t) - lq);
    K4Values r;
    r.q = d.q + v.x[4];
    for (int f = 0; f < 5; ++f) {
        double rhs = -(5 - f) * v.x[f] * x4_over_q;
        if (f > 0) rhs += (6 - f) * std::exp(detail::k4_log_x(f - 1, t) - lq);
        r.x[f] = d.x[f] - rhs;
    }
    for (int f = 0; f < 3; ++f) {
        double rhs = -(3 - f) * v.y[f] * x4_over_q;
        if (f > 0) rhs += (4 - f) * std::exp(detail::k4_log_y(f - 1, t) - lq);
        r.y[f] = d.y[f] - rhs;
    }
    return r;
}

// Coefficients c_0..c_5 of the degree-5 polynomial p(t) in the K4 error functions.
using K4Polynomial = std::array<double, 6>;
inline constexpr K4Polynomial kDefaultK4Polynomial{1.0, 40.0, 41.0, 41.0, 41.0, 41.0};

inline void validate_k4_polynomial(const K4Polynomial& p) {
    for (double c : p)
        if (!(c > 0.0)) throw std::invalid_argument("K4 envelope polynomial needs positive coefficients");
}

struct K4ErrorFunctions {
    double f_q = 0;
    std::array<double, 5> f{};
    std::array<double, 3> h{};
};

inline K4ErrorFunctions k4_error_functions(double t, const K4Polynomial& p = kDefaultK4Polynomial) {
    detail::require_nonnegative_time(t);
    validate_k4_polynomial(p);
    double pt = 0;
    for (int k = 5; k >= 0; --k) pt = pt * t + p[k];
    const double t5 = std::pow(t, 5);
    K4ErrorFunctions e;
    e.f_q = t <= 1.0 ? std::exp(pt) : std::exp(pt) / std::pow(t, 4);
    for (int f = 0; f < 5; ++f) e.f[f] = std::exp(pt - 16.0 * (4 - f) * t5);
    for (int f = 0; f < 3; ++f) e.h[f] = std::exp(pt - 16.0 * (2 - f) * t5);
    return e;
}

// Absolute bands: f_q n^{29/15} for Q, f_f n^{2-2f/5-1/15} for X_{A,f}, h_f n^{1-2f/5-1/15} for Y_{A,f}.
struct K4Envelope {
    double q_band = 0;
    std::array<double, 5> x_band{};
    std::array<double, 3> y_band{};
};

inline K4Envelope k4_envelope(double t, Vertex n, const K4Polynomial& p = kDefaultK4Polynomial) {
    if (n < 4) throw std::invalid_argument("k4_envelope: n must be at least 4");
    const auto e = k4_error_functions(t, p);
    const double nd = n;
    K4Envelope env;
    env.q_band = e.f_q * std::pow(nd, 29.0 / 15.0);
    for (int f = 0; f < 5; ++f) env.x_band[f] = e.f[f] * std::pow(nd, 2.0 - 2.0 * f / 5.0 - 1.0 / 15.0);
    for (int f = 0; f < 3; ++f) env.y_band[f] = e.h[f] * std::pow(nd, 1.0 - 2.0 * f / 5.0 - 1.0 / 15.0);
    return env;
}

// Scale of the K4 families: |X_{A,f}| ~ x_f n^{2-2f/5}, |Y_{A,f}| ~ y_f n^{1-2f/5}.
inline double k4_x_scale(int f, Vertex n) { return std::pow(static_cast<double>(n), 2.0 - 2.0 * f / 5.0); }
inline double k4_y_scale(int f, Vertex n) { return std::pow(static_cast<double>(n), 1.0 - 2.0 * f / 5.0); }

inline BadEventReport k4_bad_event(std::uint64_t q_observed, std::span<const K4WitnessCounts> pairs,
                                   std::span<const K4TripleCounts> triples, Vertex n, std::uint64_t step,
                                   const K4Polynomial& p = kDefaultK4Polynomial) {
    const double t = k4_time(step, n);
    const double nd = n;
    const auto c = k4_eval(t);
    const auto env = k4_envelope(t, n, p);
    BadEventReport rep{step, {}};
    const double qc = c.q * nd * nd;
    if (std::abs(static_cast<double>(q_observed) - qc) >= env.q_band)
        rep.violations.push_back({"Q", -1, {}, double(q_observed), qc, env.q_band});
    for (const auto& w : pairs) {
        if (w.frozen) continue;
        for (int f = 0; f < 5; ++f) {
            const double center = c.x[f] * k4_x_scale(f, n);
            const double obs = static_cast<double>(w.x[f]);
            if (std::abs(obs - center) >= env.x_band[f])
                rep.violations.push_back({"X_f", f, {w.a.u, w.a.v}, obs, center, env.x_band[f]});
        }
    }
    for (const auto& w : triples) {
        if (w.frozen) continue;
        const std::vector<Vertex> vs(w.a.begin(), w.a.end());
        for (int f = 0; f < 3; ++f) {
            const double center = c.y[f] * k4_y_scale(f, n);
            const double obs = static_cast<double>(w.y[f]);
            if (obs > center + env.y_band[f]) rep.violations.push_back({"Y_f", f, vs, obs, center, env.y_band[f]});
        }
        if (w.y[3] > 15) rep.violations.push_back({"Y_3", 3, vs, double(w.y[3]), 0.0, 15.0});
    }
    return rep;
}

}  // namespace tfp

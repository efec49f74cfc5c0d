#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tfp/random.hpp"

namespace tfp {

// A sequence with A_i - eta <= A_{i+1} <= A_i + big_n, observed for m steps,
// and a deviation threshold a.
struct MartingaleSpec {
    double eta = 0;
    double big_n = 0;
    double m = 0;
    double a = 0;
};

inline void validate(const MartingaleSpec& s) {
    if (!(s.eta > 0 && s.big_n > 0 && s.m > 0 && s.a > 0))
        throw std::invalid_argument("martingale spec needs eta, N, m, a > 0");
}

// g(x, v) = (v + xv) ln(v / (v + xv)) + (1 - v - xv) ln((1 - v) / (1 - v - xv))
// for 0 < v < 1/2 and -1 < x < (1 - v) / v.
inline double g_func(double x, double v) {
    if (!(v > 0.0 && v < 0.5)) throw std::invalid_argument("g_func: need 0 < v < 1/2");
    const double vbar = 1.0 - v;
    if (!(x > -1.0 && x < vbar / v)) throw std::invalid_argument("g_func: x outside (-1, (1-v)/v)");
    const double lo = v + x * v;
    const double hi = vbar - x * v;
    return lo * std::log(v / lo) + hi * std::log(vbar / hi);
}

// Hoeffding's bound on Pr(X_m >= m t) for a supermartingale with increments
// in [-mu_k, 1 - mu_k] averaging mu:
// [ (mu/(mu+t))^{mu+t} ((1-mu)/(1-mu-t))^{1-mu-t} ]^m.
inline double hoeffding_tail(double mu, double t, double m) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("hoeffding_tail: need 0 < mu < 1");
    if (!(t > 0.0 && t < 1.0 - mu)) throw std::invalid_argument("hoeffding_tail: need 0 < t < 1 - mu");
    if (!(m > 0.0)) throw std::invalid_argument("hoeffding_tail: need m > 0");
    const double mubar = 1.0 - mu;
    const double base = std::pow(mu / (mu + t), mu + t) * std::pow(mubar / (mubar - t), mubar - t);
    return std::pow(base, m);
}

struct TailBound {
    double lemma = 0;      // e^{-a^2 / (3 eta m N)}
    double proof = 0;      // sharper constant obtained in the proof
    double hoeffding = 0;  // the underlying Hoeffding bound itself
};

// Pr[A_m <= -a] for an (eta, N)-bounded submartingale from 0.
// Requires eta <= N/2 and a < eta m.
inline TailBound submartingale_tail(const MartingaleSpec& s) {
    validate(s);
    if (!(s.eta <= s.big_n / 2.0)) throw std::invalid_argument("submartingale bound needs eta <= N/2");
    if (!(s.a < s.eta * s.m)) throw std::invalid_argument("submartingale bound needs a < eta m");
    const double a2 = s.a * s.a;
    TailBound b;
    b.lemma = std::exp(-a2 / (3.0 * s.eta * s.m * s.big_n));
    b.proof = std::exp(-a2 / (2.0 * s.m * s.eta * (s.big_n + s.eta)));
    b.hoeffding = hoeffding_tail(s.big_n / (s.eta + s.big_n), s.a / (s.m * (s.eta + s.big_n)), s.m);
    return b;
}

// Pr[A_m >= a] for an (eta, N)-bounded supermartingale from 0.
// Requires eta <= N/10 and a < eta m.
inline TailBound supermartingale_tail(const MartingaleSpec& s) {
    validate(s);
    if (!(s.eta <= s.big_n / 10.0)) throw std::invalid_argument("supermartingale bound needs eta <= N/10");
    if (!(s.a < s.eta * s.m)) throw std::invalid_argument("supermartingale bound needs a < eta m");
    const double a2 = s.a * s.a;
    TailBound b;
    b.lemma = std::exp(-a2 / (3.0 * s.eta * s.m * s.big_n));
    b.proof = std::exp(-(11.0 / 30.0) * a2 / (s.m * s.eta * (s.big_n + s.eta)));
    b.hoeffding = hoeffding_tail(s.eta / (s.eta + s.big_n), s.a / (s.m * (s.eta + s.big_n)), s.m);
    return b;
}

// Discrete increment distribution for simulated martingales.
struct IncrementLaw {
    std::vector<double> values;
    std::vector<double> probabilities;

    double mean() const {
        double m = 0;
        for (std::size_t k = 0; k < values.size(); ++k) m += values[k] * probabilities[k];
        return m;
    }

    // -eta with probability N/(eta+N), +N otherwise; mean zero.
    static IncrementLaw two_point(double eta, double big_n) {
        return {{-eta, big_n}, {big_n / (eta + big_n), eta / (eta + big_n)}};
    }

    static IncrementLaw constant(double value) { return {{value}, {1.0}}; }
};

enum class MartingaleKind { Sub, Super };

struct SimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;    // Sub: A_m <= -a; Super: A_m >= a
    double frequency = 0;
    double bound = 0;           // lemma-level bound for this side
    double standard_error = 0;  // binomial, at the bound
    bool within_bound() const { return frequency <= bound + 3.0 * standard_error; }
};

// Monte Carlo tail frequency of an i.i.d.-increment (eta, N)-bounded
// martingale against the matching lemma bound.
inline SimulationResult simulate_bounded_martingale(const MartingaleSpec& spec, const IncrementLaw& law,
                                                    MartingaleKind kind, std::uint64_t trials, Rng& rng) {
    const TailBound tb = kind == MartingaleKind::Sub ? submartingale_tail(spec) : supermartingale_tail(spec);
    if (law.values.empty() || law.values.size() != law.probabilities.size())
        throw std::invalid_argument("increment law needs matching values and probabilities");
    double total = 0;
    for (std::size_t k = 0; k < law.values.size(); ++k) {
        if (law.values[k] < -spec.eta || law.values[k] > spec.big_n)
            throw std::invalid_argument("increment law support exceeds [-eta, N]");
        if (law.probabilities[k] < 0) throw std::invalid_argument("negative probability in increment law");
        total += law.probabilities[k];
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("increment law probabilities must sum to 1");
    const double mean = law.mean();
    if (kind == MartingaleKind::Sub && mean < -1e-12) throw std::invalid_argument("submartingale law needs mean >= 0");
    if (kind == MartingaleKind::Super && mean > 1e-12) throw std::invalid_argument("supermartingale law needs mean <= 0");
    if (trials == 0) throw std::invalid_argument("simulate_bounded_martingale: trials must be positive");

    std::vector<double> cumulative(law.probabilities.size());
    std::partial_sum(law.probabilities.begin(), law.probabilities.end(), cumulative.begin());
    const auto steps = static_cast<std::uint64_t>(std::llround(spec.m));

    SimulationResult r;
    r.trials = trials;
    for (std::uint64_t k = 0; k < trials; ++k) {
        double sum = 0;
        for (std::uint64_t i = 0; i < steps; ++i) {
            const double u = rng.uniform01() * total;
            std::size_t j = 0;
            while (j + 1 < cumulative.size() && u >= cumulative[j]) ++j;
            sum += law.values[j];
        }
        if (kind == MartingaleKind::Sub ? sum <= -spec.a : sum >= spec.a) ++r.hits;
    }
    r.frequency = static_cast<double>(r.hits) / static_cast<double>(trials);
    r.bound = tb.lemma;
    r.standard_error = std::sqrt(tb.lemma * (1.0 - tb.lemma) / static_cast<double>(trials));
    return r;
}

}  // namespace tfp

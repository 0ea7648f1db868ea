#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "latsim/rng.hpp"

namespace latsim {

struct LiveNetParams {
    double lambda = 1.0;  // per-connection teardown rate
    double nu = 1.0;      // per-target message rate
    double q = 0.1;       // oracle floor probability of drawing a given node
    std::size_t dynamic_slots = 1;  // F
    std::size_t peer_cap = 8;       // h
    std::size_t peer_budget = 2;    // d
    std::size_t target_count = 1;   // |U|

    void validate() const {
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("need 0 < q < 1");
        if (!(lambda > 0.0 && nu > 0.0)) throw std::invalid_argument("rates must be > 0");
        if (dynamic_slots == 0 || dynamic_slots > peer_cap)
            throw std::invalid_argument("need 0 < F <= h");
        if (peer_budget < 2) throw std::invalid_argument("need d >= 2");
        if (target_count < 1) throw std::invalid_argument("need at least one target");
    }
};

struct Schedule {
    std::size_t iterations = 0;  // K
    double delta1 = 0.0;
    double delta2 = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double gamma = 0.0;  // rate floor
    double mu = 0.0;     // tail constant
    double zeta = 0.0;   // slot constant

    double total_time_bound() const {
        return static_cast<double>(iterations) * (delta1 + delta2);
    }
};

struct FindResult {
    bool success = false;
    double elapsed = 0.0;
    std::size_t iterations_used = 0;
};

/// P[X <= k] for X ~ Poisson(mean), evaluated in the log domain so that
/// large means do not underflow.
inline double poisson_cdf(double mean, long long k) {
    if (k < 0) return 0.0;
    if (mean <= 0.0) return 1.0;
    double log_mean = std::log(mean);
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(static_cast<std::size_t>(k) + 1);
    for (long long i = 0; i <= k; ++i) {
        double lt = -mean + static_cast<double>(i) * log_mean - std::lgamma(static_cast<double>(i) + 1.0);
        logs[static_cast<std::size_t>(i)] = lt;
        max_log = std::max(max_log, lt);
    }
    double sum = 0.0;
    for (double lt : logs) sum += std::exp(lt - max_log);
    double p = std::exp(max_log) * sum;
    return std::min(p, 1.0);
}

/// P[X < x] for X ~ Poisson(mean): the strict tail used by the rate-floor
/// argument, with the integer-threshold boundary handled exactly.
inline double poisson_tail_below(double mean, double x) {
    double fl = std::floor(x);
    long long k = (fl == x) ? static_cast<long long>(fl) - 1 : static_cast<long long>(fl);
    return poisson_cdf(mean, k);
}

namespace detail {

/// sup over x of x * P[Poisson(x) < x/2], computed on a log grid augmented
/// with points just above the even integers where the tail count jumps.
inline double poisson_tail_sup_unit() {
    double sup = 0.0;
    const double lo = std::log(1e-2);
    const double hi = std::log(1e4);
    const int grid = 481;
    for (int i = 0; i < grid; ++i) {
        double x = std::exp(lo + (hi - lo) * static_cast<double>(i) / (grid - 1));
        sup = std::max(sup, x * poisson_tail_below(x, x / 2.0));
    }
    for (int m = 1; m <= 200; ++m) {
        double x = 2.0 * static_cast<double>(m) * (1.0 + 1e-9);
        sup = std::max(sup, x * poisson_tail_below(x, x / 2.0));
    }
    return sup;
}

}  // namespace detail

/// Tail constant: 1.05 times the numerically evaluated supremum of
/// Delta * P[Poisson(nu Delta) < nu Delta / 2]. Scales as 1/nu.
inline double compute_mu(double nu) {
    static const double unit_sup = detail::poisson_tail_sup_unit();
    return 1.05 * unit_sup / nu;
}

inline Schedule derive_schedule(double epsilon, const LiveNetParams& params) {
    params.validate();
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0, 1)");
    Schedule s;
    s.iterations =
        static_cast<std::size_t>(std::ceil(std::log(epsilon / 2.0) / std::log(1.0 - params.q)));
    s.eps1 = epsilon * std::log(1.0 - params.q) / (4.0 * std::log(epsilon / 2.0));
    s.eps2 = s.eps1;
    s.gamma = params.nu / 2.0;
    s.mu = compute_mu(params.nu);
    s.zeta = 1.0 / (std::numbers::e * params.lambda);
    s.delta1 = std::max(1.0 / s.gamma, s.mu / s.eps1);
    s.delta2 = static_cast<double>(params.peer_budget - 1) * s.zeta / s.eps2;
    return s;
}

/// One victim search against the worst-case oracle: wait up to delta1 for a
/// target-signed message, keep the first deliverer, draw d-1 candidates that
/// are each the target with probability exactly q, then spend up to delta2
/// waiting for their dynamic slots. Once connected the target always
/// delivers first, so the next observed arrival confirms success.
inline FindResult run_find_target(const LiveNetParams& params, const Schedule& schedule,
                                  std::uint64_t seed) {
    params.validate();
    Rng rng = make_rng(seed);
    std::exponential_distribution<double> msg_wait(params.nu);
    std::exponential_distribution<double> slot_wait(params.lambda);
    std::bernoulli_distribution is_target(params.q);

    FindResult result;
    bool target_is_peer = false;
    for (std::size_t iter = 0; iter < schedule.iterations; ++iter) {
        result.iterations_used = iter + 1;
        double wait = msg_wait(rng);
        if (wait > schedule.delta1) {
            result.elapsed += schedule.delta1;  // no arrival this round
            continue;
        }
        result.elapsed += wait;
        if (target_is_peer) {
            result.success = true;  // direct peer delivers first
            return result;
        }
        double budget = schedule.delta2;
        for (std::size_t c = 0; c + 1 < params.peer_budget; ++c) {
            bool hit = is_target(rng);
            double slot = slot_wait(rng);
            for (std::size_t f = 1; f < params.dynamic_slots; ++f)
                slot = std::min(slot, slot_wait(rng));
            double spent = std::min(slot, budget);
            result.elapsed += spent;
            budget -= spent;
            if (hit && slot <= spent && !target_is_peer) target_is_peer = true;
            if (budget <= 0.0) break;
        }
    }
    if (target_is_peer) {
        // connected in the last round; one verification arrival of overhead
        double wait = msg_wait(rng);
        if (wait <= schedule.delta1) {
            result.elapsed += wait;
            result.success = true;
        } else {
            result.elapsed += schedule.delta1;
        }
    }
    return result;
}

/// Sequential search over |U| targets, each with failure budget epsilon/|U|.
inline FindResult find_multi_targets(const LiveNetParams& params, double epsilon,
                                     std::uint64_t seed) {
    params.validate();
    Schedule per_target = derive_schedule(epsilon / static_cast<double>(params.target_count), params);
    FindResult total;
    total.success = true;
    for (std::size_t i = 0; i < params.target_count; ++i) {
        FindResult r = run_find_target(params, per_target, derive_seed(seed, i));
        total.elapsed += r.elapsed;
        total.iterations_used += r.iterations_used;
        total.success = total.success && r.success;
    }
    return total;
}

struct TailWitness {
    double delta = 0.0;
    double probability = 0.0;  // P[Poisson(nu delta) < nu delta / 2]
    double bound = 0.0;        // mu / delta
    bool holds = false;
};

inline std::vector<TailWitness> poisson_tail_check(double nu, const std::vector<double>& deltas) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
    double mu = compute_mu(nu);
    std::vector<TailWitness> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        if (!(d > 0.0)) throw std::invalid_argument("delta must be > 0");
        TailWitness w;
        w.delta = d;
        w.probability = poisson_tail_below(nu * d, nu * d / 2.0);
        w.bound = mu / d;
        w.holds = w.probability < w.bound;
        out.push_back(w);
    }
    return out;
}

struct LowerBoundPoint {
    double epsilon = 0.0;
    std::size_t draws = 0;  // empirical (1 - epsilon)-quantile of draws to a hit
};

/// Draw-until-hit experiment against a Bernoulli(q) oracle: for each epsilon
/// the smallest draw count whose empirical hit rate reaches 1 - epsilon.
inline std::vector<LowerBoundPoint> lower_bound_probe(double q,
                                                      const std::vector<double>& epsilon_grid,
                                                      std::size_t trials, std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("need 0 < q < 1");
    if (trials == 0) throw std::invalid_argument("need trials > 0");
    Rng rng = make_rng(seed);
    std::bernoulli_distribution hit(q);
    std::vector<std::size_t> counts(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t draws = 1;
        while (!hit(rng)) ++draws;
        counts[t] = draws;
    }
    std::sort(counts.begin(), counts.end());
    std::vector<LowerBoundPoint> out;
    for (double eps : epsilon_grid) {
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
        // smallest k with P_emp[draws <= k] >= 1 - eps
        std::size_t rank = static_cast<std::size_t>(
            std::ceil((1.0 - eps) * static_cast<double>(trials)));
        rank = std::min(std::max<std::size_t>(rank, 1), trials);
        out.push_back({eps, counts[rank - 1]});
    }
    return out;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("need matched samples, at least two");
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("degenerate x values");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

/// Wilson score interval lower bound at 95 percent confidence.
inline double wilson_lower_bound(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("need trials > 0");
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double center = p + z2 / (2.0 * n);
    double margin = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return (center - margin) / (1.0 + z2 / n);
}

/// Kolmogorov-Smirnov statistic of samples against Exp(lambda).
inline double ks_statistic_exponential(std::vector<double> samples, double lambda) {
    if (samples.empty()) throw std::invalid_argument("need samples");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double cdf = 1.0 - std::exp(-lambda * samples[i]);
        double hi = static_cast<double>(i + 1) / n;
        double lo = static_cast<double>(i) / n;
        ks = std::max(ks, std::max(std::abs(hi - cdf), std::abs(cdf - lo)));
    }
    return ks;
}

}  // namespace latsim

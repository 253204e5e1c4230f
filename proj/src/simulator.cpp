/*
   Copyright 2026 The mcd2d Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include "mcd2d/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "mcd2d/error.hpp"
#include "mcd2d/mean_covered.hpp"

namespace mcd2d {

using std::numbers::pi;

namespace {

constexpr double kPointsPerAnnulus = 8.0;
constexpr std::uint32_t kMaxAnnuli = 0x10000;
constexpr int kMaxSlots = 0x1000;
constexpr std::uint32_t kTypicalCluster = 1;

struct FieldPoint {
    Point p;
    std::uint32_t annulus;
    std::uint32_t index;
};

std::vector<FieldPoint> sample_field(double density, double radius, std::uint64_t seed,
                                     std::uint32_t trial, StreamPurpose purpose,
                                     std::uint32_t slot)
{
    const double ring_mass = kPointsPerAnnulus / density; // area of one annulus
    const double rings = std::ceil(pi * radius * radius / ring_mass);
    if (rings > kMaxAnnuli)
        throw ConfigError("simulation window holds too many points for the annulus layout");
    std::vector<FieldPoint> out;
    std::poisson_distribution<int> count(kPointsPerAnnulus);
    const double r2_max = radius * radius;
    for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(rings); ++k) {
        const double inner = k * ring_mass / pi, outer = (k + 1) * ring_mass / pi;
        Substream rng(seed, trial, stream_tag(purpose, slot, k), 0);
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            const double r2 = inner + rng.uniform() * (outer - inner);
            const double phi = 2.0 * pi * rng.uniform();
            if (r2 < r2_max) {
                const double r = std::sqrt(r2);
                out.push_back({Point{r * std::cos(phi), r * std::sin(phi)}, k,
                               static_cast<std::uint32_t>(i)});
            }
        }
    }
    return out;
}

std::vector<Point> positions(const std::vector<FieldPoint>& field)
{
    std::vector<Point> out;
    out.reserve(field.size());
    for (const auto& f : field)
        out.push_back(f.p);
    return out;
}

Substream typical_cluster_stream(const SimConfig& c, std::uint32_t trial)
{
    return Substream(c.seed, trial, stream_tag(StreamPurpose::receivers, kTypicalCluster), 0);
}

/// SINR evaluation for one trial. Receivers are identified by their position in `rx`,
/// and that index selects their fading draws.
class TrialChannel {
public:
    TrialChannel(const SystemParams& p, const SimConfig& c, double window, std::uint32_t trial)
        : p_(p), c_(c), window_(window), trial_(trial), model_(p.path_loss())
    {
    }

    /// sinr[n * M + m] for slots n < tau.
    void d2d(const std::vector<Point>& rx, int tau, std::vector<double>& sinr)
    {
        const std::size_t m_count = rx.size();
        sinr.assign(static_cast<std::size_t>(tau) * m_count, 0.0);
        std::vector<double> interference(m_count), draws(m_count);
        std::vector<FieldPoint> field;
        for (int n = 0; n < tau; ++n) {
            const bool fresh = n == 0 || c_.mobility == Mobility::high;
            if (fresh) {
                const std::uint32_t field_slot = c_.mobility == Mobility::high ? n : 0;
                field = sample_field(p_.lambda_m, window_, c_.seed, trial_,
                                     StreamPurpose::tx_field, field_slot);
                gains(field, rx);
            }
            std::fill(interference.begin(), interference.end(), 0.0);
            for (std::size_t j = 0; j < field.size(); ++j) {
                Substream fading(c_.seed, trial_,
                                 stream_tag(StreamPurpose::interferer_fading, n, field[j].annulus),
                                 field[j].index);
                fading.fill_exponential(draws.data(), m_count);
                const double* g = &gain_[j * m_count];
                for (std::size_t m = 0; m < m_count; ++m)
                    interference[m] += draws[m] * g[m];
            }
            for (std::size_t m = 0; m < m_count; ++m) {
                Substream sig(c_.seed, trial_, stream_tag(StreamPurpose::signal_fading, n),
                              static_cast<std::uint32_t>(m));
                const double s = sig.exponential() / attenuation(rx[m].norm());
                sinr[n * m_count + m] = s / (p_.snr_inv() + interference[m]);
            }
        }
    }

    /// Downlink SINR from the BS nearest to the transmitter. False when no BS exists.
    bool downlink(const std::vector<Point>& rx, std::vector<double>& sinr)
    {
        const auto bs = sample_field(p_.lambda_b, window_, c_.seed, trial_,
                                     StreamPurpose::bs_field, 0);
        sinr.assign(rx.size(), 0.0);
        if (bs.empty())
            return false;
        std::size_t serving = 0;
        for (std::size_t b = 1; b < bs.size(); ++b)
            if (bs[b].p.squaredNorm() < bs[serving].p.squaredNorm())
                serving = b;
        std::vector<double> interference(rx.size(), 0.0);
        for (std::size_t b = 0; b < bs.size(); ++b) {
            if (b == serving)
                continue;
            Substream fading(c_.seed, trial_,
                             stream_tag(StreamPurpose::downlink_fading, 0, bs[b].annulus),
                             bs[b].index);
            for (std::size_t m = 0; m < rx.size(); ++m)
                interference[m] += fading.exponential() / attenuation((bs[b].p - rx[m]).norm());
        }
        for (std::size_t m = 0; m < rx.size(); ++m) {
            Substream sig(c_.seed, trial_, stream_tag(StreamPurpose::downlink_signal),
                          static_cast<std::uint32_t>(m));
            const double s = sig.exponential() / attenuation((bs[serving].p - rx[m]).norm());
            sinr[m] = s / (p_.snr_c_inv() + interference[m]);
        }
        return true;
    }

private:
    double attenuation(double r) const { return model_(std::max(r, c_.min_link_distance)); }

    void gains(const std::vector<FieldPoint>& field, const std::vector<Point>& rx)
    {
        gain_.resize(field.size() * rx.size());
        for (std::size_t j = 0; j < field.size(); ++j)
            for (std::size_t m = 0; m < rx.size(); ++m)
                gain_[j * rx.size() + m] = 1.0 / attenuation((field[j].p - rx[m]).norm());
    }

    const SystemParams& p_;
    const SimConfig& c_;
    double window_;
    std::uint32_t trial_;
    PathLossModel model_;
    std::vector<double> gain_;
};

/// Runs kernel(trial, counters) over all trials and sums the integer counters.
/// Trials are split into contiguous blocks; the sum does not depend on the split.
template <class Kernel>
std::vector<long long> run_trials(const SimConfig& c, std::size_t width, Kernel kernel)
{
    unsigned workers = c.threads > 0 ? static_cast<unsigned>(c.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<long>(workers, c.trials));
    std::vector<std::vector<long long>> partial(workers, std::vector<long long>(width, 0));
    std::vector<std::exception_ptr> failure(workers);
    auto block = [&](unsigned w) {
        try {
            const long begin = c.trials * w / workers, end = c.trials * (w + 1) / workers;
            for (long t = begin; t < end; ++t)
                kernel(static_cast<std::uint32_t>(t), partial[w].data());
        } catch (...) {
            failure[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        block(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(block, w);
        for (auto& t : pool)
            t.join();
    }
    for (auto& f : failure)
        if (f)
            std::rethrow_exception(f);
    std::vector<long long> total(width, 0);
    for (const auto& part : partial)
        for (std::size_t i = 0; i < width; ++i)
            total[i] += part[i];
    return total;
}

void check_thresholds(const std::vector<double>& thresholds)
{
    if (thresholds.empty())
        throw ConfigError("at least one threshold is required");
    for (double t : thresholds)
        if (!(t > 0.0) || !std::isfinite(t))
            throw ConfigError("thresholds must be positive and finite");
}

void check_tau(const SystemParams& p)
{
    if (p.tau_m >= kMaxSlots)
        throw ConfigError("simulation supports tau_m below " + std::to_string(kMaxSlots));
}

} // namespace

double SimConfig::default_window(const SystemParams& p)
{
    return std::max({10.0 / std::sqrt(pi * p.lambda_m), 10.0 / std::sqrt(pi * p.lambda_b),
                     4.0 * p.cluster_radius});
}

double SimConfig::minimum_window(const SystemParams& p)
{
    return std::max({5.0 / std::sqrt(pi * p.lambda_m), 5.0 / std::sqrt(pi * p.lambda_b),
                     4.0 * p.cluster_radius});
}

double SimConfig::resolved_window(const SystemParams& p) const
{
    return window_radius > 0.0 ? window_radius : default_window(p);
}

void SimConfig::validate(const SystemParams& p) const
{
    p.validate();
    if (trials < 1)
        throw ConfigError("trials must be at least 1");
    if (trials > std::numeric_limits<std::uint32_t>::max())
        throw ConfigError("trials must fit in 32 bits");
    if (!(window_radius >= 0.0) || !std::isfinite(window_radius))
        throw ConfigError("window_radius must be finite and nonnegative");
    if (!(min_link_distance > 0.0))
        throw ConfigError("min_link_distance must be positive");
    if (threads < 0)
        throw ConfigError("threads must be nonnegative");
    const double w = resolved_window(p);
    if (enforce_window_guard && w < minimum_window(p) * (1.0 - 1e-12))
        throw ConfigError("window_radius " + std::to_string(w) + " m is below the guard " +
                          std::to_string(minimum_window(p)) + " m");
}

CoverageEstimate CoverageEstimate::from_bernoulli(long successes, long trials)
{
    CoverageEstimate e;
    e.trials = trials;
    if (trials == 0)
        return e;
    e.estimate = static_cast<double>(successes) / trials;
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / trials);
    e.half_width = 1.96 * e.std_error;
    return e;
}

CoverageEstimate CoverageEstimate::from_counts(long long sum, long long sum_sq, long trials)
{
    CoverageEstimate e;
    e.trials = trials;
    if (trials == 0)
        return e;
    const double n = trials;
    e.estimate = sum / n;
    const double var =
        trials > 1 ? std::max(0.0, (sum_sq - n * e.estimate * e.estimate) / (n - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / n);
    e.half_width = 1.96 * e.std_error;
    return e;
}

std::vector<Point> sample_poisson_disc(double density, double radius, std::uint64_t seed,
                                       std::uint32_t trial, StreamPurpose purpose,
                                       std::uint32_t slot)
{
    if (!(density > 0.0) || !(radius > 0.0))
        throw ConfigError("sample_poisson_disc: density and radius must be positive");
    return positions(sample_field(density, radius, seed, trial, purpose, slot));
}

std::vector<Point> sample_cluster(double density, double radius, double min_distance,
                                  Substream& rng)
{
    if (!(min_distance < radius))
        throw ConfigError("sample_cluster: min distance must be below the cluster radius");
    std::poisson_distribution<long> count(density * pi * radius * radius);
    const long n = count(rng);
    std::vector<Point> out;
    out.reserve(n);
    const double lo = min_distance * min_distance, hi = radius * radius;
    for (long i = 0; i < n; ++i) {
        const double r = std::sqrt(lo + rng.uniform() * (hi - lo));
        const double phi = 2.0 * pi * rng.uniform();
        out.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
    return out;
}

NetworkSnapshot sample_snapshot(const SystemParams& params, const SimConfig& config,
                                std::uint32_t trial)
{
    params.validate();
    const double w = config.resolved_window(params);
    NetworkSnapshot snap;
    snap.window_radius = w;
    const auto field =
        sample_field(params.lambda_m, w, config.seed, trial, StreamPurpose::tx_field, 0);
    snap.tx_points.push_back(Point::Zero());
    auto typical = typical_cluster_stream(config, trial);
    snap.receivers.push_back(sample_cluster(params.lambda_r, params.cluster_radius,
                                            config.min_link_distance, typical));
    for (const auto& f : field) {
        snap.tx_points.push_back(f.p);
        Substream rng(config.seed, trial, stream_tag(StreamPurpose::receivers, 0, f.annulus),
                      f.index);
        auto rx = sample_cluster(params.lambda_r, params.cluster_radius,
                                 config.min_link_distance, rng);
        for (auto& y : rx)
            y += f.p;
        snap.receivers.push_back(std::move(rx));
    }
    if (config.assist)
        snap.bs_points = positions(
            sample_field(params.lambda_b, w, config.seed, trial, StreamPurpose::bs_field, 0));
    return snap;
}

CoverageSweep estimate_coverage_sweep(double distance, const std::vector<double>& thresholds,
                                      const SystemParams& params, const SimConfig& config)
{
    config.validate(params);
    check_thresholds(thresholds);
    check_tau(params);
    if (!(distance > 0.0))
        throw ConfigError("estimate_coverage: distance must be positive");
    const double w = config.resolved_window(params);
    const int tau = params.tau_m;
    const std::size_t nt = thresholds.size();
    const std::vector<Point> probe{Point{distance, 0.0}};
    auto kernel = [&](std::uint32_t trial, long long* acc) {
        TrialChannel channel(params, config, w, trial);
        std::vector<double> sinr, dl;
        channel.d2d(probe, tau, sinr);
        double downlink = 0.0;
        if (config.assist && channel.downlink(probe, dl))
            downlink = dl[0];
        double best = 0.0;
        for (int n = 0; n < tau; ++n) {
            best = std::max(best, sinr[n]);
            for (std::size_t i = 0; i < nt; ++i)
                if (best >= thresholds[i] || downlink >= thresholds[i])
                    ++acc[i * tau + n];
        }
    };
    const auto total = run_trials(config, nt * tau, kernel);
    CoverageSweep out;
    out.thresholds = thresholds;
    out.tau_max = tau;
    for (long long s : total)
        out.estimates.push_back(CoverageEstimate::from_bernoulli(s, config.trials));
    return out;
}

CoverageEstimate estimate_coverage(double distance, const SystemParams& params,
                                   const SimConfig& config)
{
    return estimate_coverage_sweep(distance, {params.threshold}, params, config)
        .at(0, params.tau_m);
}

CoverageEstimate estimate_assisted_coverage(double distance, const SystemParams& params,
                                            const SimConfig& config)
{
    SimConfig c = config;
    c.assist = true;
    return estimate_coverage(distance, params, c);
}

CoverageSweep estimate_mean_covered_sweep(const std::vector<double>& thresholds,
                                          const SystemParams& params, const SimConfig& config)
{
    config.validate(params);
    check_thresholds(thresholds);
    check_tau(params);
    const double w = config.resolved_window(params);
    const int tau = params.tau_m;
    const std::size_t nt = thresholds.size();
    const std::size_t cells = nt * tau;
    auto kernel = [&](std::uint32_t trial, long long* acc) {
        auto stream = typical_cluster_stream(config, trial);
        const auto rx = sample_cluster(params.lambda_r, params.cluster_radius,
                                       config.min_link_distance, stream);
        std::vector<long long> count(cells, 0);
        if (!rx.empty()) {
            TrialChannel channel(params, config, w, trial);
            std::vector<double> sinr, dl;
            channel.d2d(rx, tau, sinr);
            const bool has_bs = config.assist && channel.downlink(rx, dl);
            const std::size_t m_count = rx.size();
            for (std::size_t m = 0; m < m_count; ++m) {
                double best = 0.0;
                const double downlink = has_bs ? dl[m] : 0.0;
                for (int n = 0; n < tau; ++n) {
                    best = std::max(best, sinr[n * m_count + m]);
                    for (std::size_t i = 0; i < nt; ++i)
                        if (best >= thresholds[i] || downlink >= thresholds[i])
                            ++count[i * tau + n];
                }
            }
        }
        for (std::size_t k = 0; k < cells; ++k) {
            acc[2 * k] += count[k];
            acc[2 * k + 1] += count[k] * count[k];
        }
    };
    const auto total = run_trials(config, 2 * cells, kernel);
    CoverageSweep out;
    out.thresholds = thresholds;
    out.tau_max = tau;
    for (std::size_t k = 0; k < cells; ++k)
        out.estimates.push_back(
            CoverageEstimate::from_counts(total[2 * k], total[2 * k + 1], config.trials));
    return out;
}

CoverageEstimate estimate_mean_covered(const SystemParams& params, const SimConfig& config)
{
    return estimate_mean_covered_sweep({params.threshold}, params, config).at(0, params.tau_m);
}

JointCoverageEstimate estimate_joint_coverage(double d1, double d2, double separation, int n,
                                              const SystemParams& params,
                                              const SimConfig& config)
{
    config.validate(params);
    if (n < 1 || n >= kMaxSlots)
        throw ConfigError("estimate_joint_coverage: n out of range");
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(separation >= 0.0))
        throw ConfigError("estimate_joint_coverage: distances must be positive");
    const double slack = 1e-12 * std::max({d1, d2, separation});
    if (separation < std::abs(d1 - d2) - slack || separation > d1 + d2 + slack)
        throw ConfigError("estimate_joint_coverage: no receiver pair has these distances");
    const bool same = separation == 0.0;
    const double cos_t =
        std::clamp((d1 * d1 + d2 * d2 - separation * separation) / (2.0 * d1 * d2), -1.0, 1.0);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    std::vector<Point> rx{Point{d1 * cos_t, d1 * sin_t}};
    if (!same)
        rx.emplace_back(d2, 0.0);
    const double w = config.resolved_window(params);
    const double t = params.threshold;
    auto kernel = [&](std::uint32_t trial, long long* acc) {
        TrialChannel channel(params, config, w, trial);
        std::vector<double> sinr;
        channel.d2d(rx, n, sinr);
        const std::size_t m_count = rx.size();
        bool ok1 = true, ok2 = true;
        for (int k = 0; k < n; ++k) {
            ok1 = ok1 && sinr[k * m_count] >= t;
            ok2 = ok2 && sinr[k * m_count + (same ? 0 : 1)] >= t;
        }
        acc[0] += ok1 && ok2;
        acc[1] += ok1;
        acc[2] += ok2;
    };
    const auto total = run_trials(config, 3, kernel);
    JointCoverageEstimate out;
    out.joint = CoverageEstimate::from_bernoulli(total[0], config.trials);
    out.marginal1 = CoverageEstimate::from_bernoulli(total[1], config.trials);
    out.marginal2 = CoverageEstimate::from_bernoulli(total[2], config.trials);
    out.conditional = CoverageEstimate::from_bernoulli(total[0], total[2]);
    return out;
}

CoverageEstimate estimate_null_fraction(const SystemParams& params, const SimConfig& config)
{
    config.validate(params);
    const PathLossModel model = params.path_loss();
    // a receiver is within reach when its mean noise-limited SNR meets the threshold
    auto reached = [&](const Point& y) {
        return params.p_d2d >= params.threshold * params.noise_power * model(y.norm());
    };
    auto kernel = [&](std::uint32_t trial, long long* acc) {
        auto stream = typical_cluster_stream(config, trial);
        const auto rx = sample_cluster(params.lambda_r, params.cluster_radius,
                                       config.min_link_distance, stream);
        acc[0] += std::none_of(rx.begin(), rx.end(), reached);
    };
    const auto total = run_trials(config, 1, kernel);
    return CoverageEstimate::from_bernoulli(total[0], config.trials);
}

} // namespace mcd2d

#include "xdc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xdc/error.hpp"

namespace xdc {

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
        if (!std::isfinite(c.stddev) || c.stddev < 0.0) throw ConfigError("mixture stddevs must be finite and >= 0");
        if (!(c.mean.shape() == components_.front().mean.shape())) {
            throw ConfigError("mixture means differ in shape: " + c.mean.shape().to_string() + " vs " +
                              components_.front().mean.shape().to_string());
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");
}

std::vector<double> GaussianMixture::responsibilities(const ImageGrid& x_t, int t, const NoiseSchedule& sched) const {
    require_same_shape(x_t.shape(), shape(), "oracle query");
    if (t < 1 || t > sched.steps()) throw StepError("oracle step " + std::to_string(t) + " out of range");
    const double ab = sched.alpha_bar(t);
    const double root = std::sqrt(ab);
    const double dim = static_cast<double>(x_t.size());
    const auto xs = x_t.values();

    std::vector<double> logp(components_.size());
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        const double var = ab * c.stddev * c.stddev + (1.0 - ab);
        const auto mu = c.mean.values();
        double sq = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = xs[i] - root * mu[i];
            sq += d * d;
        }
        logp[k] = std::log(c.weight) - 0.5 * dim * std::log(var) - 0.5 * sq / var;
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    double norm = 0.0;
    for (double& v : logp) {
        v = std::exp(v - top);
        norm += v;
    }
    for (double& v : logp) v /= norm;
    return logp;
}

ImageGrid GaussianMixture::posterior_mean(const ImageGrid& x_t, int t, const NoiseSchedule& sched) const {
    const auto gamma = responsibilities(x_t, t, sched);
    const double ab = sched.alpha_bar(t);
    const double root = std::sqrt(ab);
    ImageGrid mean(x_t.shape());
    auto out = mean.values();
    const auto xs = x_t.values();
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (gamma[k] == 0.0) continue;
        const auto& c = components_[k];
        const double s2 = c.stddev * c.stddev;
        const double gain = root * s2 / (ab * s2 + 1.0 - ab);
        const auto mu = c.mean.values();
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += gamma[k] * (mu[i] + gain * (xs[i] - root * mu[i]));
        }
    }
    return mean;
}

ImageGrid GaussianMixture::sample(Rng& rng) const {
    double u = rng.uniform();
    std::size_t k = 0;
    for (; k + 1 < components_.size(); ++k) {
        if (u < components_[k].weight) break;
        u -= components_[k].weight;
    }
    ImageGrid x = components_[k].mean;
    for (double& v : x.values()) v += components_[k].stddev * rng.normal();
    return x;
}

ImageGrid oracle_eps(const ImageGrid& x_t, int t, const GaussianMixture& mixture, const NoiseSchedule& sched) {
    return eps_from_x0(x_t, mixture.posterior_mean(x_t, t, sched), t, sched);
}

OracleDenoiser::OracleDenoiser(GaussianMixture mixture, NoiseSchedule schedule)
    : mixture_(std::move(mixture)), schedule_(std::move(schedule)) {}

NoisePrediction OracleDenoiser::predict(const DenoiserRequest& request) {
    return {oracle_eps(request.x_t, request.step, mixture_, schedule_), std::nullopt};
}

}  // namespace xdc

#pragma once

#include <vector>

#include "xdc/denoiser.hpp"
#include "xdc/rng.hpp"
#include "xdc/schedule.hpp"

namespace xdc {

struct MixtureComponent {
    double weight;
    ImageGrid mean;
    double stddev;
};

/// Isotropic Gaussian mixture over whole grids: sum_k w_k N(mu_k, s_k^2 I).
///
/// Under the forward process its noisy marginal at step t is again a mixture,
/// with means sqrt(ab) mu_k and variances ab s_k^2 + 1 - ab, so the posterior
/// mean E[x0 | x_t] and hence the ideal noise prediction are exact.
class GaussianMixture {
public:
    /// Throws ConfigError unless weights are positive and sum to 1 within 1e-9,
    /// stddevs are finite and non-negative, and all means share one shape.
    explicit GaussianMixture(std::vector<MixtureComponent> components);

    [[nodiscard]] const std::vector<MixtureComponent>& components() const { return components_; }
    [[nodiscard]] const GridShape& shape() const { return components_.front().mean.shape(); }

    /// Posterior component probabilities given x_t (log-domain normalised).
    [[nodiscard]] std::vector<double> responsibilities(const ImageGrid& x_t, int t, const NoiseSchedule& sched) const;
    [[nodiscard]] ImageGrid posterior_mean(const ImageGrid& x_t, int t, const NoiseSchedule& sched) const;

    /// Exact draw from the mixture.
    [[nodiscard]] ImageGrid sample(Rng& rng) const;

private:
    std::vector<MixtureComponent> components_;
};

/// eps_hat = (x_t - sqrt(ab) E[x0 | x_t]) / sqrt(1 - ab).
[[nodiscard]] ImageGrid oracle_eps(const ImageGrid& x_t, int t, const GaussianMixture& mixture,
                                   const NoiseSchedule& sched);

/// Denoiser backend that answers with oracle_eps; conditions are ignored.
class OracleDenoiser final : public Denoiser {
public:
    OracleDenoiser(GaussianMixture mixture, NoiseSchedule schedule);

    [[nodiscard]] GridShape grid_shape() const override { return mixture_.shape(); }
    [[nodiscard]] int step_count() const override { return schedule_.steps(); }
    [[nodiscard]] NoisePrediction predict(const DenoiserRequest& request) override;

    [[nodiscard]] const GaussianMixture& mixture() const { return mixture_; }

private:
    GaussianMixture mixture_;
    NoiseSchedule schedule_;
};

}  // namespace xdc

#include "xdc/schedule.hpp"

#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>

#include "xdc/error.hpp"

namespace xdc {

namespace {

constexpr double kMaxSigma = 0.999;

void require_step(const NoiseSchedule& sched, int t, int lowest) {
    if (t < lowest || t > sched.steps()) {
        throw StepError("step " + std::to_string(t) + " outside [" + std::to_string(lowest) + ", " +
                        std::to_string(sched.steps()) + "]");
    }
}

// a * x + b * y elementwise.
ImageGrid axpby(double a, const ImageGrid& x, double b, const ImageGrid& y) {
    require_same_shape(x.shape(), y.shape(), "noise combination");
    ImageGrid out(x.shape());
    const auto xs = x.values();
    const auto ys = y.values();
    auto os = out.values();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = a * xs[i] + b * ys[i];
    return out;
}

}  // namespace

NoiseSchedule::NoiseSchedule(std::vector<double> sigma) : sigma_(std::move(sigma)) {
    alpha_.resize(sigma_.size());
    alpha_bar_.resize(sigma_.size());
    alpha_[0] = 1.0;
    alpha_bar_[0] = 1.0;
    for (std::size_t t = 1; t < sigma_.size(); ++t) {
        alpha_[t] = 1.0 - sigma_[t];
        alpha_bar_[t] = alpha_bar_[t - 1] * alpha_[t];
    }
}

NoiseSchedule NoiseSchedule::linear(int steps) {
    if (steps < 1) throw ScheduleError("schedule needs at least one step, got " + std::to_string(steps));
    const double scale = 1000.0 / steps;
    const double start = 1e-4 * scale;
    const double end = 0.02 * scale;
    std::vector<double> sigma(static_cast<std::size_t>(steps) + 1, 0.0);
    for (int i = 0; i < steps; ++i) {
        const double s = steps == 1 ? start : start + (end - start) * i / (steps - 1);
        sigma[static_cast<std::size_t>(i) + 1] = std::min(s, kMaxSigma);
    }
    return NoiseSchedule(std::move(sigma));
}

NoiseSchedule NoiseSchedule::from_sigmas(std::span<const double> sigmas) {
    if (sigmas.empty()) throw ScheduleError("schedule needs at least one step");
    std::vector<double> sigma{0.0};
    for (double s : sigmas) {
        if (!(s >= 0.0 && s < 1.0)) throw ScheduleError("sigma values must lie in [0, 1)");
        sigma.push_back(s);
    }
    return NoiseSchedule(std::move(sigma));
}

std::string NoiseSchedule::to_config_block() const {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "schedule.kind = linear-sigma\n";
    os << "schedule.steps = " << steps() << "\n";
    os << "schedule.sigma_first = " << sigma(1) << "\n";
    os << "schedule.sigma_last = " << sigma(steps()) << "\n";
    os << "schedule.alpha_bar_last = " << alpha_bar(steps()) << "\n";
    os << "schedule.digest = " << std::hex << std::setw(16) << std::setfill('0') << digest() << "\n";
    return os.str();
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t NoiseSchedule::digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto* arr : {&sigma_, &alpha_, &alpha_bar_}) {
        const auto bytes = std::as_bytes(std::span<const double>(*arr));
        h = fnv1a({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()}, h);
    }
    return h;
}

ImageGrid forward_noise(const ImageGrid& x0, int t, const ImageGrid& eps, const NoiseSchedule& sched) {
    require_step(sched, t, 0);
    const double ab = sched.alpha_bar(t);
    return axpby(std::sqrt(ab), x0, std::sqrt(1.0 - ab), eps);
}

ImageGrid predict_x0(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched) {
    require_step(sched, t, 1);
    const double ab = sched.alpha_bar(t);
    const double root = std::sqrt(ab);
    return axpby(1.0 / root, x_t, -std::sqrt(1.0 - ab) / root, eps_hat);
}

ImageGrid eps_from_x0(const ImageGrid& x_t, const ImageGrid& x0, int t, const NoiseSchedule& sched) {
    require_step(sched, t, 1);
    const double ab = sched.alpha_bar(t);
    const double noise = std::sqrt(1.0 - ab);
    return axpby(1.0 / noise, x_t, -std::sqrt(ab) / noise, x0);
}

ImageGrid renoise(const ImageGrid& x_prev, int t, const ImageGrid& z, const NoiseSchedule& sched) {
    require_step(sched, t, 1);
    return axpby(std::sqrt(sched.alpha(t)), x_prev, std::sqrt(sched.sigma(t)), z);
}

}  // namespace xdc

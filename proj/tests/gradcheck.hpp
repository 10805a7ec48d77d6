#pragma once

#include <algorithm>
#include <cmath>

#include "construct/denoiser.hpp"
#include "construct/noise_schedule.hpp"

namespace testutil {

struct GradCheckResult {
  double worst_relative_error = 0.0;
  int coordinates = 0;
};

/// Compares loss_and_gradient against central differences with step h on `count` random
/// weight coordinates. Relative error is |a - f| / max(|a|, |f|, 1e-6); the floor keeps
/// coordinates whose features are identically zero from dividing 0 by 0.
inline GradCheckResult gradient_check(construct::FeaturizedDenoiser model, const construct::LabeledGraph& clean,
                                      const construct::NoiseSchedule& schedule, double lambda, int count,
                                      construct::Rng& rng, double h = 1e-5) {
  using namespace construct;
  for (auto* w : {&model.node_weights(), &model.edge_weights()})
    for (Eigen::Index k = 0; k < w->size(); ++k) w->data()[k] = 0.5 * (2.0 * uniform01(rng) - 1.0);

  const int t = 1 + static_cast<int>(uniform_index(static_cast<std::uint64_t>(schedule.steps()), rng));
  const auto noisy = apply_forward(clean, t, schedule, rng);

  Eigen::MatrixXd gn = Eigen::MatrixXd::Zero(model.node_weights().rows(), model.node_weights().cols());
  Eigen::MatrixXd ge = Eigen::MatrixXd::Zero(model.edge_weights().rows(), model.edge_weights().cols());
  model.loss_and_gradient(noisy, t, clean, lambda, &gn, &ge);

  GradCheckResult r;
  const auto node_size = model.node_weights().size();
  const auto total = node_size + model.edge_weights().size();
  for (int c = 0; c < count; ++c) {
    const auto k = static_cast<Eigen::Index>(uniform_index(static_cast<std::uint64_t>(total), rng));
    double* w = k < node_size ? model.node_weights().data() + k : model.edge_weights().data() + (k - node_size);
    const double analytic = k < node_size ? gn.data()[k] : ge.data()[k - node_size];
    const double saved = *w;
    *w = saved + h;
    const double up = model.loss_and_gradient(noisy, t, clean, lambda, nullptr, nullptr);
    *w = saved - h;
    const double down = model.loss_and_gradient(noisy, t, clean, lambda, nullptr, nullptr);
    *w = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    r.worst_relative_error = std::max(r.worst_relative_error, std::abs(analytic - numeric) / denom);
    ++r.coordinates;
  }
  return r;
}

}  // namespace testutil

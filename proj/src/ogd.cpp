#include <cmath>
#include <string>

#include "aol/error.hpp"
#include "aol/learners.hpp"

namespace aol {

namespace {

void softmax_inplace(std::vector<double>& z) {
  double top = z[0];
  for (double v : z) top = std::max(top, v);
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

}  // namespace

OgdModel::OgdModel(std::size_t n_features, std::size_t n_classes, std::size_t hidden, Rng& init_rng)
    : d_(n_features), c_(n_classes), h_(hidden) {
  const std::size_t in = h_ > 0 ? h_ : d_;
  std::size_t first_layer = 0;
  if (h_ > 0) first_layer = h_ * d_ + h_;
  out_w_ = first_layer;
  out_b_ = out_w_ + c_ * in;
  theta_.assign(out_b_ + c_, 0.0);
  // Output layer starts at zero so the untrained model is uniform; the hidden
  // layer needs random weights to break symmetry.
  if (h_ > 0) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_));
    for (std::size_t i = 0; i < h_ * d_; ++i) theta_[i] = init_rng.uniform(-scale, scale);
  }
}

OgdModel::Forward OgdModel::forward(std::span<const double> x) const {
  Forward f;
  if (h_ > 0) {
    f.hidden.resize(h_);
    for (std::size_t k = 0; k < h_; ++k) {
      double a = theta_[h_ * d_ + k];
      for (std::size_t j = 0; j < d_; ++j) a += theta_[k * d_ + j] * x[j];
      f.hidden[k] = std::tanh(a);
    }
  }
  const auto in = layer_input(f, x);
  f.proba.resize(c_);
  for (std::size_t c = 0; c < c_; ++c) {
    double z = theta_[out_b_ + c];
    for (std::size_t j = 0; j < in.size(); ++j) z += theta_[out_w_ + c * in.size() + j] * in[j];
    f.proba[c] = z;
  }
  softmax_inplace(f.proba);
  return f;
}

std::span<const double> OgdModel::layer_input(const Forward& f, std::span<const double> x) const {
  return h_ > 0 ? std::span<const double>(f.hidden) : x;
}

std::vector<double> OgdModel::proba(std::span<const double> x) const { return forward(x).proba; }

double OgdModel::loss(std::span<const double> x, ClassId y, double l2) const {
  const Forward f = forward(x);
  double reg = 0.0;
  for (double t : theta_) reg += t * t;
  return -std::log(f.proba[static_cast<std::size_t>(y)]) + 0.5 * l2 * reg;
}

std::vector<double> OgdModel::gradient(std::span<const double> x, ClassId y, double l2) const {
  const Forward f = forward(x);
  const auto in = layer_input(f, x);
  std::vector<double> grad(theta_.size(), 0.0);

  std::vector<double> dz = f.proba;
  dz[static_cast<std::size_t>(y)] -= 1.0;
  for (std::size_t c = 0; c < c_; ++c) {
    for (std::size_t j = 0; j < in.size(); ++j) grad[out_w_ + c * in.size() + j] = dz[c] * in[j];
    grad[out_b_ + c] = dz[c];
  }
  if (h_ > 0) {
    for (std::size_t k = 0; k < h_; ++k) {
      double dh = 0.0;
      for (std::size_t c = 0; c < c_; ++c) dh += theta_[out_w_ + c * h_ + k] * dz[c];
      const double da = dh * (1.0 - f.hidden[k] * f.hidden[k]);
      for (std::size_t j = 0; j < d_; ++j) grad[k * d_ + j] = da * x[j];
      grad[h_ * d_ + k] = da;
    }
  }
  for (std::size_t i = 0; i < theta_.size(); ++i) grad[i] += l2 * theta_[i];
  return grad;
}

void OgdModel::step(std::span<const double> x, ClassId y, double eta, double l2) {
  // gradient() already carries the l2 * theta term.
  std::vector<double> grad = gradient(x, y, l2);
  std::vector<double> next = theta_;
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (!std::isfinite(grad[i])) fail(ErrorCode::NumericError, "OGD gradient component " + std::to_string(i) + " is not finite");
    next[i] -= eta * grad[i];
    if (!std::isfinite(next[i])) fail(ErrorCode::NumericError, "OGD parameter " + std::to_string(i) + " diverged");
  }
  theta_ = std::move(next);
}

OgdLearner::OgdLearner(StreamSchema schema, OgdConfig config, std::uint64_t seed)
    : Learner(std::move(schema)),
      config_(config),
      init_rng_(seed),
      model_(this->schema().n_features, this->schema().n_classes(), config.hidden, init_rng_) {
  if (regression()) fail(ErrorCode::Unsupported, "OGD is classification-only");
  if (!(config_.learning_rate >= 0.0) || !(config_.l2 >= 0.0))
    fail(ErrorCode::InvalidArgument, "OGD learning_rate and l2 must be non-negative");
}

LearnerPtr OgdLearner::fresh(std::uint64_t seed) const { return std::make_unique<OgdLearner>(schema(), config_, seed); }

void OgdLearner::do_fit(std::span<const Instance> batch) {
  for (std::size_t e = 0; e < std::max<std::size_t>(config_.epochs, 1); ++e)
    for (const Instance& x : batch) do_update(x);
}

void OgdLearner::do_update(const Instance& x) { model_.step(x.features, *x.label, config_.learning_rate, config_.l2); }

std::vector<double> OgdLearner::do_proba(std::span<const double> features) const { return model_.proba(features); }

}  // namespace aol

#include "wsauc/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "wsauc/errors.hpp"

namespace wsauc {

std::string_view to_string(Architecture arch) {
  return arch == Architecture::kLinear ? "linear" : "mlp1";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "linear") return Architecture::kLinear;
  if (name == "mlp1") return Architecture::kMlp1;
  throw InputError("unknown architecture '" + std::string(name) + "'");
}

Index Model::param_count(Architecture arch, Index input_dim, Index hidden_width) {
  if (arch == Architecture::kLinear) return input_dim;
  return hidden_width * input_dim + 2 * hidden_width;
}

Model::Model(Architecture arch, Index input_dim, Index hidden_width)
    : Model(arch, input_dim, hidden_width,
            Vector::Zero(param_count(arch, input_dim, arch == Architecture::kMlp1 ? hidden_width : 0))) {}

Model::Model(Architecture arch, Index input_dim, Index hidden_width, Vector params)
    : arch_(arch),
      input_dim_(input_dim),
      hidden_width_(arch == Architecture::kMlp1 ? hidden_width : 0),
      params_(std::move(params)) {
  if (input_dim <= 0) throw InputError("Model: input dimension must be positive");
  if (arch == Architecture::kMlp1 && hidden_width <= 0)
    throw InputError("Model: hidden width must be positive");
  if (params_.size() != param_count(arch_, input_dim_, hidden_width_))
    throw InputError("Model: parameter vector length does not match architecture");
}

Model Model::linear(Vector weights) {
  const Index d = weights.size();
  return Model(Architecture::kLinear, d, 0, std::move(weights));
}

Model Model::initialized(Architecture arch, Index input_dim, Index hidden_width, std::uint64_t seed) {
  Model m(arch, input_dim, hidden_width);
  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  std::uniform_real_distribution<double> unif(-bound, bound);
  for (Index i = 0; i < m.params_.size(); ++i) m.params_[i] = unif(rng);
  return m;
}

void Model::set_params(Vector p) {
  if (p.size() != params_.size()) throw InputError("Model::set_params: length mismatch");
  params_ = std::move(p);
}

void Model::check_input(Index d) const {
  if (d != input_dim_)
    throw InputError("Model: input has dimension " + std::to_string(d) + ", expected " +
                     std::to_string(input_dim_));
}

double Model::score(const Eigen::Ref<const Vector>& x) const {
  check_input(x.size());
  if (arch_ == Architecture::kLinear) return params_.dot(x);
  const Index h = hidden_width_, d = input_dim_;
  Eigen::Map<const FeatureMatrix> w(params_.data(), h, d);
  const auto c = params_.segment(h * d, h);
  const auto v = params_.segment(h * d + h, h);
  return v.dot((w * x + c).array().tanh().matrix());
}

Vector Model::score_grad(const Eigen::Ref<const Vector>& x) const {
  check_input(x.size());
  if (arch_ == Architecture::kLinear) return x;
  const Index h = hidden_width_, d = input_dim_;
  Eigen::Map<const FeatureMatrix> w(params_.data(), h, d);
  const auto v = params_.segment(h * d + h, h);
  const Vector act = (w * x + params_.segment(h * d, h)).array().tanh().matrix();
  // d tanh(u) = 1 - tanh(u)^2
  const Vector delta = v.cwiseProduct((1.0 - act.array().square()).matrix());

  Vector g(params_.size());
  Eigen::Map<FeatureMatrix> gw(g.data(), h, d);
  gw.noalias() = delta * x.transpose();
  g.segment(h * d, h) = delta;
  g.segment(h * d + h, h) = act;
  return g;
}

Vector Model::scores(const FeatureMatrix& x) const {
  check_input(x.cols());
  // Row by row so that batch scores are bit-identical to score().
  Vector out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) out[i] = score(x.row(i).transpose());
  return out;
}

}  // namespace wsauc

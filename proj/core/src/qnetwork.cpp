#include "drinv/qnetwork.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "drinv/error.hpp"

namespace drinv {
namespace {

constexpr const char* kMagic = "drinv-qnetwork";
constexpr int kFormatVersion = 1;

bool bit_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return a.size() == 0 ||
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

double read_double(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw ParseError("checkpoint: truncated parameter list");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) throw ParseError("checkpoint: bad number '" + token + "'");
  return v;
}

}  // namespace

QNetwork::QNetwork(const std::vector<int>& sizes) {
  require(sizes.size() >= 2, "QNetwork: need at least input and output sizes");
  for (int s : sizes) require(s >= 1, "QNetwork: layer sizes must be >= 1");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    layers_.push_back({Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]), Eigen::VectorXd::Zero(sizes[l + 1])});
}

QNetwork QNetwork::initialized(const std::vector<int>& sizes, Rng& rng) {
  QNetwork net(sizes);
  for (auto& layer : net.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = dist(rng);
  }
  return net;
}

std::vector<int> QNetwork::sizes() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(static_cast<int>(layers_.front().weight.cols()));
  for (const auto& l : layers_) out.push_back(static_cast<int>(l.weight.rows()));
  return out;
}

int QNetwork::input_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int QNetwork::output_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::MatrixXd QNetwork::forward(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const {
  require(!layers_.empty(), "QNetwork::forward: empty network");
  require(inputs.rows() == input_size(), "QNetwork::forward: input size mismatch");
  Eigen::MatrixXd h = inputs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * h;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Eigen::VectorXd QNetwork::forward(std::span<const double> input) const {
  Eigen::Map<const Eigen::MatrixXd> x(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  return forward(x).col(0);
}

bool QNetwork::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

bool QNetwork::operator==(const QNetwork& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (!bit_equal(layers_[l].weight, other.layers_[l].weight)) return false;
    if (!bit_equal(layers_[l].bias, other.layers_[l].bias)) return false;
  }
  return true;
}

// Text format: magic, version, layer sizes, then each layer's weights
// (row-major) and biases as hexadecimal floats, which round-trip exactly.
void QNetwork::save(std::ostream& out) const {
  const auto s = sizes();
  out << kMagic << ' ' << kFormatVersion << '\n' << s.size();
  for (int v : s) out << ' ' << v;
  out << '\n' << std::hexfloat;
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out << (c ? " " : "") << l.weight(r, c);
      out << '\n';
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out << (r ? " " : "") << l.bias(r);
    out << '\n';
  }
  out << std::defaultfloat;
}

void QNetwork::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  save(out);
}

QNetwork QNetwork::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) throw ParseError("checkpoint: bad magic");
  if (version != kFormatVersion)
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  std::size_t count = 0;
  if (!(in >> count) || count < 2 || count > 64) throw ParseError("checkpoint: bad layer count");
  std::vector<int> sizes(count);
  for (auto& s : sizes)
    if (!(in >> s) || s < 1) throw ParseError("checkpoint: bad layer size");
  QNetwork net(sizes);
  for (auto& l : net.layers_) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = read_double(in);
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = read_double(in);
  }
  return net;
}

QNetwork QNetwork::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open checkpoint");
  return load(in);
}

Gradients gradient(const QNetwork& net, const Eigen::Ref<const Eigen::MatrixXd>& states,
                   std::span<const int> actions, std::span<const double> targets) {
  const auto batch = static_cast<Eigen::Index>(actions.size());
  require(batch > 0, "gradient: empty batch");
  require(states.cols() == batch && targets.size() == actions.size(),
          "gradient: batch dimensions disagree");
  require(states.rows() == net.input_size(), "gradient: input size mismatch");
  const auto& layers = net.layers();
  const std::size_t depth = layers.size();

  // Keep every layer's input for the backward pass.
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(depth + 1);
  acts.emplace_back(states);
  for (std::size_t l = 0; l < depth; ++l) {
    Eigen::MatrixXd z = layers[l].weight * acts.back();
    z.colwise() += layers[l].bias;
    if (l + 1 < depth) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
  }

  const Eigen::MatrixXd& q = acts.back();
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), batch);
  Gradients g;
  const double scale = 1.0 / static_cast<double>(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    require(a >= 0 && a < q.rows(), "gradient: action out of range");
    const double err = q(a, b) - targets[static_cast<std::size_t>(b)];
    g.loss += err * err * scale;
    delta(a, b) = 2.0 * err * scale;
  }

  g.layers.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    g.layers[l].weight = delta * acts[l].transpose();
    g.layers[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd back = layers[l].weight.transpose() * delta;
    // acts[l] is a rectifier output: positive exactly where the unit was active.
    delta = back.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
  }
  return g;
}

double td_loss(const QNetwork& net, const Eigen::Ref<const Eigen::MatrixXd>& states,
               std::span<const int> actions, std::span<const double> targets) {
  const Eigen::MatrixXd q = net.forward(states);
  double loss = 0.0;
  for (std::size_t b = 0; b < actions.size(); ++b) {
    const double err = q(actions[b], static_cast<Eigen::Index>(b)) - targets[b];
    loss += err * err;
  }
  return loss / static_cast<double>(actions.size());
}

void Optimizer::apply(QNetwork& net, Gradients& grads) {
  auto& layers = net.layers();
  require(grads.layers.size() == layers.size(), "Optimizer::apply: gradient shape mismatch");
  if (config_.max_grad_norm > 0.0) {
    double sq = 0.0;
    for (const auto& g : grads.layers) sq += g.weight.squaredNorm() + g.bias.squaredNorm();
    const double norm = std::sqrt(sq);
    if (norm > config_.max_grad_norm) {
      const double s = config_.max_grad_norm / norm;
      for (auto& g : grads.layers) {
        g.weight *= s;
        g.bias *= s;
      }
    }
  }

  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::sgd) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].weight -= lr * grads.layers[l].weight;
      layers[l].bias -= lr * grads.layers[l].bias;
    }
    return;
  }

  if (m_.empty()) {
    for (const auto& l : layers) {
      m_.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()), Eigen::VectorXd::Zero(l.bias.size())});
      v_.push_back(m_.back());
    }
  }
  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double step = lr * std::sqrt(c2) / c1;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = b1 * m + (1.0 - b1) * g;
      v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
      param.array() -= step * m.array() / (v.array().sqrt() + config_.epsilon);
    };
    update(layers[l].weight, m_[l].weight, v_[l].weight, grads.layers[l].weight);
    update(layers[l].bias, m_[l].bias, v_[l].bias, grads.layers[l].bias);
  }
}

}  // namespace drinv

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "drinv/catalog.hpp"

namespace drinv {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Fully connected network with rectifier hidden layers and a linear output
// layer. Samples are matrix columns.
class QNetwork {
 public:
  QNetwork() = default;
  // All parameters zero. `sizes` = {input, hidden..., output}.
  explicit QNetwork(const std::vector<int>& sizes);

  // He-uniform weights, zero biases.
  static QNetwork initialized(const std::vector<int>& sizes, Rng& rng);

  std::vector<int> sizes() const;
  int input_size() const;
  int output_size() const;
  std::size_t parameter_count() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  Eigen::MatrixXd forward(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const;
  Eigen::VectorXd forward(std::span<const double> input) const;

  bool all_finite() const;

  // Bitwise parameter equality.
  bool operator==(const QNetwork& other) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static QNetwork load(std::istream& in);
  static QNetwork load(const std::filesystem::path& path);

 private:
  std::vector<DenseLayer> layers_;
};

struct Gradients {
  std::vector<DenseLayer> layers;
  double loss = 0.0;
};

// Gradient of L = (1/B) sum_b (Q(s_b, a_b) - y_b)^2. Only the selected
// action's output receives error.
Gradients gradient(const QNetwork& net, const Eigen::Ref<const Eigen::MatrixXd>& states,
                   std::span<const int> actions, std::span<const double> targets);

double td_loss(const QNetwork& net, const Eigen::Ref<const Eigen::MatrixXd>& states,
               std::span<const int> actions, std::span<const double> targets);

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::sgd;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Rescale the gradient when its global norm exceeds this; 0 disables.
  double max_grad_norm = 0.0;

  bool operator==(const OptimizerConfig&) const = default;
};

class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) {}
  void apply(QNetwork& net, Gradients& grads);

 private:
  OptimizerConfig config_;
  std::vector<DenseLayer> m_, v_;
  long steps_ = 0;
};

}  // namespace drinv

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "irsuav/rng.hpp"

namespace irsuav {

enum class Activation { Relu, Tanh, Identity };

// Dense feed-forward network, double precision. Batched inputs are
// column-major: each column of a matrix is one sample.
struct Mlp {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Activation hidden_activation = Activation::Relu;
  Activation output_activation = Activation::Identity;
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  std::size_t layer_count() const { return weights.size(); }
};

// Weights drawn uniformly in +-1/sqrt(fan_in); `last_layer_scale` shrinks the
// final layer's weights and biases (actors start near the action-space
// centre with a scale of 1e-3).
Mlp make_mlp(const std::vector<int>& layer_sizes, Activation output_activation, RngStream& rng,
             double last_layer_scale = 1.0);

// Activations recorded by a forward pass; activations[0] is the input and
// activations[L] the output.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;
};

Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& input,
                        ForwardCache* cache = nullptr);
Eigen::VectorXd forward_one(const Mlp& net, const Eigen::VectorXd& input);

struct MlpGrads {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static MlpGrads zeros_like(const Mlp& net);
};

// Exact reverse-mode gradients for the pass recorded in `cache`.
// `output_seed` holds dLoss/dOutput per sample (same shape as the forward
// output); any loss normalisation belongs in the seed. Gradients are summed
// over the batch. When `input_grad` is non-null it receives dLoss/dInput,
// which is how critics feed action gradients back into an actor.
MlpGrads backward(const Mlp& net, const ForwardCache& cache, const Eigen::MatrixXd& output_seed,
                  Eigen::MatrixXd* input_grad = nullptr);

double global_norm(const MlpGrads& grads);
void clip_global_norm(MlpGrads& grads, double max_norm);

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;

  static AdamState for_mlp(const Mlp& net, double learning_rate);
};

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state);

// Adam for a single free parameter vector (e.g. a policy's log-std).
struct AdamVecState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  Eigen::VectorXd m, v;

  static AdamVecState for_vector(Eigen::Index size, double learning_rate);
};

void adam_step(Eigen::VectorXd& param, const Eigen::VectorXd& grad, AdamVecState& state);

// target <- mix * online + (1 - mix) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double mix);

// Text checkpoint: magic line, layer sizes, activations, then parameters in
// row-major hexfloat (exact round trip). save_adam/load_adam append the
// optimizer state in the same style.
void save_mlp(std::ostream& out, const Mlp& net);
Mlp load_mlp(std::istream& in);
void save_adam(std::ostream& out, const AdamState& state);
AdamState load_adam(std::istream& in, const Mlp& net);

}  // namespace irsuav

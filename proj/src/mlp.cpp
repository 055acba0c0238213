#include "irsuav/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace irsuav {

namespace {

Eigen::MatrixXd apply_activation(Eigen::MatrixXd z, Activation act) {
  switch (act) {
    case Activation::Relu:
      return z.cwiseMax(0.0);
    case Activation::Tanh:
      return z.array().tanh().matrix();
    case Activation::Identity:
      return z;
  }
  throw std::logic_error("apply_activation: unknown activation");
}

// Derivative expressed through the layer output; ReLU uses 0 at the kink.
Eigen::ArrayXXd activation_derivative(const Eigen::MatrixXd& output, Activation act) {
  switch (act) {
    case Activation::Relu:
      return (output.array() > 0.0).cast<double>();
    case Activation::Tanh:
      return 1.0 - output.array().square();
    case Activation::Identity:
      return Eigen::ArrayXXd::Ones(output.rows(), output.cols());
  }
  throw std::logic_error("activation_derivative: unknown activation");
}

void write_value(std::ostream& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  out << buf;
}

double read_value(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("checkpoint: unexpected end of stream");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str()) throw std::runtime_error("checkpoint: bad numeric token " + token);
  return v;
}

void expect_token(std::istream& in, const std::string& expected) {
  std::string token;
  if (!(in >> token) || token != expected)
    throw std::runtime_error("checkpoint: expected token '" + expected + "', got '" + token + "'");
}

const char* activation_name(Activation act) {
  switch (act) {
    case Activation::Relu:
      return "relu";
    case Activation::Tanh:
      return "tanh";
    case Activation::Identity:
      return "identity";
  }
  throw std::logic_error("activation_name: unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  throw std::runtime_error("checkpoint: unknown activation '" + name + "'");
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      write_value(out, m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("checkpoint: bad matrix header");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_value(in);
  return m;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    write_value(out, v[i]);
  }
  out << '\n';
}

Eigen::VectorXd read_vector(std::istream& in) {
  Eigen::Index size = 0;
  if (!(in >> size) || size < 0) throw std::runtime_error("checkpoint: bad vector header");
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = read_value(in);
  return v;
}

}  // namespace

Mlp make_mlp(const std::vector<int>& layer_sizes, Activation output_activation, RngStream& rng,
             double last_layer_scale) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("make_mlp: need at least two layers");
  for (int s : layer_sizes)
    if (s < 1) throw std::invalid_argument("make_mlp: layer sizes must be >= 1");

  Mlp net;
  net.layer_sizes = layer_sizes;
  net.output_activation = output_activation;
  const std::size_t layers = layer_sizes.size() - 1;
  net.weights.reserve(layers);
  net.biases.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    const double scale = (l + 1 == layers) ? last_layer_scale : 1.0;
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * rng.uniform(-bound, bound);
    Eigen::VectorXd b(fan_out);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = scale * rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& input, ForwardCache* cache) {
  if (input.rows() != net.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  if (cache) {
    cache->activations.clear();
    cache->activations.reserve(net.layer_count() + 1);
    cache->activations.push_back(input);
  }
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Activation act =
        (l + 1 == net.layer_count()) ? net.output_activation : net.hidden_activation;
    Eigen::MatrixXd z = (net.weights[l] * a).colwise() + net.biases[l];
    a = apply_activation(std::move(z), act);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

Eigen::VectorXd forward_one(const Mlp& net, const Eigen::VectorXd& input) {
  return forward(net, input);
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
  MlpGrads grads;
  grads.weights.reserve(net.layer_count());
  grads.biases.reserve(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    grads.weights.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    grads.biases.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return grads;
}

MlpGrads backward(const Mlp& net, const ForwardCache& cache, const Eigen::MatrixXd& output_seed,
                  Eigen::MatrixXd* input_grad) {
  const std::size_t layers = net.layer_count();
  if (cache.activations.size() != layers + 1)
    throw std::invalid_argument("backward: cache does not match network");
  if (output_seed.rows() != net.output_dim() ||
      output_seed.cols() != cache.activations.back().cols())
    throw std::invalid_argument("backward: seed shape mismatch");

  MlpGrads grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);
  Eigen::MatrixXd upstream = output_seed;
  for (std::size_t l = layers; l-- > 0;) {
    const Activation act = (l + 1 == layers) ? net.output_activation : net.hidden_activation;
    const Eigen::MatrixXd local =
        (upstream.array() * activation_derivative(cache.activations[l + 1], act)).matrix();
    grads.weights[l] = local * cache.activations[l].transpose();
    grads.biases[l] = local.rowwise().sum();
    if (l > 0 || input_grad) upstream = net.weights[l].transpose() * local;
  }
  if (input_grad) *input_grad = std::move(upstream);
  return grads;
}

double global_norm(const MlpGrads& grads) {
  double sum = 0.0;
  for (const auto& w : grads.weights) sum += w.squaredNorm();
  for (const auto& b : grads.biases) sum += b.squaredNorm();
  return std::sqrt(sum);
}

void clip_global_norm(MlpGrads& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (auto& w : grads.weights) w *= scale;
  for (auto& b : grads.biases) b *= scale;
}

AdamState AdamState::for_mlp(const Mlp& net, double learning_rate) {
  AdamState state;
  state.learning_rate = learning_rate;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    state.m_weights.emplace_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    state.v_weights.emplace_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    state.m_biases.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    state.v_biases.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return state;
}

namespace {

template <typename Tensor>
void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, const double lr,
                 const double beta1, const double beta2, const double epsilon, const long step) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v = (beta2 * v.array() + (1.0 - beta2) * grad.array().square()).matrix();
  const double m_correction = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double v_correction = 1.0 - std::pow(beta2, static_cast<double>(step));
  param.array() -=
      lr * (m.array() / m_correction) / ((v.array() / v_correction).sqrt() + epsilon);
}

}  // namespace

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state) {
  if (grads.weights.size() != net.layer_count())
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  ++state.step;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    adam_update(net.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l],
                state.learning_rate, state.beta1, state.beta2, state.epsilon, state.step);
    adam_update(net.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l],
                state.learning_rate, state.beta1, state.beta2, state.epsilon, state.step);
  }
}

AdamVecState AdamVecState::for_vector(Eigen::Index size, double learning_rate) {
  AdamVecState state;
  state.learning_rate = learning_rate;
  state.m = Eigen::VectorXd::Zero(size);
  state.v = Eigen::VectorXd::Zero(size);
  return state;
}

void adam_step(Eigen::VectorXd& param, const Eigen::VectorXd& grad, AdamVecState& state) {
  if (grad.size() != param.size()) throw std::invalid_argument("adam_step: vector size mismatch");
  ++state.step;
  adam_update(param, grad, state.m, state.v, state.learning_rate, state.beta1, state.beta2,
              state.epsilon, state.step);
}

void soft_update(Mlp& target, const Mlp& online, double mix) {
  if (target.layer_sizes != online.layer_sizes)
    throw std::invalid_argument("soft_update: network shapes differ");
  if (mix < 0.0 || mix > 1.0) throw std::invalid_argument("soft_update: mix must be in [0, 1]");
  for (std::size_t l = 0; l < target.layer_count(); ++l) {
    target.weights[l] = mix * online.weights[l] + (1.0 - mix) * target.weights[l];
    target.biases[l] = mix * online.biases[l] + (1.0 - mix) * target.biases[l];
  }
}

void save_mlp(std::ostream& out, const Mlp& net) {
  out << "irsuav-mlp 1\n";
  out << "layers " << net.layer_sizes.size();
  for (int s : net.layer_sizes) out << ' ' << s;
  out << '\n';
  out << "hidden " << activation_name(net.hidden_activation) << '\n';
  out << "output " << activation_name(net.output_activation) << '\n';
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    out << "weights " << l << ' ';
    write_matrix(out, net.weights[l]);
    out << "biases " << l << ' ';
    write_vector(out, net.biases[l]);
  }
  out << "end-mlp\n";
}

Mlp load_mlp(std::istream& in) {
  expect_token(in, "irsuav-mlp");
  expect_token(in, "1");
  expect_token(in, "layers");
  std::size_t count = 0;
  if (!(in >> count) || count < 2) throw std::runtime_error("checkpoint: bad layer count");
  Mlp net;
  net.layer_sizes.resize(count);
  for (auto& s : net.layer_sizes)
    if (!(in >> s) || s < 1) throw std::runtime_error("checkpoint: bad layer size");
  std::string name;
  expect_token(in, "hidden");
  in >> name;
  net.hidden_activation = activation_from_name(name);
  expect_token(in, "output");
  in >> name;
  net.output_activation = activation_from_name(name);
  const std::size_t layers = count - 1;
  net.weights.resize(layers);
  net.biases.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    expect_token(in, "weights");
    std::size_t index = 0;
    in >> index;
    net.weights[l] = read_matrix(in);
    expect_token(in, "biases");
    in >> index;
    net.biases[l] = read_vector(in);
    if (net.weights[l].rows() != net.layer_sizes[l + 1] ||
        net.weights[l].cols() != net.layer_sizes[l] ||
        net.biases[l].size() != net.layer_sizes[l + 1])
      throw std::runtime_error("checkpoint: parameter shape mismatch");
  }
  expect_token(in, "end-mlp");
  return net;
}

void save_adam(std::ostream& out, const AdamState& state) {
  out << "irsuav-adam 1\n";
  out << "hyper ";
  write_value(out, state.learning_rate);
  out << ' ';
  write_value(out, state.beta1);
  out << ' ';
  write_value(out, state.beta2);
  out << ' ';
  write_value(out, state.epsilon);
  out << ' ' << state.step << '\n';
  for (std::size_t l = 0; l < state.m_weights.size(); ++l) {
    out << "moments " << l << ' ';
    write_matrix(out, state.m_weights[l]);
    write_matrix(out, state.v_weights[l]);
    write_vector(out, state.m_biases[l]);
    write_vector(out, state.v_biases[l]);
  }
  out << "end-adam\n";
}

AdamState load_adam(std::istream& in, const Mlp& net) {
  expect_token(in, "irsuav-adam");
  expect_token(in, "1");
  expect_token(in, "hyper");
  AdamState state;
  state.learning_rate = read_value(in);
  state.beta1 = read_value(in);
  state.beta2 = read_value(in);
  state.epsilon = read_value(in);
  if (!(in >> state.step)) throw std::runtime_error("checkpoint: bad adam step");
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    expect_token(in, "moments");
    std::size_t index = 0;
    in >> index;
    state.m_weights.push_back(read_matrix(in));
    state.v_weights.push_back(read_matrix(in));
    state.m_biases.push_back(read_vector(in));
    state.v_biases.push_back(read_vector(in));
    if (state.m_weights[l].rows() != net.weights[l].rows() ||
        state.m_weights[l].cols() != net.weights[l].cols())
      throw std::runtime_error("checkpoint: adam moment shape mismatch");
  }
  expect_token(in, "end-adam");
  return state;
}

}  // namespace irsuav

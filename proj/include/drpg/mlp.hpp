#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "drpg/rng.hpp"

namespace drpg {

// Thrown when an update would leave non-finite parameters behind. The
// message carries enough context to identify the offending run.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// One-hidden-layer perceptron: output = w2 * relu(w1 * input + b1) + b2.
// w1 is hidden x input, w2 is output x hidden, both row-major, 64-bit floats.
struct MlpParams {
  int input_dim = 0;
  int hidden_dim = 0;
  int output_dim = 0;
  std::vector<double> w1, b1, w2, b2;
};

// Same shapes as the parameters they update; additive.
using Gradients = MlpParams;

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
MlpParams make_mlp(int input_dim, int hidden_dim, int output_dim, Rng& rng);

Gradients zero_gradients(const MlpParams& like);

std::vector<double> forward(const MlpParams& p, std::span<const double> input);
// Allocation-free variant for hot loops; hidden_scratch is resized as needed.
void forward(const MlpParams& p, std::span<const double> input,
             std::span<double> output, std::vector<double>& hidden_scratch);

// Exact reverse-mode gradients of <cotangent, forward(p, input)> with respect
// to every parameter.
Gradients backward(const MlpParams& p, std::span<const double> input,
                   std::span<const double> cotangent);
// Accumulates scale * backward(p, input, cotangent) into `into`.
void backward_accumulate(const MlpParams& p, std::span<const double> input,
                         std::span<const double> cotangent, double scale,
                         Gradients& into, std::vector<double>& hidden_scratch);

enum class StepDirection { ascent, descent };

// params +/- learning_rate * gradients, elementwise. Throws DivergenceError
// (tagged with `context`) if any resulting entry is non-finite.
void sgd_step(MlpParams& params, const Gradients& g, double learning_rate,
              StepDirection direction, const std::string& context = {});

// Fused params += scale * backward(params, input, cotangent), no gradient
// buffer. Reads the old output weights for the hidden backprop before
// overwriting them.
void apply_scaled_gradient(MlpParams& p, std::span<const double> input,
                           std::span<const double> cotangent, double scale,
                           std::vector<double>& hidden_scratch,
                           std::vector<double>& up_scratch);

void add_scaled(Gradients& into, const Gradients& g, double scale);
bool all_finite(const MlpParams& p);

// Flat binary layout: four u64 shape ints (w1 rows, w1 cols, w2 rows, w2
// cols), then row-major doubles in order w1, b1, w2, b2.
void save_params(const MlpParams& p, std::ostream& out);
MlpParams load_params(std::istream& in);
void save_params_file(const MlpParams& p, const std::string& path);
MlpParams load_params_file(const std::string& path);

}  // namespace drpg

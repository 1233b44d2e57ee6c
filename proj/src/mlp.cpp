#include "drpg/mlp.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

namespace drpg {

namespace {

void check_shapes(const MlpParams& p, std::size_t input_len, std::size_t cotangent_len) {
  if (input_len != static_cast<std::size_t>(p.input_dim))
    throw std::invalid_argument("mlp: input length " + std::to_string(input_len) +
                                " does not match input_dim " + std::to_string(p.input_dim));
  if (cotangent_len != 0 && cotangent_len != static_cast<std::size_t>(p.output_dim))
    throw std::invalid_argument("mlp: cotangent length " + std::to_string(cotangent_len) +
                                " does not match output_dim " + std::to_string(p.output_dim));
}

}  // namespace

MlpParams make_mlp(int input_dim, int hidden_dim, int output_dim, Rng& rng) {
  if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0)
    throw std::invalid_argument("mlp: dimensions must be positive");
  MlpParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  p.w1.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2.resize(static_cast<std::size_t>(output_dim) * hidden_dim);
  p.b2.assign(output_dim, 0.0);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (double& w : p.w1) w = (2.0 * rng.uniform01() - 1.0) * s1;
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& w : p.w2) w = (2.0 * rng.uniform01() - 1.0) * s2;
  return p;
}

Gradients zero_gradients(const MlpParams& like) {
  Gradients g;
  g.input_dim = like.input_dim;
  g.hidden_dim = like.hidden_dim;
  g.output_dim = like.output_dim;
  g.w1.assign(like.w1.size(), 0.0);
  g.b1.assign(like.b1.size(), 0.0);
  g.w2.assign(like.w2.size(), 0.0);
  g.b2.assign(like.b2.size(), 0.0);
  return g;
}

void forward(const MlpParams& p, std::span<const double> input,
             std::span<double> output, std::vector<double>& hidden_scratch) {
  check_shapes(p, input.size(), output.size());
  const int in = p.input_dim, hid = p.hidden_dim, out = p.output_dim;
  hidden_scratch.resize(hid);
  const double* w1 = p.w1.data();
  for (int h = 0; h < hid; ++h) {
    double acc = p.b1[h];
    const double* row = w1 + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < in; ++j) acc += row[j] * input[j];
    hidden_scratch[h] = acc > 0.0 ? acc : 0.0;
  }
  const double* w2 = p.w2.data();
  for (int o = 0; o < out; ++o) {
    double acc = p.b2[o];
    const double* row = w2 + static_cast<std::size_t>(o) * hid;
    for (int h = 0; h < hid; ++h) acc += row[h] * hidden_scratch[h];
    output[o] = acc;
  }
}

std::vector<double> forward(const MlpParams& p, std::span<const double> input) {
  std::vector<double> output(p.output_dim);
  std::vector<double> hidden;
  forward(p, input, output, hidden);
  return output;
}

void backward_accumulate(const MlpParams& p, std::span<const double> input,
                         std::span<const double> cotangent, double scale,
                         Gradients& into, std::vector<double>& hidden_scratch) {
  check_shapes(p, input.size(), cotangent.size());
  const int in = p.input_dim, hid = p.hidden_dim, out = p.output_dim;
  // Pre-activations first, rectified in place afterwards.
  hidden_scratch.resize(hid);
  for (int h = 0; h < hid; ++h) {
    double acc = p.b1[h];
    const double* row = p.w1.data() + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < in; ++j) acc += row[j] * input[j];
    hidden_scratch[h] = acc;
  }
  for (int o = 0; o < out; ++o) {
    const double c = scale * cotangent[o];
    into.b2[o] += c;
    double* grow = into.w2.data() + static_cast<std::size_t>(o) * hid;
    for (int h = 0; h < hid; ++h) {
      const double act = hidden_scratch[h] > 0.0 ? hidden_scratch[h] : 0.0;
      grow[h] += c * act;
    }
  }
  for (int h = 0; h < hid; ++h) {
    if (hidden_scratch[h] <= 0.0) continue;  // dead rectifier unit
    double up = 0.0;
    for (int o = 0; o < out; ++o)
      up += cotangent[o] * p.w2[static_cast<std::size_t>(o) * hid + h];
    up *= scale;
    into.b1[h] += up;
    double* grow = into.w1.data() + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < in; ++j) grow[j] += up * input[j];
  }
}

Gradients backward(const MlpParams& p, std::span<const double> input,
                   std::span<const double> cotangent) {
  Gradients g = zero_gradients(p);
  std::vector<double> hidden;
  backward_accumulate(p, input, cotangent, 1.0, g, hidden);
  return g;
}

void apply_scaled_gradient(MlpParams& p, std::span<const double> input,
                           std::span<const double> cotangent, double scale,
                           std::vector<double>& hidden_scratch,
                           std::vector<double>& up_scratch) {
  check_shapes(p, input.size(), cotangent.size());
  const int in = p.input_dim, hid = p.hidden_dim, out = p.output_dim;
  hidden_scratch.resize(hid);
  for (int h = 0; h < hid; ++h) {
    double acc = p.b1[h];
    const double* row = p.w1.data() + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < in; ++j) acc += row[j] * input[j];
    hidden_scratch[h] = acc;
  }
  // Hidden-layer upstream terms must be taken from w2 before it moves.
  up_scratch.resize(hid);
  for (int h = 0; h < hid; ++h) {
    double up = 0.0;
    for (int o = 0; o < out; ++o)
      up += cotangent[o] * p.w2[static_cast<std::size_t>(o) * hid + h];
    up_scratch[h] = up * scale;
  }
  for (int o = 0; o < out; ++o) {
    const double c = scale * cotangent[o];
    p.b2[o] += c;
    double* row = p.w2.data() + static_cast<std::size_t>(o) * hid;
    for (int h = 0; h < hid; ++h) {
      const double act = hidden_scratch[h] > 0.0 ? hidden_scratch[h] : 0.0;
      row[h] += c * act;
    }
  }
  for (int h = 0; h < hid; ++h) {
    if (hidden_scratch[h] <= 0.0) continue;
    const double up = up_scratch[h];
    p.b1[h] += up;
    double* row = p.w1.data() + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < in; ++j) row[j] += up * input[j];
  }
}

void add_scaled(Gradients& into, const Gradients& g, double scale) {
  for (std::size_t i = 0; i < into.w1.size(); ++i) into.w1[i] += scale * g.w1[i];
  for (std::size_t i = 0; i < into.b1.size(); ++i) into.b1[i] += scale * g.b1[i];
  for (std::size_t i = 0; i < into.w2.size(); ++i) into.w2[i] += scale * g.w2[i];
  for (std::size_t i = 0; i < into.b2.size(); ++i) into.b2[i] += scale * g.b2[i];
}

bool all_finite(const MlpParams& p) {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  return ok(p.w1) && ok(p.b1) && ok(p.w2) && ok(p.b2);
}

void sgd_step(MlpParams& params, const Gradients& g, double learning_rate,
              StepDirection direction, const std::string& context) {
  if (learning_rate <= 0.0) throw std::invalid_argument("sgd_step: learning rate must be positive");
  const double step = direction == StepDirection::ascent ? learning_rate : -learning_rate;
  add_scaled(params, g, step);
  if (!all_finite(params)) {
    throw DivergenceError("sgd_step produced non-finite parameters" +
                          (context.empty() ? std::string{} : " [" + context + "]"));
  }
}

// --- serialization ---

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void save_params(const MlpParams& p, std::ostream& out) {
  put_u64(out, static_cast<std::uint64_t>(p.hidden_dim));  // w1 rows
  put_u64(out, static_cast<std::uint64_t>(p.input_dim));   // w1 cols
  put_u64(out, static_cast<std::uint64_t>(p.output_dim));  // w2 rows
  put_u64(out, static_cast<std::uint64_t>(p.hidden_dim));  // w2 cols
  put_doubles(out, p.w1);
  put_doubles(out, p.b1);
  put_doubles(out, p.w2);
  put_doubles(out, p.b2);
  if (!out) throw std::runtime_error("save_params: write failed");
}

MlpParams load_params(std::istream& in) {
  MlpParams p;
  const std::uint64_t w1_rows = get_u64(in);
  const std::uint64_t w1_cols = get_u64(in);
  const std::uint64_t w2_rows = get_u64(in);
  const std::uint64_t w2_cols = get_u64(in);
  if (!in || w1_rows == 0 || w1_cols == 0 || w2_rows == 0 || w2_cols != w1_rows)
    throw std::runtime_error("load_params: bad header");
  p.hidden_dim = static_cast<int>(w1_rows);
  p.input_dim = static_cast<int>(w1_cols);
  p.output_dim = static_cast<int>(w2_rows);
  p.w1.resize(w1_rows * w1_cols);
  p.b1.resize(w1_rows);
  p.w2.resize(w2_rows * w2_cols);
  p.b2.resize(w2_rows);
  get_doubles(in, p.w1);
  get_doubles(in, p.b1);
  get_doubles(in, p.w2);
  get_doubles(in, p.b2);
  if (!in) throw std::runtime_error("load_params: truncated record");
  return p;
}

void save_params_file(const MlpParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_params: cannot open " + path);
  save_params(p, out);
}

MlpParams load_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_params: cannot open " + path);
  return load_params(in);
}

}  // namespace drpg

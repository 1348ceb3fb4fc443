#include "zonemon/autoencoder.hpp"

#include "zonemon/rng.hpp"
#include "zonemon/stats.hpp"

#include <chrono>
#include <cmath>

namespace zonemon {

namespace {

inline Mat sigmoid(const Mat& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

inline Vec sigmoid_vec(const Vec& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

Vec forward_vec(const AutoencoderModel& m, const Vec& z) {
  Vec a = z;
  for (size_t l = 0; l < m.weights.size(); ++l)
    a = sigmoid_vec(m.weights[l] * a + m.biases[l]);
  return a;
}

void check_dataset(const Dataset& ds, DatasetRole expected, const char* name) {
  if (ds.x.rows() == 0) throw ConfigError(std::string(name) + " dataset is empty");
  if (ds.x.cols() != kFeatureDim)
    throw ConfigError(std::string(name) + " dataset rows must have 115 features");
  if (ds.role != expected) throw ConfigError(std::string(name) + " dataset has wrong role");
}

std::vector<int> layer_dims(const std::vector<int>& hidden) {
  if (hidden.empty()) throw ConfigError("hidden layer list must not be empty");
  for (int h : hidden)
    if (h <= 0) throw ConfigError("hidden layer sizes must be positive");
  if (hidden.back() >= kFeatureDim)
    throw ConfigError("innermost hidden size must be smaller than the input (compression)");
  std::vector<int> dims;
  dims.push_back(kFeatureDim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  for (auto it = hidden.rbegin() + 1; it != hidden.rend(); ++it) dims.push_back(*it);
  dims.push_back(kFeatureDim);
  return dims;
}

// forward pass over a column-per-sample batch, keeping activations
std::vector<Mat> forward_all(const AutoencoderModel& m, const Mat& input_cols) {
  std::vector<Mat> acts;
  acts.reserve(m.weights.size() + 1);
  acts.push_back(input_cols);
  for (size_t l = 0; l < m.weights.size(); ++l)
    acts.push_back(sigmoid((m.weights[l] * acts.back()).colwise() + m.biases[l]));
  return acts;
}

double mean_mse_cols(const AutoencoderModel& m, const Mat& cols) {
  Mat a = cols;
  for (size_t l = 0; l < m.weights.size(); ++l)
    a = sigmoid((m.weights[l] * a).colwise() + m.biases[l]);
  return (a - cols).array().square().colwise().sum().mean() / kFeatureDim;
}

}  // namespace

Normalizer Normalizer::fit(const Mat& rows) {
  Normalizer n;
  n.min = rows.colwise().minCoeff();
  n.max = rows.colwise().maxCoeff();
  return n;
}

Vec Normalizer::apply(const Vec& x) const {
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double range = max[i] - min[i];
    out[i] = range > 0.0 ? (x[i] - min[i]) / range : 0.0;
  }
  return out;
}

Mat Normalizer::apply_rows(const Mat& rows) const {
  Mat out(rows.rows(), rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    out.row(r) = apply(rows.row(r).transpose()).transpose();
  return out;
}

std::vector<int> AutoencoderModel::dims() const {
  std::vector<int> d;
  d.push_back(static_cast<int>(weights.front().cols()));
  for (const Mat& w : weights) d.push_back(static_cast<int>(w.rows()));
  return d;
}

Digest config_fingerprint(const TrainConfig& cfg) {
  ByteWriter w;
  w.f64(cfg.learning_rate);
  w.u32(static_cast<uint32_t>(cfg.epochs));
  w.u32(static_cast<uint32_t>(cfg.batch_size));
  w.u32(static_cast<uint32_t>(cfg.hidden.size()));
  for (int h : cfg.hidden) w.u32(static_cast<uint32_t>(h));
  w.u64(cfg.seed);
  w.u32(static_cast<uint32_t>(cfg.patience));
  return sha256(w.data());
}

AutoencoderModel train(const Dataset& t_ds, const Dataset& opt_ds, const TrainConfig& cfg) {
  check_dataset(t_ds, DatasetRole::Train, "training");
  check_dataset(opt_ds, DatasetRole::Optimize, "optimization");
  if (cfg.epochs < 1) throw ConfigError("must train at least one epoch");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (!(cfg.learning_rate > 0)) throw ConfigError("learning rate must be positive");
  if (cfg.patience < 1) throw ConfigError("patience must be at least 1");

  const std::vector<int> dims = layer_dims(cfg.hidden);
  const size_t n_layers = dims.size() - 1;

  AutoencoderModel m;
  m.norm = Normalizer::fit(t_ds.x);
  m.fingerprint = config_fingerprint(cfg);

  Rng rng(cfg.seed);
  m.weights.reserve(n_layers);
  m.biases.reserve(n_layers);
  for (size_t l = 0; l < n_layers; ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double r = std::sqrt(6.0 / (fan_in + fan_out));
    Mat w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-r, r);
    m.weights.push_back(std::move(w));
    m.biases.push_back(Vec::Zero(fan_out));
  }

  // column-per-sample layout for batched products
  const Mat train_cols = m.norm.apply_rows(t_ds.x).transpose();
  const Mat opt_cols = m.norm.apply_rows(opt_ds.x).transpose();
  const Eigen::Index n = train_cols.cols();

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;

  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates with the run RNG keeps epochs reproducible
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(static_cast<uint32_t>(i))]);

    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(cfg.batch_size, n - start);
      Mat batch(kFeatureDim, b);
      for (Eigen::Index i = 0; i < b; ++i)
        batch.col(i) = train_cols.col(order[static_cast<size_t>(start + i)]);

      const std::vector<Mat> acts = forward_all(m, batch);
      // delta for the output layer of the batch-mean MSE loss
      Mat delta = (2.0 / (kFeatureDim * static_cast<double>(b))) *
                  ((acts.back() - batch).array() * acts.back().array() *
                   (1.0 - acts.back().array()))
                      .matrix();
      for (size_t l = n_layers; l-- > 0;) {
        const Mat grad_w = delta * acts[l].transpose();
        const Vec grad_b = delta.rowwise().sum();
        if (l > 0)
          delta = ((m.weights[l].transpose() * delta).array() * acts[l].array() *
                   (1.0 - acts[l].array()))
                      .matrix();
        m.weights[l] -= cfg.learning_rate * grad_w;
        m.biases[l] -= cfg.learning_rate * grad_b;
      }
    }

    const double loss = mean_mse_cols(m, opt_cols);
    if (!std::isfinite(loss))
      throw TrainingError("training diverged at epoch " + std::to_string(epoch));
    if (loss < best) {
      best = loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;  // optimization-set MSE stopped decreasing
    }
  }
  return m;
}

double reconstruction_mse(const AutoencoderModel& model, const Vec& x) {
  if (x.size() != kFeatureDim) throw RecordError("input is not 115-dimensional");
  if (!x.allFinite()) throw RecordError("non-finite feature vector");
  const Vec z = model.norm.apply(x);
  return (forward_vec(model, z) - z).squaredNorm() / kFeatureDim;
}

double compute_threshold(AutoencoderModel& model, const Dataset& opt_ds) {
  check_dataset(opt_ds, DatasetRole::Optimize, "optimization");
  std::vector<double> mses;
  mses.reserve(static_cast<size_t>(opt_ds.x.rows()));
  for (Eigen::Index r = 0; r < opt_ds.x.rows(); ++r)
    mses.push_back(reconstruction_mse(model, opt_ds.x.row(r).transpose()));
  model.threshold = mean_plus_sample_std(mses);
  return *model.threshold;
}

Classification classify(const AutoencoderModel& model, const Vec& x) {
  if (!model.threshold)
    throw CalibrationError("model threshold unset; calibrate before classifying");
  const double score = reconstruction_mse(model, x);
  return {score > *model.threshold, score};
}

std::vector<MonitorEvent> monitor(const AutoencoderModel& model, const Mat& instances) {
  if (!model.threshold)
    throw CalibrationError("model threshold unset; calibrate before monitoring");
  std::vector<MonitorEvent> out;
  out.reserve(static_cast<size_t>(instances.rows()));
  bool in_episode = false;
  for (Eigen::Index r = 0; r < instances.rows(); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const Classification c = classify(model, instances.row(r).transpose());
    const auto t1 = std::chrono::steady_clock::now();
    MonitorEvent ev;
    ev.malicious = c.malicious;
    ev.score = c.score;
    ev.alert = c.malicious && !in_episode;
    ev.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    in_episode = c.malicious;
    out.push_back(ev);
  }
  return out;
}

Gradients backprop_gradients(const AutoencoderModel& model, const Vec& x) {
  const Vec z = model.norm.apply(x);
  const size_t n_layers = model.weights.size();
  const std::vector<Mat> acts = forward_all(model, z);

  Gradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  Mat delta = (2.0 / kFeatureDim) *
              ((acts.back() - z).array() * acts.back().array() *
               (1.0 - acts.back().array()))
                  .matrix();
  for (size_t l = n_layers; l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta.col(0);
    if (l > 0)
      delta = ((model.weights[l].transpose() * delta).array() * acts[l].array() *
               (1.0 - acts[l].array()))
                  .matrix();
  }
  return g;
}

bool gradients_match_numeric(const AutoencoderModel& model, const Vec& x,
                             const Gradients& grads, double rel_tol, double* max_rel_err) {
  constexpr double kStep = 1e-5;
  constexpr double kAbsFloor = 1e-8;
  AutoencoderModel probe = model;
  const Vec z = model.norm.apply(x);

  auto loss = [&]() { return (forward_vec(probe, z) - z).squaredNorm() / kFeatureDim; };

  double worst = 0.0;
  bool ok = true;
  auto compare = [&](double analytic, double& param) {
    const double saved = param;
    param = saved + kStep;
    const double up = loss();
    param = saved - kStep;
    const double down = loss();
    param = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double err = std::abs(analytic - numeric);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    const double rel = err / std::max(scale, kAbsFloor / rel_tol);
    worst = std::max(worst, rel);
    if (err > rel_tol * scale + kAbsFloor) ok = false;
  };

  for (size_t l = 0; l < probe.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < probe.weights[l].rows(); ++i)
      for (Eigen::Index j = 0; j < probe.weights[l].cols(); ++j)
        compare(grads.weights[l](i, j), probe.weights[l](i, j));
    for (Eigen::Index i = 0; i < probe.biases[l].size(); ++i)
      compare(grads.biases[l][i], probe.biases[l][i]);
  }
  if (max_rel_err) *max_rel_err = worst;
  return ok;
}

bool gradient_check(const AutoencoderModel& model, const Vec& x, double rel_tol,
                    double* max_rel_err) {
  return gradients_match_numeric(model, x, backprop_gradients(model, x), rel_tol,
                                 max_rel_err);
}

Bytes serialize_model(const AutoencoderModel& model) {
  ByteWriter w;
  w.u32(0x4D45415Au);  // "ZAEM"
  w.u32(1);            // format version
  const std::vector<int> dims = model.dims();
  w.u32(static_cast<uint32_t>(dims.size()));
  for (int d : dims) w.u32(static_cast<uint32_t>(d));
  for (size_t l = 0; l < model.weights.size(); ++l) {
    const Mat& wm = model.weights[l];
    for (Eigen::Index i = 0; i < wm.rows(); ++i)
      for (Eigen::Index j = 0; j < wm.cols(); ++j) w.f64(wm(i, j));
    for (Eigen::Index i = 0; i < model.biases[l].size(); ++i) w.f64(model.biases[l][i]);
  }
  for (Eigen::Index i = 0; i < kFeatureDim; ++i) w.f64(model.norm.min[i]);
  for (Eigen::Index i = 0; i < kFeatureDim; ++i) w.f64(model.norm.max[i]);
  w.u8(model.threshold ? 1 : 0);
  w.f64(model.threshold ? *model.threshold : 0.0);
  w.bytes(model.fingerprint);
  return w.take();
}

AutoencoderModel deserialize_model(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != 0x4D45415Au) throw ParseError("not a model artifact");
  if (r.u32() != 1) throw ParseError("unsupported model format version");
  const uint32_t n_dims = r.u32();
  if (n_dims < 2 || n_dims > 64) throw ParseError("implausible layer count");
  std::vector<int> dims(n_dims);
  for (auto& d : dims) d = static_cast<int>(r.u32());
  if (dims.front() != kFeatureDim || dims.back() != kFeatureDim)
    throw ParseError("model input/output dimension must be 115");

  AutoencoderModel m;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    Mat w(dims[l + 1], dims[l]);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = r.f64();
    Vec b(dims[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = r.f64();
    m.weights.push_back(std::move(w));
    m.biases.push_back(std::move(b));
  }
  m.norm.min = Vec(kFeatureDim);
  m.norm.max = Vec(kFeatureDim);
  for (Eigen::Index i = 0; i < kFeatureDim; ++i) m.norm.min[i] = r.f64();
  for (Eigen::Index i = 0; i < kFeatureDim; ++i) m.norm.max[i] = r.f64();
  const bool has_threshold = r.u8() != 0;
  const double th = r.f64();
  if (has_threshold) m.threshold = th;
  const Bytes fp = r.bytes(32);
  std::copy(fp.begin(), fp.end(), m.fingerprint.begin());
  if (!r.done()) throw ParseError("trailing bytes in model artifact");
  return m;
}

}  // namespace zonemon

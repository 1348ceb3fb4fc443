#pragma once

#include "zonemon/bytes.hpp"
#include "zonemon/crypto.hpp"
#include "zonemon/types.hpp"

#include <optional>
#include <vector>

namespace zonemon {

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DatasetRole { Train, Optimize, Eval };

// Rows are samples, 115 columns. Train and Optimize sets carry benign
// data only; that is the caller's contract, labels never enter here.
struct Dataset {
  Mat x;
  DatasetRole role = DatasetRole::Train;
};

// Per-feature min-max scaling fitted on the training set. Constant
// features map to 0.
struct Normalizer {
  Vec min;
  Vec max;

  static Normalizer fit(const Mat& rows);
  Vec apply(const Vec& x) const;
  Mat apply_rows(const Mat& rows) const;
};

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 150;
  int batch_size = 32;
  // Encoder stack; the decoder mirrors it. Dimension ratios of the
  // default are 0.75/0.5/0.33/0.25 of the input.
  std::vector<int> hidden = {86, 58, 38, 29};
  uint64_t seed = 1;
  int patience = 5;  // epochs without optimization-set improvement
};

Digest config_fingerprint(const TrainConfig& cfg);

// Symmetric autoencoder, sigmoid on every hidden layer and on the output.
// weights[l] maps activations of layer l to pre-activations of layer l+1.
struct AutoencoderModel {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Normalizer norm;
  std::optional<double> threshold;  // decision threshold on MSE, unset until calibrated
  Digest fingerprint{};

  std::vector<int> dims() const;
};

// Mini-batch gradient descent on reconstruction MSE over the normalized
// training set. Halts when the optimization-set MSE stops improving for
// `patience` consecutive epochs or `epochs` is reached. Deterministic per
// seed. Returned model has no threshold yet.
// Throws TrainingError (naming the epoch) if the loss turns non-finite.
AutoencoderModel train(const Dataset& t_ds, const Dataset& opt_ds, const TrainConfig& cfg);

// Mean over the 115 dimensions of squared (normalized input - reconstruction).
double reconstruction_mse(const AutoencoderModel& model, const Vec& x);

// threshold = mean + sample standard deviation of the MSEs over opt_ds;
// stored in the model and returned.
double compute_threshold(AutoencoderModel& model, const Dataset& opt_ds);

struct Classification {
  bool malicious = false;
  double score = 0.0;  // reconstruction MSE
};

// Malicious iff score strictly exceeds the threshold; equality is benign.
// Throws CalibrationError when the threshold is unset.
Classification classify(const AutoencoderModel& model, const Vec& x);

struct MonitorEvent {
  bool malicious = false;
  double score = 0.0;
  bool alert = false;  // first malicious verdict of a contiguous episode
  double latency_ms = 0.0;
};

// Per-instance verdicts in arrival order, wall-clock scoring time each.
std::vector<MonitorEvent> monitor(const AutoencoderModel& model, const Mat& instances);

// Analytic gradients of the single-sample reconstruction loss.
struct Gradients {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
};

Gradients backprop_gradients(const AutoencoderModel& model, const Vec& x);

// Compares supplied gradients against central finite differences
// (h = 1e-5) at the given relative tolerance.
bool gradients_match_numeric(const AutoencoderModel& model, const Vec& x,
                             const Gradients& grads, double rel_tol,
                             double* max_rel_err = nullptr);

bool gradient_check(const AutoencoderModel& model, const Vec& x, double rel_tol,
                    double* max_rel_err = nullptr);

// Versioned binary model artifact: dims, weights, normalizer, threshold,
// training config fingerprint. Layout in docs/formats.md.
Bytes serialize_model(const AutoencoderModel& model);
AutoencoderModel deserialize_model(std::span<const uint8_t> bytes);

}  // namespace zonemon

#pragma once

#include "zonemon/autoencoder.hpp"
#include "zonemon/traffic.hpp"
#include "zonemon/types.hpp"
#include "zonemon/zone.hpp"

#include <string>
#include <vector>

namespace zonemon {

uint64_t seed_u64(uint64_t seed, const std::string& tag);

struct AttackWindow {
  int64_t onset_ms = 0;  // strictly after the training horizon
  int64_t scan_ms = 600;
  int64_t flood_ms = 400;
};

struct EvalScenario {
  std::vector<DeviceProfile> profiles;
  // Records before the warmup horizon only feed the damped statistics;
  // the 60 s half-life needs several multiples of itself to reach the
  // stationary regime both splits must share.
  int64_t stat_warmup_ms = 0;
  int64_t train_horizon_ms = 0;   // vectors in [warmup, horizon) train the detectors
  int64_t total_duration_ms = 0;  // vectors in [horizon, total) are evaluated
  AttackWindow attack;            // applied to every device
  uint64_t seed = 1;
  TrainConfig detector;
  int iforest_psi = 256;
  int iforest_trees = 100;
  int lof_k = 20;
  int lof_max_reference = 1000;  // reference subsample cap, for tractable scoring
  // exact per-device eval sizes (0 = keep everything)
  std::vector<int> eval_benign_per_device;
  std::vector<int> eval_attack_per_device;
};

// The built-in synthetic scenario: three device archetypes, 10,000 benign
// and 2,000 attack evaluation instances in total.
EvalScenario default_scenario(uint64_t seed);

struct MetricsRow {
  DeviceId device;
  std::string detector;
  double tpr = 0.0;
  double fpr = 0.0;
  double mean_latency_ms = 0.0;
  int64_t alert_delay_instances = -1;  // -1: attack never alerted
};

struct ScoreTrace {
  DeviceId device;
  std::string detector;
  double threshold = 0.0;
  std::vector<double> scores;            // eval stream, arrival order
  std::vector<bool> verdicts;
  std::vector<GroundTruthLabel> labels;  // ground truth, never seen by detectors
};

struct BenchResult {
  std::vector<MetricsRow> rows;
  std::vector<ScoreTrace> traces;
};

// Episode-alert monitoring of a score stream; shared by every detector.
std::vector<MonitorEvent> monitor_stream(const CalibratedScorer& scorer,
                                         const std::vector<Vec>& instances);

// Per device: generate benign + attack traffic, extract features in
// stream order, train and calibrate each detector on the benign split
// (2:1 train/optimization, seeded random partition), then score the
// evaluation stream. Deterministic per seed apart from wall-clock
// latency fields.
BenchResult run_benchmark(const EvalScenario& scenario);

// Per-device grouped comparison tables (accuracy and timing); detectors
// as columns. The svm column is reserved for externally supplied scores.
std::string compare_report(const std::vector<MetricsRow>& rows);

// metrics.csv schema:
// device,detector,tpr,fpr,mean_latency_ms,alert_delay_instances
void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> load_metrics_csv(const std::string& path);

// scores CSV schema: sample_index,detector,score,verdict
void write_scores_csv(const std::string& path, const ScoreTrace& trace);

// Confusion-matrix metrics from verdicts plus ground truth.
struct Confusion {
  size_t true_positive = 0, false_positive = 0, true_negative = 0, false_negative = 0;
  double tpr() const;
  double fpr() const;
};
Confusion count_confusion(const std::vector<bool>& verdicts,
                          const std::vector<GroundTruthLabel>& labels);

}  // namespace zonemon

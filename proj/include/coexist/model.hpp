#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coexist {

/**
 * @brief Dense row-major matrix used for allocation and cost tables.
 */
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T row_sum(std::size_t r) const {
    T s{};
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
  }
  T col_sum(std::size_t c) const {
    T s{};
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
    return s;
  }
  T total() const {
    T s{};
    for (const T& v : data_) s += v;
    return s;
  }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Penalized successive upper-bound minimization constants.
struct PsumParams {
  double sigma1 = 2.0;
  double eps1 = 0.001;
  double eta = 0.7;
  double zeta = 1.1;
  std::size_t i_max = 20;
  double p = 0.5;

  bool operator==(const PsumParams&) const = default;
};

/**
 * @brief Scenario parameters for one downlink cell.
 *
 * Defaults reproduce the reference desk setup: 10 eMBB UEs on 50 RBs of
 * 180 kHz, 1 ms slots split into 8 mini-slots of 0.125 ms, 21 dBm per
 * service. `noise_dbm_hz` is a spectral density; the default places the
 * noise power of one RB at -114 dBm.
 */
struct SystemConfig {
  std::size_t n_embb = 10;
  std::size_t n_rb = 50;
  double bandwidth_hz = 180e3;
  double slot_s = 1e-3;
  double minislot_s = 0.125e-3;
  std::size_t minislots_per_slot = 8;
  std::size_t n_slots = 1000;
  double p_embb_dbm = 21.0;
  double p_urllc_dbm = 21.0;
  double noise_dbm_hz = -166.552725051033;
  /// Mean uRLLC arrivals per mini-slot; unset means "same as arrival_std".
  std::optional<double> arrival_mean;
  double arrival_std = 1.0;
  double reliability_eps = 0.01;
  std::size_t payload_bytes = 32;
  double decode_err = 1e-5;
  PsumParams psum;
  double cell_radius_m = 200.0;
  double min_distance_m = 10.0;
  double carrier_hz = 2e9;
  /// Channel uses per RB per mini-slot; unset means minislot_s * bandwidth_hz.
  std::optional<double> blocklength;
  /// Charge a full slot rate per punctured RB-mini-slot (audit mode).
  bool literal_eq10 = false;

  double mean_arrivals() const { return arrival_mean.value_or(arrival_std); }
  double blocklength_symbols() const {
    return blocklength.value_or(minislot_s * bandwidth_hz);
  }

  bool operator==(const SystemConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns `raw` unchanged, or throws ConfigError naming the first violated
/// invariant.
SystemConfig validate_config(const SystemConfig& raw);

/// Parses the flat `key = value` format. Unknown keys and malformed values
/// throw ConfigError. The result is validated.
SystemConfig parse_config(const std::string& text);
SystemConfig load_config(const std::string& path);

/// Applies one `key=value` override (same keys as the config file) without
/// validating. `payload` is accepted as an alias of `payload_bytes`.
void set_config_value(SystemConfig& cfg, const std::string& key,
                      const std::string& value);

std::string format_config(const SystemConfig& cfg);

double dbm_to_mw(double dbm);

/// Linear-scale powers derived once from a validated config.
struct LinkBudget {
  double p_embb_mw;
  double p_urllc_mw;
  double n0_mw_hz;
};
LinkBudget link_budget(const SystemConfig& cfg);

/// Binary eMBB assignment for one slot; rows are UEs, columns are RBs.
struct EmbbAllocation {
  Matrix<std::uint8_t> alpha;
  std::size_t slot_index = 0;

  std::size_t n_embb() const { return alpha.rows(); }
  std::size_t n_rb() const { return alpha.cols(); }
  std::size_t holdings(std::size_t e) const;
  /// Owning UE of RB k, or nullopt if the RB is idle.
  std::optional<std::size_t> owner(std::size_t k) const;
};

/// Empty when the allocation is a valid orthogonal assignment in which every
/// UE holds at least one RB; otherwise a description of the violation.
std::optional<std::string> allocation_violation(const EmbbAllocation& a);

/// Per-mini-slot puncturing decision; rows of beta are served requests.
struct PunctureRecord {
  Matrix<std::uint8_t> beta;
  std::vector<std::uint8_t> phi;
  /// RBs each request needed; a served request with zero demand holds none.
  std::vector<std::size_t> demand;
  std::size_t minislot_index = 0;
  std::size_t slot_index = 0;

  std::size_t punctured_rbs() const;
};

std::optional<std::string> puncture_violation(const PunctureRecord& r,
                                              std::size_t n_rb);

/**
 * @brief Per-UE rate bookkeeping across slots.
 *
 * Nominal rate, loss and actual rate are kept in bits per slot. Losses are
 * accumulated during a slot and folded into the cumulative actual rate by
 * close_slot().
 */
class RateLedger {
 public:
  RateLedger() = default;
  RateLedger(std::size_t n_embb, std::size_t minislots_per_slot,
             bool literal_loss = false);

  std::size_t n_embb() const { return cumulative_.size(); }
  std::size_t minislots_per_slot() const { return minislots_; }
  bool literal_loss() const { return literal_; }
  /// Number of closed slots.
  std::size_t slots_closed() const { return history_.size(); }

  /// Starts a slot with per-UE per-RB rates (bits per slot) and holdings.
  void open_slot(std::vector<double> rb_rate, std::vector<std::size_t> holdings);
  bool slot_open() const { return open_; }

  /// Bits lost by UE e when one of its RBs is punctured for one mini-slot.
  double cell_loss(std::size_t e) const;

  void add_loss(const std::vector<double>& bits);
  void close_slot();

  const std::vector<double>& cumulative_actual() const { return cumulative_; }
  const std::vector<double>& nominal() const { return nominal_; }
  const std::vector<double>& slot_loss() const { return loss_; }
  const std::vector<double>& rb_rate() const { return rb_rate_; }
  /// Losses of the most recently closed slot (zeros before the first).
  const std::vector<double>& previous_loss() const { return previous_loss_; }
  /// Actual rate of every closed slot, indexed [slot][ue].
  const std::vector<std::vector<double>>& history() const { return history_; }

 private:
  std::size_t minislots_ = 1;
  bool literal_ = false;
  bool open_ = false;
  std::vector<double> cumulative_;
  std::vector<double> nominal_;
  std::vector<double> loss_;
  std::vector<double> rb_rate_;
  std::vector<double> previous_loss_;
  std::vector<std::vector<double>> history_;
};

}  // namespace coexist

#include "coexist/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace coexist {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError("invalid number for '" + key + "': '" + value + "'");
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid count for '" + key + "': '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ConfigError("invalid flag for '" + key + "': '" + value + "'");
}

using Setter = std::function<void(SystemConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto count = [&t](const std::string& k, std::size_t SystemConfig::*m) {
      t[k] = [m](SystemConfig& c, const std::string& key, const std::string& v) {
        c.*m = parse_count(key, v);
      };
    };
    auto real = [&t](const std::string& k, double SystemConfig::*m) {
      t[k] = [m](SystemConfig& c, const std::string& key, const std::string& v) {
        c.*m = parse_double(key, v);
      };
    };
    auto psum_real = [&t](const std::string& k, double PsumParams::*m) {
      t[k] = [m](SystemConfig& c, const std::string& key, const std::string& v) {
        c.psum.*m = parse_double(key, v);
      };
    };
    count("n_embb", &SystemConfig::n_embb);
    count("n_rb", &SystemConfig::n_rb);
    real("bandwidth_hz", &SystemConfig::bandwidth_hz);
    real("slot_s", &SystemConfig::slot_s);
    real("minislot_s", &SystemConfig::minislot_s);
    count("minislots_per_slot", &SystemConfig::minislots_per_slot);
    count("n_slots", &SystemConfig::n_slots);
    real("p_embb_dbm", &SystemConfig::p_embb_dbm);
    real("p_urllc_dbm", &SystemConfig::p_urllc_dbm);
    real("noise_dbm_hz", &SystemConfig::noise_dbm_hz);
    t["arrival_mean"] = [](SystemConfig& c, const std::string& key, const std::string& v) {
      c.arrival_mean = parse_double(key, v);
    };
    real("arrival_std", &SystemConfig::arrival_std);
    real("reliability_eps", &SystemConfig::reliability_eps);
    count("payload_bytes", &SystemConfig::payload_bytes);
    real("decode_err", &SystemConfig::decode_err);
    real("cell_radius_m", &SystemConfig::cell_radius_m);
    real("min_distance_m", &SystemConfig::min_distance_m);
    real("carrier_hz", &SystemConfig::carrier_hz);
    t["blocklength"] = [](SystemConfig& c, const std::string& key, const std::string& v) {
      c.blocklength = parse_double(key, v);
    };
    t["literal_eq10"] = [](SystemConfig& c, const std::string& key, const std::string& v) {
      c.literal_eq10 = parse_bool(key, v);
    };
    psum_real("psum.sigma1", &PsumParams::sigma1);
    psum_real("psum.eps1", &PsumParams::eps1);
    psum_real("psum.eta", &PsumParams::eta);
    psum_real("psum.zeta", &PsumParams::zeta);
    psum_real("psum.p", &PsumParams::p);
    t["psum.i_max"] = [](SystemConfig& c, const std::string& key, const std::string& v) {
      c.psum.i_max = parse_count(key, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

SystemConfig validate_config(const SystemConfig& raw) {
  const auto fail = [](const std::string& what) { throw ConfigError(what); };

  if (raw.n_embb < 1) fail("n_embb must be at least 1");
  if (raw.n_rb < raw.n_embb) {
    fail("n_rb < n_embb: cannot give every eMBB UE at least one RB");
  }
  if (!(raw.bandwidth_hz > 0)) fail("bandwidth_hz must be positive");
  if (!(raw.slot_s > 0) || !(raw.minislot_s > 0)) {
    fail("slot_s and minislot_s must be positive");
  }
  if (raw.minislots_per_slot < 1) fail("minislots_per_slot must be at least 1");
  const double implied = static_cast<double>(raw.minislots_per_slot) * raw.minislot_s;
  if (std::abs(implied - raw.slot_s) > 1e-12 * raw.slot_s) {
    fail("slot timing mismatch: minislots_per_slot * minislot_s != slot_s");
  }
  if (raw.n_slots < 1) fail("n_slots must be at least 1");
  if (!(raw.reliability_eps > 0 && raw.reliability_eps < 1)) {
    fail("reliability_eps must lie in (0, 1)");
  }
  if (!(raw.decode_err > 0 && raw.decode_err < 0.5)) {
    fail("decode_err must lie in (0, 0.5)");
  }
  if (!(raw.arrival_std >= 0)) fail("arrival_std must be non-negative");
  if (!(raw.cell_radius_m > 0)) fail("cell_radius_m must be positive");
  if (!(raw.min_distance_m > 0 && raw.min_distance_m < raw.cell_radius_m)) {
    fail("min_distance_m must lie in (0, cell_radius_m)");
  }
  if (!(raw.carrier_hz > 0)) fail("carrier_hz must be positive");
  if (raw.blocklength && !(*raw.blocklength > 0)) fail("blocklength must be positive");

  const PsumParams& p = raw.psum;
  if (!(p.sigma1 > 0)) fail("psum.sigma1 must be positive");
  if (!(p.eps1 >= 0)) fail("psum.eps1 must be non-negative");
  if (!(p.eta > 0 && p.eta < 1)) fail("psum.eta must lie in (0, 1)");
  if (!(p.zeta > 1)) fail("psum.zeta must exceed 1");
  if (!(p.p > 0 && p.p < 1)) fail("psum.p must lie in (0, 1)");
  return raw;
}

void set_config_value(SystemConfig& cfg, const std::string& key,
                      const std::string& value) {
  const std::string k = key == "payload" ? std::string("payload_bytes") : key;
  const auto& table = setters();
  const auto it = table.find(k);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, k, value);
}

SystemConfig parse_config(const std::string& text) {
  SystemConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return validate_config(cfg);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const SystemConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "n_embb = " << c.n_embb << '\n'
      << "n_rb = " << c.n_rb << '\n'
      << "bandwidth_hz = " << c.bandwidth_hz << '\n'
      << "slot_s = " << c.slot_s << '\n'
      << "minislot_s = " << c.minislot_s << '\n'
      << "minislots_per_slot = " << c.minislots_per_slot << '\n'
      << "n_slots = " << c.n_slots << '\n'
      << "p_embb_dbm = " << c.p_embb_dbm << '\n'
      << "p_urllc_dbm = " << c.p_urllc_dbm << '\n'
      << "noise_dbm_hz = " << c.noise_dbm_hz << '\n';
  if (c.arrival_mean) out << "arrival_mean = " << *c.arrival_mean << '\n';
  out << "arrival_std = " << c.arrival_std << '\n'
      << "reliability_eps = " << c.reliability_eps << '\n'
      << "payload_bytes = " << c.payload_bytes << '\n'
      << "decode_err = " << c.decode_err << '\n'
      << "cell_radius_m = " << c.cell_radius_m << '\n'
      << "min_distance_m = " << c.min_distance_m << '\n'
      << "carrier_hz = " << c.carrier_hz << '\n';
  if (c.blocklength) out << "blocklength = " << *c.blocklength << '\n';
  out << "literal_eq10 = " << (c.literal_eq10 ? "true" : "false") << '\n'
      << "psum.sigma1 = " << c.psum.sigma1 << '\n'
      << "psum.eps1 = " << c.psum.eps1 << '\n'
      << "psum.eta = " << c.psum.eta << '\n'
      << "psum.zeta = " << c.psum.zeta << '\n'
      << "psum.i_max = " << c.psum.i_max << '\n'
      << "psum.p = " << c.psum.p << '\n';
  return out.str();
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

LinkBudget link_budget(const SystemConfig& cfg) {
  return {dbm_to_mw(cfg.p_embb_dbm), dbm_to_mw(cfg.p_urllc_dbm),
          dbm_to_mw(cfg.noise_dbm_hz)};
}

std::size_t EmbbAllocation::holdings(std::size_t e) const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < alpha.cols(); ++k) n += alpha(e, k) != 0;
  return n;
}

std::optional<std::size_t> EmbbAllocation::owner(std::size_t k) const {
  for (std::size_t e = 0; e < alpha.rows(); ++e) {
    if (alpha(e, k) != 0) return e;
  }
  return std::nullopt;
}

std::optional<std::string> allocation_violation(const EmbbAllocation& a) {
  const auto& m = a.alpha;
  std::size_t total = 0;
  for (std::size_t k = 0; k < m.cols(); ++k) {
    std::size_t col = 0;
    for (std::size_t e = 0; e < m.rows(); ++e) {
      if (m(e, k) > 1) return "non-binary alpha entry";
      col += m(e, k);
    }
    if (col > 1) return "RB " + std::to_string(k) + " assigned to several UEs";
    total += col;
  }
  for (std::size_t e = 0; e < m.rows(); ++e) {
    if (a.holdings(e) < 1) return "UE " + std::to_string(e) + " holds no RB";
  }
  if (total > m.cols()) return "more assignments than RBs";
  return std::nullopt;
}

std::size_t PunctureRecord::punctured_rbs() const {
  std::size_t n = 0;
  for (auto v : beta.data()) n += v;
  return n;
}

std::optional<std::string> puncture_violation(const PunctureRecord& r,
                                              std::size_t n_rb) {
  const auto& b = r.beta;
  if (b.rows() != r.phi.size() || b.rows() != r.demand.size()) {
    return "record dimensions inconsistent";
  }
  if (b.rows() > 0 && b.cols() != n_rb) return "beta width differs from n_rb";
  for (std::size_t k = 0; k < b.cols(); ++k) {
    if (b.col_sum(k) > 1) return "RB " + std::to_string(k) + " punctured twice";
  }
  std::size_t total = 0;
  for (std::size_t u = 0; u < b.rows(); ++u) {
    const std::size_t held = b.row_sum(u);
    if (r.phi[u] == 0 && held != 0) {
      return "unserved request " + std::to_string(u) + " holds RBs";
    }
    if (r.phi[u] != 0 && held < std::min<std::size_t>(1, r.demand[u])) {
      return "served request " + std::to_string(u) + " holds no RB";
    }
    if (r.phi[u] != 0 && held != r.demand[u]) {
      return "request " + std::to_string(u) + " holds a different RB count than it needs";
    }
    total += held;
  }
  if (total > n_rb) return "more punctured RBs than available";
  return std::nullopt;
}

RateLedger::RateLedger(std::size_t n_embb, std::size_t minislots_per_slot,
                       bool literal_loss)
    : minislots_(minislots_per_slot),
      literal_(literal_loss),
      cumulative_(n_embb, 0.0),
      nominal_(n_embb, 0.0),
      loss_(n_embb, 0.0),
      rb_rate_(n_embb, 0.0),
      previous_loss_(n_embb, 0.0) {
  if (minislots_per_slot == 0) throw std::invalid_argument("minislots_per_slot == 0");
}

void RateLedger::open_slot(std::vector<double> rb_rate,
                           std::vector<std::size_t> holdings) {
  if (open_) throw std::logic_error("slot already open");
  if (rb_rate.size() != n_embb() || holdings.size() != n_embb()) {
    throw std::invalid_argument("ledger slot dimensions differ from n_embb");
  }
  rb_rate_ = std::move(rb_rate);
  for (std::size_t e = 0; e < n_embb(); ++e) {
    nominal_[e] = rb_rate_[e] * static_cast<double>(holdings[e]);
  }
  std::fill(loss_.begin(), loss_.end(), 0.0);
  open_ = true;
}

double RateLedger::cell_loss(std::size_t e) const {
  return literal_ ? rb_rate_[e] : rb_rate_[e] / static_cast<double>(minislots_);
}

void RateLedger::add_loss(const std::vector<double>& bits) {
  if (!open_) throw std::logic_error("no open slot");
  if (bits.size() != n_embb()) throw std::invalid_argument("loss vector size");
  for (std::size_t e = 0; e < n_embb(); ++e) {
    if (bits[e] < 0) throw std::invalid_argument("negative loss");
    loss_[e] += bits[e];
  }
}

void RateLedger::close_slot() {
  if (!open_) throw std::logic_error("no open slot");
  std::vector<double> actual(n_embb());
  for (std::size_t e = 0; e < n_embb(); ++e) {
    if (loss_[e] > nominal_[e]) {
      // Literal accounting may charge more than a slot carries; otherwise
      // only rounding noise can push the loss past the nominal rate.
      if (literal_ || loss_[e] <= nominal_[e] * (1 + 1e-9)) {
        loss_[e] = nominal_[e];
      } else {
        throw std::logic_error("loss exceeds nominal rate for UE " + std::to_string(e));
      }
    }
    actual[e] = nominal_[e] - loss_[e];
    cumulative_[e] += actual[e];
  }
  previous_loss_ = loss_;
  history_.push_back(std::move(actual));
  open_ = false;
}

}  // namespace coexist

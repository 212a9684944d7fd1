// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gossiplab/util.hpp"

namespace gossiplab::netsim {

// Per-hop one-way latency, either lognormal (parameterized by median and
// log-space sigma) or an empirical histogram of (upper_ms, weight) bins with
// uniform draw inside a bin. Sampled delays are always >= 1 ms.
struct DelayModel {
  enum class Kind { Lognormal, Histogram };

  Kind kind = Kind::Lognormal;
  double median_ms = 200.0;
  double sigma = 0.45;
  std::vector<std::pair<double, double>> histogram;  // (upper_ms, weight)
  double processing_ms = 12.0;                       // per-message handling cost

  int64_t SampleLinkDelayMs(Rng& rng) const {
    double d = 1.0;
    if (kind == Kind::Lognormal) {
      d = rng.NextLognormal(std::log(median_ms), sigma);
    } else {
      if (histogram.empty()) throw std::invalid_argument("empty delay histogram");
      double total = 0;
      for (auto& [up, w] : histogram) total += w;
      double u = rng.NextDouble() * total;
      double lower = 0;
      for (auto& [up, w] : histogram) {
        if (u < w) {
          d = lower + rng.NextDouble() * (up - lower);
          break;
        }
        u -= w;
        lower = up;
      }
    }
    int64_t ms = static_cast<int64_t>(d);
    return ms < 1 ? 1 : ms;
  }
};

// Client arrival/session churn plus the tabulated server disconnect curve:
// P(a given server is gone after dt), monotone non-decreasing in dt.
struct ChurnModel {
  bool enabled = false;
  double client_arrival_per_hour = 0.0;
  double session_median_s = 7200.0;
  double session_sigma = 0.8;
  // (dt_s, cumulative disconnect probability), monotone in both coordinates.
  std::vector<std::pair<int64_t, double>> server_disconnect_curve;

  // Inverse-CDF sample of a server lifetime; entries past the last curve
  // point never disconnect (returns -1).
  int64_t SampleServerLifetimeS(Rng& rng) const {
    if (server_disconnect_curve.empty()) return -1;
    double u = rng.NextDouble();
    int64_t prev_t = 0;
    double prev_p = 0.0;
    for (auto& [t, p] : server_disconnect_curve) {
      if (u <= p) {
        double frac = (p - prev_p) <= 0 ? 0.0 : (u - prev_p) / (p - prev_p);
        return prev_t + static_cast<int64_t>(frac * static_cast<double>(t - prev_t));
      }
      prev_t = t;
      prev_p = p;
    }
    return -1;
  }

  void Validate() const {
    double last = 0.0;
    int64_t last_t = -1;
    for (auto& [t, p] : server_disconnect_curve) {
      if (p < 0.0 || p > 1.0) throw std::invalid_argument("disconnect curve probability outside [0,1]");
      if (p < last || t <= last_t) throw std::invalid_argument("disconnect curve must be monotone");
      last = p;
      last_t = t;
    }
  }
};

}  // namespace gossiplab::netsim

// Copyright 2026 The pvsizing Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pvsizing/scenario_forge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pvsizing/csv.hpp"

namespace pvsizing::forge {

HourlyMatrix project_demand(const DemandForecast& forecast) {
  if (!(forecast.growth_rate > -1.0)) throw DataError("project_demand: growth rate must exceed -1");
  if (forecast.horizon < 1) throw DataError("project_demand: horizon must be at least one year");
  const int hours = static_cast<int>(forecast.base_profile.size());
  HourlyMatrix nominal(forecast.horizon, hours);
  for (int y = 0; y < forecast.horizon; ++y) {
    const double factor = std::pow(1.0 + forecast.growth_rate, y + 1);
    for (int t = 0; t < hours; ++t) {
      if (forecast.base_profile[t] < 0.0) throw DataError("project_demand: negative base demand");
      nominal(y, t) = forecast.base_profile[t] * factor;
    }
  }
  return nominal;
}

double fit_growth_rate(const std::vector<GrowthAnchor>& anchors) {
  if (anchors.size() < 2) throw DataError("fit_growth_rate: need at least two anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!(anchors[i].demand > 0.0)) throw DataError("fit_growth_rate: demand must be positive");
    if (i > 0 && !(anchors[i].year > anchors[i - 1].year)) {
      throw DataError("fit_growth_rate: anchor years must be strictly increasing");
    }
  }
  const double n = static_cast<double>(anchors.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& a : anchors) {
    mean_x += a.year / n;
    mean_y += std::log(a.demand) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& a : anchors) {
    sxy += (a.year - mean_x) * (std::log(a.demand) - mean_y);
    sxx += (a.year - mean_x) * (a.year - mean_x);
  }
  return std::exp(sxy / sxx) - 1.0;
}

bool is_stationary(const std::vector<double>& ar_coeffs) {
  // Step-down recursion: the polynomial is stable iff every reflection
  // coefficient has magnitude below one.
  std::vector<double> phi = ar_coeffs;
  while (!phi.empty() && phi.back() == 0.0) phi.pop_back();
  while (!phi.empty()) {
    const std::size_t p = phi.size();
    const double k = phi[p - 1];
    if (!(std::abs(k) < 1.0)) return false;
    std::vector<double> lower(p - 1);
    for (std::size_t i = 0; i + 1 < p; ++i) {
      lower[i] = (phi[i] + k * phi[p - 2 - i]) / (1.0 - k * k);
    }
    phi = std::move(lower);
  }
  return true;
}

std::vector<double> arma_path(const ArmaSpec& spec, int length, std::uint64_t seed) {
  if (!is_stationary(spec.ar_coeffs)) throw DataError("ARMA spec is not stationary");
  if (!(spec.noise_std >= 0.0)) throw DataError("ARMA noise_std must be >= 0");
  if (length < 0) throw DataError("arma_path: negative length");
  constexpr int kBurnIn = 500;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shock(0.0, 1.0);

  const std::size_t p = spec.ar_coeffs.size();
  const std::size_t q = spec.ma_coeffs.size();
  std::vector<double> x_hist(p, 0.0), e_hist(q, 0.0);  // most recent first
  std::vector<double> path;
  path.reserve(static_cast<std::size_t>(length));
  for (int step = 0; step < kBurnIn + length; ++step) {
    const double e = spec.noise_std * shock(rng);
    double x = e;
    for (std::size_t k = 0; k < p; ++k) x += spec.ar_coeffs[k] * x_hist[k];
    for (std::size_t k = 0; k < q; ++k) x += spec.ma_coeffs[k] * e_hist[k];
    if (p) {
      std::rotate(x_hist.rbegin(), x_hist.rbegin() + 1, x_hist.rend());
      x_hist[0] = x;
    }
    if (q) {
      std::rotate(e_hist.rbegin(), e_hist.rbegin() + 1, e_hist.rend());
      e_hist[0] = e;
    }
    if (step >= kBurnIn) path.push_back(x);
  }
  return path;
}

PvScenarioSet sample_pv_scenarios(const ArmaSpec& spec, const std::vector<std::vector<double>>& seasonal_shapes,
                                  const TimeGrid& grid) {
  if (seasonal_shapes.empty()) throw DataError("sample_pv_scenarios: no seasonal shapes");
  const int T = grid.hours_per_day;
  PvScenarioSet set;
  set.night_hours = spec.night_hours;
  std::sort(set.night_hours.begin(), set.night_hours.end());
  set.night_hours.erase(std::unique(set.night_hours.begin(), set.night_hours.end()), set.night_hours.end());
  std::vector<bool> night(static_cast<std::size_t>(T), false);
  for (int h : set.night_hours) {
    if (h < 0 || h >= T) throw DataError("sample_pv_scenarios: night hour outside the day");
    night[h] = true;
  }
  const auto S = seasonal_shapes.size();
  for (std::size_t s = 0; s < S; ++s) {
    const auto& shape = seasonal_shapes[s];
    if (shape.size() != static_cast<std::size_t>(T)) throw DataError("sample_pv_scenarios: shape length != hours");
    for (double v : shape) {
      if (!(v >= 0.0 && v <= 1.0)) throw DataError("sample_pv_scenarios: shape entries must lie in [0, 1]");
    }
    const auto noise = arma_path(spec, T * grid.years, spec.seed ^ static_cast<std::uint64_t>(s));
    HourlyMatrix profile(grid.years, T);
    for (int y = 0; y < grid.years; ++y) {
      for (int t = 0; t < T; ++t) {
        const double v = shape[t] * (1.0 + noise[static_cast<std::size_t>(y * T + t)]);
        profile(y, t) = night[t] ? 0.0 : std::clamp(v, 0.0, 1.0);
      }
    }
    set.profiles.push_back(std::move(profile));
  }
  set.probabilities.assign(S, 1.0 / static_cast<double>(S));
  return set;
}

DemandUncertainty extract_demand_intervals(const std::vector<std::vector<std::vector<double>>>& history) {
  if (history.empty()) throw DataError("extract_demand_intervals: no years");
  const std::size_t T = history.front().empty() ? 0 : history.front().front().size();
  if (T == 0) throw DataError("extract_demand_intervals: year 1 has no data");
  DemandUncertainty out;
  out.nominal = HourlyMatrix(static_cast<int>(history.size()), static_cast<int>(T));
  out.deviation = out.nominal;
  for (std::size_t y = 0; y < history.size(); ++y) {
    const auto& days = history[y];
    if (days.empty()) throw DataError("extract_demand_intervals: year " + std::to_string(y + 1) + " has no data");
    for (std::size_t t = 0; t < T; ++t) {
      double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& day : days) {
        if (day.size() != T) throw DataError("extract_demand_intervals: ragged day length");
        sum += day[t];
        lo = std::min(lo, day[t]);
        hi = std::max(hi, day[t]);
      }
      const double mean = sum / static_cast<double>(days.size());
      out.nominal(static_cast<int>(y), static_cast<int>(t)) = mean;
      out.deviation(static_cast<int>(y), static_cast<int>(t)) = std::max({mean - lo, hi - mean, 0.0});
    }
  }
  return out;
}

std::vector<std::vector<std::vector<double>>> project_history(const std::vector<std::vector<double>>& base_days,
                                                              double growth_rate, int horizon) {
  if (!(growth_rate > -1.0)) throw DataError("project_history: growth rate must exceed -1");
  std::vector<std::vector<std::vector<double>>> out(static_cast<std::size_t>(horizon));
  for (int y = 0; y < horizon; ++y) {
    const double factor = std::pow(1.0 + growth_rate, y + 1);
    for (const auto& day : base_days) {
      std::vector<double> scaled(day.size());
      std::transform(day.begin(), day.end(), scaled.begin(), [factor](double v) { return v * factor; });
      out[y].push_back(std::move(scaled));
    }
  }
  return out;
}

std::map<std::string, std::vector<double>> ingest_degradation(const std::vector<DegradationRow>& rows) {
  std::map<std::string, std::map<int, double>> by_tech;
  for (const auto& r : rows) {
    if (!(r.soh > 0.0 && r.soh <= 1.0)) {
      throw DataError("degradation: SOH " + csv::format_number(r.soh) + " for '" + r.tech + "' year " +
                      std::to_string(r.year) + " outside (0, 1]");
    }
    if (!by_tech[r.tech].emplace(r.year, r.soh).second) {
      throw DataError("degradation: duplicate year " + std::to_string(r.year) + " for '" + r.tech + "'");
    }
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& [tech, years] : by_tech) {
    std::vector<double> series;
    int expected = 1;
    for (const auto& [year, soh] : years) {
      if (year != expected) throw DataError("degradation: years for '" + tech + "' not contiguous from 1");
      if (!series.empty() && soh > series.back()) {
        throw DataError("degradation: SOH for '" + tech + "' increases at year " + std::to_string(year));
      }
      series.push_back(soh);
      ++expected;
    }
    out.emplace(tech, std::move(series));
  }
  return out;
}

void attach_degradation(std::vector<BatteryTech>& batteries, const std::map<std::string, std::vector<double>>& table) {
  for (auto& b : batteries) {
    auto it = table.find(b.id);
    if (it == table.end()) throw DataError("degradation: no SOH series for battery '" + b.id + "'");
    b.soh_by_year = it->second;
  }
}

// ---- CSV ------------------------------------------------------------------

namespace {

int checked_index(long one_based, int limit, const char* what) {
  if (one_based < 1 || one_based > limit) {
    throw DataError(std::string(what) + " index " + std::to_string(one_based) + " outside 1.." + std::to_string(limit));
  }
  return static_cast<int>(one_based - 1);
}

long max_of(const csv::Table& t, std::size_t col) {
  long m = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) m = std::max(m, t.integer(r, col));
  return m;
}

}  // namespace

std::vector<std::vector<double>> read_base_demand_csv(const std::string& path, int hours_per_day) {
  const auto t = csv::read(path);
  const auto hour = t.column("hour");
  const auto kwh = t.column("kwh");
  const bool multi = t.has_column("day");
  const int days = multi ? static_cast<int>(max_of(t, t.column("day"))) : 1;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(days), std::vector<double>(hours_per_day, -1.0));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int d = multi ? checked_index(t.integer(r, t.column("day")), days, "day") : 0;
    const int h = checked_index(t.integer(r, hour), hours_per_day, "hour");
    out[d][h] = t.number(r, kwh);
  }
  for (const auto& day : out) {
    for (double v : day) {
      if (v < 0.0) throw DataError(path + ": missing or negative hourly demand");
    }
  }
  return out;
}

std::vector<std::vector<double>> read_pv_shapes_csv(const std::string& path, int hours_per_day) {
  const auto t = csv::read(path);
  const auto sc = t.column("scenario"), hour = t.column("hour"), frac = t.column("frac");
  const int S = static_cast<int>(max_of(t, sc));
  std::vector<std::vector<double>> out(static_cast<std::size_t>(S), std::vector<double>(hours_per_day, 0.0));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out[checked_index(t.integer(r, sc), S, "scenario")][checked_index(t.integer(r, hour), hours_per_day, "hour")] =
        t.number(r, frac);
  }
  return out;
}

std::vector<DegradationRow> read_degradation_csv(const std::string& path) {
  const auto t = csv::read(path);
  const auto tech = t.column("tech"), year = t.column("year"), soh = t.column("soh");
  std::vector<DegradationRow> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    rows.push_back({t.rows[r][tech], static_cast<int>(t.integer(r, year)), t.number(r, soh)});
  }
  return rows;
}

Tariff read_tariff_csv(const std::string& path) {
  const auto t = csv::read(path);
  const auto hour = t.column("hour"), buy = t.column("buy"), sell = t.column("sell");
  const int T = static_cast<int>(t.rows.size());
  Tariff out{std::vector<double>(T, 0.0), std::vector<double>(T, 0.0)};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int h = checked_index(t.integer(r, hour), T, "hour");
    out.buy_price[h] = t.number(r, buy);
    out.sell_price[h] = t.number(r, sell);
  }
  return out;
}

DemandUncertainty read_demand_intervals_csv(const std::string& path) {
  const auto t = csv::read(path);
  const auto year = t.column("year"), hour = t.column("hour"), nom = t.column("nominal"), dev = t.column("deviation");
  const int Y = static_cast<int>(max_of(t, year));
  const int T = static_cast<int>(max_of(t, hour));
  DemandUncertainty out;
  out.nominal = HourlyMatrix(Y, T);
  out.deviation = HourlyMatrix(Y, T);
  if (t.rows.size() != static_cast<std::size_t>(Y) * T) throw DataError(path + ": expected one row per (year, hour)");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int y = checked_index(t.integer(r, year), Y, "year");
    const int h = checked_index(t.integer(r, hour), T, "hour");
    out.nominal(y, h) = t.number(r, nom);
    out.deviation(y, h) = t.number(r, dev);
  }
  return out;
}

PvScenarioSet read_pv_scenarios_csv(const std::string& path, const std::string& probabilities_path) {
  const auto t = csv::read(path);
  const auto sc = t.column("scenario"), year = t.column("year"), hour = t.column("hour"), frac = t.column("frac");
  const int S = static_cast<int>(max_of(t, sc));
  const int Y = static_cast<int>(max_of(t, year));
  const int T = static_cast<int>(max_of(t, hour));
  if (t.rows.size() != static_cast<std::size_t>(S) * Y * T) {
    throw DataError(path + ": expected one row per (scenario, year, hour)");
  }
  PvScenarioSet out;
  out.profiles.assign(static_cast<std::size_t>(S), HourlyMatrix(Y, T));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.profiles[checked_index(t.integer(r, sc), S, "scenario")](checked_index(t.integer(r, year), Y, "year"),
                                                                 checked_index(t.integer(r, hour), T, "hour")) =
        t.number(r, frac);
  }
  if (probabilities_path.empty()) {
    out.probabilities.assign(static_cast<std::size_t>(S), 1.0 / S);
  } else {
    const auto p = csv::read(probabilities_path);
    const auto psc = p.column("scenario"), prob = p.column("probability");
    out.probabilities.assign(static_cast<std::size_t>(S), 0.0);
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      out.probabilities[checked_index(p.integer(r, psc), S, "scenario")] = p.number(r, prob);
    }
  }
  return out;
}

std::string demand_intervals_csv(const DemandUncertainty& demand) {
  csv::Writer w({"year", "hour", "nominal", "deviation"});
  for (int y = 0; y < demand.nominal.years(); ++y) {
    for (int t = 0; t < demand.nominal.hours(); ++t) {
      w.row({double(y + 1), double(t + 1), demand.nominal(y, t), demand.deviation(y, t)});
    }
  }
  return w.str();
}

std::string pv_scenarios_csv(const PvScenarioSet& pv) {
  csv::Writer w({"scenario", "year", "hour", "frac"});
  for (int s = 0; s < pv.size(); ++s) {
    const auto& p = pv.profiles[s];
    for (int y = 0; y < p.years(); ++y) {
      for (int t = 0; t < p.hours(); ++t) w.row({double(s + 1), double(y + 1), double(t + 1), p(y, t)});
    }
  }
  return w.str();
}

std::string pv_probabilities_csv(const PvScenarioSet& pv) {
  csv::Writer w({"scenario", "probability"});
  for (std::size_t s = 0; s < pv.probabilities.size(); ++s) w.row({double(s + 1), pv.probabilities[s]});
  return w.str();
}

std::string tariff_csv(const Tariff& tariff) {
  csv::Writer w({"hour", "buy", "sell"});
  for (std::size_t t = 0; t < tariff.buy_price.size(); ++t) {
    w.row({double(t + 1), tariff.buy_price[t], tariff.sell_price.at(t)});
  }
  return w.str();
}

std::string degradation_csv(const std::vector<BatteryTech>& batteries) {
  csv::Writer w({"tech", "year", "soh"});
  for (const auto& b : batteries) {
    for (std::size_t y = 0; y < b.soh_by_year.size(); ++y) {
      w.row({b.id, std::to_string(y + 1), csv::format_number(b.soh_by_year[y])});
    }
  }
  return w.str();
}

}  // namespace pvsizing::forge

#include "qcongest/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#ifndef QCONGEST_VERSION
#define QCONGEST_VERSION "unknown"
#endif

namespace qcongest {

namespace {

double ratio_of(const ApproxResult& r) {
  if (!r.estimate) return NAN;
  if (r.true_value == 0) return *r.estimate == Rational(0) ? 1.0 : NAN;
  return r.estimate->to_double() / static_cast<double>(r.true_value);
}

std::string fixed(double value, int digits = 6) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string_view version() { return QCONGEST_VERSION; }

nlohmann::ordered_json report_envelope(std::string_view command, nlohmann::ordered_json config) {
  nlohmann::ordered_json out;
  out["tool"] = "qcongest";
  out["version"] = std::string(version());
  out["command"] = std::string(command);
  out["config"] = std::move(config);
  return out;
}

std::string dump_report(const nlohmann::ordered_json& report) { return report.dump(2) + "\n"; }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

double round_budget_trend(std::size_t n, std::int64_t d_g) {
  return std::pow(static_cast<double>(n), 0.9) * std::pow(static_cast<double>(std::max<std::int64_t>(d_g, 1)), 0.3);
}

nlohmann::ordered_json summarize_trials(const std::vector<ApproxResult>& trials) {
  nlohmann::ordered_json out;
  out["trials"] = trials.size();
  if (trials.empty()) return out;
  std::size_t successes = 0;
  double rounds = 0;
  std::vector<double> ratios;
  for (const auto& t : trials) {
    successes += t.success ? 1 : 0;
    rounds += static_cast<double>(t.ledger.rounds());
    const double r = ratio_of(t);
    if (!std::isnan(r)) ratios.push_back(r);
  }
  std::sort(ratios.begin(), ratios.end());
  out["successes"] = successes;
  out["success_rate"] = static_cast<double>(successes) / static_cast<double>(trials.size());
  out["mean_rounds"] = rounds / static_cast<double>(trials.size());
  if (!ratios.empty()) {
    double sum = 0;
    for (double r : ratios) sum += r;
    out["ratio"] = {{"min", ratios.front()},
                    {"median", ratios[ratios.size() / 2]},
                    {"mean", sum / static_cast<double>(ratios.size())},
                    {"max", ratios.back()}};
  } else {
    out["ratio"] = nullptr;
  }
  out["sandwich_factor"] = sandwich_factor(trials.front().schedule.q).to_double();
  out["round_budget_trend"] = round_budget_trend(trials.front().n, trials.front().schedule.d_g);
  return out;
}

std::string approx_csv(const std::vector<ApproxResult>& trials) {
  std::ostringstream out;
  out << kApproxCsvHeader << "\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    out << i << ',' << (t.objective == Objective::kMaximize ? "diameter" : "radius") << ',' << t.n << ','
        << t.schedule.d_g << ",1/" << t.schedule.q << ',' << t.schedule.r << ',' << t.schedule.hops << ','
        << t.schedule.k << ',' << (t.estimate ? t.estimate->str() : "") << ',' << t.true_value << ','
        << fixed(ratio_of(t)) << ',' << t.ledger.rounds() << ',' << t.outer.evaluations << ','
        << (t.success ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace qcongest

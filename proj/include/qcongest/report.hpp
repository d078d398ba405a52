#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcongest/quantum_opt.hpp"

namespace qcongest {

/// Artifact version, "<project version>+<git describe>".
std::string_view version();

/// {"tool", "version", "command", "config"} followed by the caller's fields.
nlohmann::ordered_json report_envelope(std::string_view command, nlohmann::ordered_json config);

/// Canonical text of a JSON report: two-space indent, trailing newline.
std::string dump_report(const nlohmann::ordered_json& report);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

/// n^(9/10) * D_G^(3/10), printed next to measured rounds for trend inspection.
double round_budget_trend(std::size_t n, std::int64_t d_g);

/// Success rate, ratio distribution and mean rounds over a batch of runs.
nlohmann::ordered_json summarize_trials(const std::vector<ApproxResult>& trials);

/// Column order of approx_csv.
inline constexpr std::string_view kApproxCsvHeader =
    "trial,objective,n,D_G,eps,r,l,k,estimate,true_value,ratio,rounds,evaluations,success";
std::string approx_csv(const std::vector<ApproxResult>& trials);

}  // namespace qcongest

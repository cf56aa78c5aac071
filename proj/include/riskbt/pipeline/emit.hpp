// Report serialization: fixed-column CSV tables, colorized terminal
// rendering, SVG traffic-light heatmaps and a JSON run manifest (config echo
// + seed + version) sufficient to replay a run byte-identically.
#pragma once

#include <string>

#include "riskbt/pipeline/reports.hpp"

namespace riskbt {

inline constexpr const char* kRiskbtVersion = "0.1.0";

// Writes the bundle into cfg.out_dir according to cfg.formats
// ("csv", "svg", "term" - term prints to stdout). Returns the manifest path.
std::string emit_reports(const ReportBundle& bundle);

// Individual pieces, exposed for tests.
std::string summary_csv(const ReportBundle& bundle);
std::string pvalues_csv(const ReportBundle& bundle);
std::string traffic_csv(const TrafficEntry& entry);
std::string traffic_svg(const TrafficEntry& entry);
std::string manifest_json(const ReportBundle& bundle,
                          const std::vector<std::string>& files);
void render_terminal(const ReportBundle& bundle, std::ostream& os);

std::string slot_tag(Functional f, double level);  // e.g. "var_0.99"

}  // namespace riskbt

#include "riskbt/pipeline/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace riskbt {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string level_tag(double level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", level);
  return buf;
}

const char* zone_color(Zone z) {
  switch (z) {
    case Zone::green: return "#2ca02c";
    case Zone::yellow: return "#ffbf00";
    case Zone::red: return "#d62728";
    case Zone::neutral: return "#bbbbbb";
  }
  return "#000000";
}

std::string pcell(const CalibrationReport& rep, double eta) {
  if (rep.degenerate) return ",";
  return fmt(rep.p_value, "%.4f") + "," + (rep.p_value <= eta ? "1" : "0");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot write " + path);
  out << content;
}

}  // namespace

std::string slot_tag(Functional f, double level) {
  return functional_name(f) + "_" + level_tag(level);
}

std::string summary_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "functional,level,method,mean_forecast,pct_violations";
  std::size_t max_scores = 0;
  for (const auto& t : bundle.summaries) max_scores = std::max(max_scores, t.score_ids.size());
  for (std::size_t i = 0; i < max_scores; ++i) {
    os << ",score_id_" << i + 1 << ",scaled_mean_score_" << i + 1 << ",rank_" << i + 1;
  }
  os << "\n";
  for (const auto& table : bundle.summaries) {
    for (const auto& row : table.rows) {
      os << functional_name(table.functional) << "," << level_tag(table.level) << ","
         << row.method << "," << fmt(row.mean_forecast) << ","
         << fmt(row.pct_violations, "%.2f");
      for (std::size_t i = 0; i < table.score_ids.size(); ++i) {
        os << "," << table.score_ids[i] << "," << fmt(row.scaled_mean_scores[i]) << ","
           << row.ranks[i];
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string pvalues_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "functional,level,method"
     << ",two_sided_simple_p,two_sided_simple_sig"
     << ",two_sided_general_p,two_sided_general_sig"
     << ",one_sided_simple_p,one_sided_simple_sig"
     << ",one_sided_general_p,one_sided_general_sig\n";
  const double eta = bundle.config.eta;
  for (const auto& table : bundle.pvalues) {
    for (const auto& row : table.rows) {
      os << functional_name(table.functional) << "," << level_tag(table.level) << ","
         << row.method << "," << pcell(row.two_sided_simple, eta) << ","
         << pcell(row.two_sided_general, eta) << "," << pcell(row.one_sided_simple, eta)
         << "," << pcell(row.one_sided_general, eta) << "\n";
    }
  }
  return os.str();
}

std::string traffic_csv(const TrafficEntry& entry) {
  std::ostringstream os;
  os << "standard_model";
  for (const auto& m : entry.matrix.methods) os << "," << m;
  os << "\n";
  const std::size_t n = entry.matrix.methods.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << entry.matrix.methods[i];
    for (std::size_t j = 0; j < n; ++j) os << "," << zone_name(entry.matrix.zone(i, j));
    os << "\n";
  }
  return os.str();
}

std::string traffic_svg(const TrafficEntry& entry) {
  const std::size_t n = entry.matrix.methods.size();
  const int cell = 42, margin = 84, label_pad = 6;
  const int width = margin + cell * static_cast<int>(n) + 12;
  const int height = margin + cell * static_cast<int>(n) + 12;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << margin << "\" y=\"14\">internal model (columns) vs standard model (rows): "
     << slot_tag(entry.functional, entry.level) << ", score " << entry.score_id
     << "</text>\n";
  for (std::size_t j = 0; j < n; ++j) {
    const int x = margin + static_cast<int>(j) * cell + cell / 2;
    os << "<text x=\"" << x << "\" y=\"" << margin - label_pad
       << "\" text-anchor=\"middle\">" << entry.matrix.methods[j] << "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int y = margin + static_cast<int>(i) * cell + cell / 2 + 4;
    os << "<text x=\"" << margin - label_pad << "\" y=\"" << y
       << "\" text-anchor=\"end\">" << entry.matrix.methods[i] << "</text>\n";
    for (std::size_t j = 0; j < n; ++j) {
      const int x = margin + static_cast<int>(j) * cell;
      const int yy = margin + static_cast<int>(i) * cell;
      os << "<rect x=\"" << x << "\" y=\"" << yy << "\" width=\"" << cell - 2
         << "\" height=\"" << cell - 2 << "\" fill=\"" << zone_color(entry.matrix.zone(i, j))
         << "\" stroke=\"#ffffff\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string manifest_json(const ReportBundle& bundle,
                          const std::vector<std::string>& files) {
  nlohmann::json j;
  j["library"] = "riskbt";
  j["version"] = kRiskbtVersion;
  j["seed"] = bundle.config.seed;
  j["out_of_sample"] = bundle.out_of_sample;
  j["carried_forward_fits"] = bundle.carried_forward;
  j["config"] = render_config(bundle.config);
  j["files"] = files;
  nlohmann::json zeroing = nlohmann::json::array();
  for (const auto& z : bundle.zeroing) {
    zeroing.push_back({{"functional", functional_name(z.functional)},
                       {"level", z.level},
                       {"zeroed_timestamps", z.zeroed_timestamps}});
  }
  j["score_zeroing"] = zeroing;
  return j.dump(2) + "\n";
}

void render_terminal(const ReportBundle& bundle, std::ostream& os) {
  const char* reset = "\x1b[0m";
  auto zone_ansi = [](Zone z) {
    switch (z) {
      case Zone::green: return "\x1b[42m  \x1b[0m";
      case Zone::yellow: return "\x1b[43m  \x1b[0m";
      case Zone::red: return "\x1b[41m  \x1b[0m";
      case Zone::neutral: return "\x1b[100m  \x1b[0m";
    }
    return "  ";
  };
  for (const auto& table : bundle.summaries) {
    os << "== summary " << slot_tag(table.functional, table.level) << " ==\n";
    os << "method        mean_fc";
    if (table.functional == Functional::var) os << "  %viol";
    for (const auto& id : table.score_ids) os << "  " << id << " (rank)";
    os << "\n";
    for (const auto& row : table.rows) {
      char line[64];
      std::snprintf(line, sizeof line, "%-12s %8.4f", row.method.c_str(), row.mean_forecast);
      os << line;
      if (table.functional == Functional::var) {
        std::snprintf(line, sizeof line, "  %5.1f", row.pct_violations);
        os << line;
      }
      for (std::size_t i = 0; i < row.scaled_mean_scores.size(); ++i) {
        std::snprintf(line, sizeof line, "  %10.4f (%2d)", row.scaled_mean_scores[i],
                      row.ranks[i]);
        os << line;
      }
      os << "\n";
    }
    os << "\n";
  }
  for (const auto& table : bundle.pvalues) {
    os << "== p-values " << slot_tag(table.functional, table.level)
       << " (simple/general two-sided, simple/general one-sided; * = p <= "
       << bundle.config.eta << ") ==\n";
    for (const auto& row : table.rows) {
      auto cell = [&](const CalibrationReport& r) {
        if (r.degenerate) return std::string("   -   ");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%6.3f%c", r.p_value,
                      r.p_value <= bundle.config.eta ? '*' : ' ');
        return std::string(buf);
      };
      char head[32];
      std::snprintf(head, sizeof head, "%-12s", row.method.c_str());
      os << head << cell(row.two_sided_simple) << " " << cell(row.two_sided_general)
         << " " << cell(row.one_sided_simple) << " " << cell(row.one_sided_general)
         << "\n";
    }
    os << "\n";
  }
  for (const auto& entry : bundle.traffic) {
    os << "== traffic " << slot_tag(entry.functional, entry.level) << " score "
       << entry.score_id << " (rows: standard, cols: internal) ==\n";
    const std::size_t n = entry.matrix.methods.size();
    for (std::size_t i = 0; i < n; ++i) {
      char head[32];
      std::snprintf(head, sizeof head, "%-8s", entry.matrix.methods[i].c_str());
      os << head;
      for (std::size_t j = 0; j < n; ++j) os << zone_ansi(entry.matrix.zone(i, j));
      os << reset << "\n";
    }
    os << "\n";
  }
}

std::string emit_reports(const ReportBundle& bundle) {
  namespace fs = std::filesystem;
  const auto& cfg = bundle.config;
  fs::create_directories(cfg.out_dir);
  std::vector<std::string> files;
  auto has_format = [&](const char* f) {
    for (const auto& s : cfg.formats) {
      if (s == f) return true;
    }
    return false;
  };
  if (has_format("csv")) {
    write_file(cfg.out_dir + "/summary.csv", summary_csv(bundle));
    files.push_back("summary.csv");
    write_file(cfg.out_dir + "/pvalues.csv", pvalues_csv(bundle));
    files.push_back("pvalues.csv");
    for (const auto& entry : bundle.traffic) {
      const std::string name = "traffic_" + slot_tag(entry.functional, entry.level) +
                               "_" + entry.score_id + ".csv";
      write_file(cfg.out_dir + "/" + name, traffic_csv(entry));
      files.push_back(name);
    }
  }
  if (has_format("svg")) {
    for (const auto& entry : bundle.traffic) {
      const std::string name = "traffic_" + slot_tag(entry.functional, entry.level) +
                               "_" + entry.score_id + ".svg";
      write_file(cfg.out_dir + "/" + name, traffic_svg(entry));
      files.push_back(name);
    }
  }
  if (has_format("term")) {
    render_terminal(bundle, std::cout);
  }
  const std::string manifest_path = cfg.out_dir + "/manifest.json";
  write_file(manifest_path, manifest_json(bundle, files));
  return manifest_path;
}

}  // namespace riskbt

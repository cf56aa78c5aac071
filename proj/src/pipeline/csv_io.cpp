#include "riskbt/pipeline/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riskbt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

LossSeries parse_loss_csv(const std::string& text, bool prices_to_losses) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  const auto header = split_csv_line(line);
  int price_col = -1, loss_col = -1, date_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = lower(header[i]);
    if (h == "price" || h == "close") price_col = static_cast<int>(i);
    if (h == "loss") loss_col = static_cast<int>(i);
    if (h == "date") date_col = static_cast<int>(i);
  }
  int value_col;
  bool from_prices;
  if (loss_col >= 0 && !prices_to_losses) {
    value_col = loss_col;
    from_prices = false;
  } else if (price_col >= 0 && prices_to_losses) {
    value_col = price_col;
    from_prices = true;
  } else if (loss_col >= 0) {
    value_col = loss_col;
    from_prices = false;
  } else if (price_col >= 0) {
    value_col = price_col;
    from_prices = true;
  } else {
    throw std::runtime_error("csv: need a 'price' or 'loss' column");
  }

  LossSeries out;
  std::vector<double> raw;
  std::vector<std::string> dates;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() <= static_cast<std::size_t>(value_col)) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " has too few fields");
    }
    const std::string& cell = cells[static_cast<std::size_t>(value_col)];
    if (cell.empty()) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " has a missing value");
    }
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) +
                               " has a non-numeric value '" + cell + "'");
    }
    if (used != cell.size()) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) +
                               " has a non-numeric value '" + cell + "'");
    }
    raw.push_back(v);
    if (date_col >= 0 && cells.size() > static_cast<std::size_t>(date_col)) {
      dates.push_back(cells[static_cast<std::size_t>(date_col)]);
    }
  }
  if (from_prices) {
    if (raw.size() < 2) throw std::runtime_error("csv: need at least two prices");
    for (double p : raw) {
      if (!(p > 0.0)) throw std::runtime_error("csv: prices must be positive");
    }
    out.losses.resize(raw.size() - 1);
    for (std::size_t i = 1; i < raw.size(); ++i) {
      out.losses[i - 1] = -std::log(raw[i] / raw[i - 1]);
    }
    if (!dates.empty()) out.dates.assign(dates.begin() + 1, dates.end());
  } else {
    out.losses = std::move(raw);
    out.dates = std::move(dates);
  }
  return out;
}

LossSeries ingest_csv(const std::string& path, bool prices_to_losses) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_loss_csv(ss.str(), prices_to_losses);
}

void write_loss_csv(const std::string& path, const LossSeries& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  const bool dated = !series.dates.empty();
  out << (dated ? "date,loss\n" : "loss\n");
  char buf[64];
  for (std::size_t i = 0; i < series.losses.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", series.losses[i]);
    if (dated) out << series.dates[i] << ",";
    out << buf << "\n";
  }
}

}  // namespace riskbt

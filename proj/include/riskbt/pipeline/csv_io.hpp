// CSV ingestion: a header line with either a `price` column (converted to
// negated log-returns) or a `loss` column (used verbatim). An optional
// `date` column is carried through untouched. Rows with missing or
// non-numeric values are rejected with their line numbers.
#pragma once

#include <string>
#include <vector>

namespace riskbt {

struct LossSeries {
  std::vector<double> losses;
  std::vector<std::string> dates;  // empty when the file has no date column
};

LossSeries ingest_csv(const std::string& path, bool prices_to_losses);
LossSeries parse_loss_csv(const std::string& text, bool prices_to_losses);

void write_loss_csv(const std::string& path, const LossSeries& series);

}  // namespace riskbt

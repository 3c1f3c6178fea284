#pragma once

#include "wkde/sample.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wkde {

//! Numeric CSV with a header row. Parse failures throw Error("ParseError")
//! with the 1-based line number in the message.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  //! Column position or -1.
  int column(const std::string& name) const;
  std::vector<double> values(int col) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

//! Sample columns pulled from a table with header x[,delta][,w]. Absent
//! columns leave the optionals empty (uniform weights / all-events are the
//! caller's defaults per the interface contract).
struct SampleColumns {
  std::vector<double> x;
  std::optional<std::vector<int>> delta;
  std::optional<std::vector<double>> w;
};

SampleColumns sample_columns(const CsvTable& table);

//! Builds the weighted sample: missing w means uniform 1/n, missing delta
//! means all events.
WeightedSample sample_from_csv(const CsvTable& table);

//! Writes content to path via a temporary file in the same directory and an
//! atomic rename, so failures never leave partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace wkde

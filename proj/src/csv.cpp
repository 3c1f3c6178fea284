#include "wkde/csv.hpp"

#include "wkde/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wkde {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ','))
    out.push_back(trim(tok));
  if (!line.empty() && line.back() == ',')
    out.push_back("");
  return out;
}

} // namespace

int CsvTable::column(const std::string& name) const
{
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : int(it - header.begin());
}

std::vector<double> CsvTable::values(int col) const
{
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& row : rows)
    v.push_back(row[std::size_t(col)]);
  return v;
}

CsvTable parse_csv(const std::string& text)
{
  CsvTable table;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty())
      continue;
    if (table.header.empty()) {
      table.header = split_line(stripped);
      continue;
    }
    const std::vector<std::string> toks = split_line(stripped);
    if (toks.size() != table.header.size())
      throw Error("ParseError",
                  "line " + std::to_string(line_no) + ": expected " +
                    std::to_string(table.header.size()) + " fields, got " +
                    std::to_string(toks.size()));
    std::vector<double> row(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) {
      char* end = nullptr;
      errno = 0;
      row[i] = std::strtod(toks[i].c_str(), &end);
      if (toks[i].empty() || end != toks[i].c_str() + toks[i].size() ||
          errno != 0)
        throw Error("ParseError", "line " + std::to_string(line_no) +
                                    ": cannot parse '" + toks[i] +
                                    "' as a number");
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty())
    throw Error("ParseError", "empty input");
  return table;
}

CsvTable read_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("IoError", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

SampleColumns sample_columns(const CsvTable& table)
{
  const int xc = table.column("x");
  if (xc < 0)
    throw Error("ParseError", "missing required column 'x'");
  SampleColumns cols;
  cols.x = table.values(xc);
  if (cols.x.empty())
    throw Error("EmptySample", "no data rows");

  const int dc = table.column("delta");
  if (dc >= 0) {
    std::vector<int> delta(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const double v = table.rows[i][std::size_t(dc)];
      if (v != 0.0 && v != 1.0)
        throw Error("ParseError", "line " + std::to_string(i + 2) +
                                    ": delta must be 0 or 1");
      delta[i] = int(v);
    }
    cols.delta = std::move(delta);
  }
  const int wc = table.column("w");
  if (wc >= 0)
    cols.w = table.values(wc);
  return cols;
}

WeightedSample sample_from_csv(const CsvTable& table)
{
  SampleColumns cols = sample_columns(table);
  std::vector<double> w =
    cols.w ? *cols.w
           : std::vector<double>(cols.x.size(), 1.0 / double(cols.x.size()));
  if (cols.delta)
    return WeightedSample(std::move(cols.x), std::move(w),
                          std::move(*cols.delta));
  return WeightedSample(std::move(cols.x), std::move(w));
}

void write_file_atomic(const std::string& path, const std::string& content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("IoError", "cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out)
      throw Error("IoError", "short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("IoError", "cannot rename '" + tmp + "' to '" + path + "'");
  }
}

} // namespace wkde

#include <fstream>
#include <set>

#include "mixedtrails/io.hpp"

namespace mixedtrails::io {

void ResultsTable::append(ResultRow row) {
  for (const ResultRow& existing : rows) {
    if (existing.hypothesis == row.hypothesis && existing.kappa == row.kappa)
      throw ParseError("duplicate result row for hypothesis '" + row.hypothesis +
                       "' at kappa=" + format_double(row.kappa));
  }
  rows.push_back(std::move(row));
}

ResultsTable results_from_curves(const std::vector<EvidenceCurve>& curves) {
  ResultsTable table;
  for (const EvidenceCurve& curve : curves) {
    for (const EvidencePoint& p : curve.points) {
      ResultRow row;
      row.hypothesis = curve.hypothesis;
      row.kappa = p.kappa;
      row.log_ml = p.log_ml;
      row.std_err = p.std_err;
      row.n_samples = p.n_samples;
      row.method = method_name(p.method);
      table.append(std::move(row));
    }
  }
  return table;
}

std::string results_to_csv(const ResultsTable& table) {
  std::string out = "hypothesis,kappa,log_ml,std_err,n_samples,method\n";
  for (const ResultRow& row : table.rows) {
    if (row.hypothesis.find_first_of(",\"\n") != std::string::npos)
      throw ParseError("hypothesis name '" + row.hypothesis + "' contains CSV delimiters");
    out += row.hypothesis;
    out += ',';
    out += format_double(row.kappa);
    out += ',';
    out += format_double(row.log_ml);
    out += ',';
    if (row.std_err) out += format_double(*row.std_err);
    out += ',';
    if (row.n_samples) out += std::to_string(*row.n_samples);
    out += ',';
    out += row.method;
    out += '\n';
  }
  return out;
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  ResultsTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "hypothesis,kappa,log_ml,std_err,n_samples,method")
        throw ParseError(path.string() + ": unexpected header '" + line + "'");
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    const std::string ctx = path.filename().string() + " line " + std::to_string(line_no);
    if (fields.size() != 6) throw ParseError(ctx + ": expected 6 columns");
    ResultRow row;
    row.hypothesis = fields[0];
    row.kappa = parse_double(fields[1], ctx);
    row.log_ml = parse_double(fields[2], ctx);
    if (!fields[3].empty()) row.std_err = parse_double(fields[3], ctx);
    if (!fields[4].empty()) row.n_samples = parse_int(fields[4], ctx);
    row.method = fields[5];
    table.append(std::move(row));
  }
  if (table.rows.empty() && line_no == 0)
    throw ParseError(path.string() + ": empty results file");
  return table;
}

}  // namespace mixedtrails::io

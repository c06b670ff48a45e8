#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "mixedtrails/io.hpp"

namespace mixedtrails::io {

namespace {

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // a trailing blank line from the final newline is not a record
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.filename().string() + " line " + std::to_string(line_no);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError(context + ": bad number '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text, const std::string& context) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError(context + ": bad integer '" + std::string(text) + "'");
  return v;
}

StateSpace load_states(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) throw ParseError(where(path, i + 1) + ": empty state label");
    labels.push_back(lines[i]);
  }
  if (labels.empty()) throw ParseError(path.string() + ": no states");
  return StateSpace(std::move(labels));
}

TransitionDataset load_transitions(const std::filesystem::path& path, const StateSpace* space) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string() + ": missing header row");

  const auto header = split_tab(lines[0]);
  std::map<std::string, std::size_t> columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!columns.emplace(header[c], c).second)
      throw ParseError(where(path, 1) + ": duplicate column '" + header[c] + "'");
  }
  for (const char* required : {"src", "dst"}) {
    if (!columns.contains(required))
      throw ParseError(path.string() + ": missing required column '" + required + "'");
  }
  const auto src_col = columns.at("src");
  const auto dst_col = columns.at("dst");
  const bool has_seq = columns.contains("seq");
  const bool has_pos = columns.contains("pos");
  if (has_pos && !has_seq)
    throw ParseError(path.string() + ": column 'pos' requires column 'seq'");

  std::vector<std::string> meta_names;
  std::vector<std::size_t> meta_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "src" || header[c] == "dst" || header[c] == "seq" || header[c] == "pos")
      continue;
    meta_names.push_back(header[c]);
    meta_cols.push_back(c);
  }

  struct RawRow {
    std::string src, dst, seq;
    std::int64_t pos = -1;
  };
  std::vector<RawRow> raw;
  std::vector<std::vector<std::string>> meta_values(meta_names.size());
  raw.reserve(lines.size() - 1);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_tab(lines[i]);
    if (fields.size() != header.size())
      throw ParseError(where(path, i + 1) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    RawRow row;
    row.src = fields[src_col];
    row.dst = fields[dst_col];
    if (row.src.empty() || row.dst.empty())
      throw ParseError(where(path, i + 1) + ": empty state label");
    if (has_seq) row.seq = fields[columns.at("seq")];
    if (has_pos) row.pos = parse_int(fields[columns.at("pos")], where(path, i + 1));
    raw.push_back(std::move(row));
    for (std::size_t mc = 0; mc < meta_cols.size(); ++mc)
      meta_values[mc].push_back(fields[meta_cols[mc]]);
  }

  std::optional<StateSpace> inferred;
  if (space == nullptr) {
    std::set<std::string> labels;
    for (const RawRow& row : raw) {
      labels.insert(row.src);
      labels.insert(row.dst);
    }
    if (labels.empty()) throw ParseError(path.string() + ": no transitions and no states file");
    inferred.emplace(std::vector<std::string>(labels.begin(), labels.end()));
    space = &*inferred;
  }

  std::vector<std::string> seq_labels;
  std::map<std::string, std::int32_t> seq_index;
  std::vector<std::int64_t> seq_next_pos;
  std::vector<Transition> transitions;
  transitions.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawRow& row = raw[i];
    const auto src = space->find(row.src);
    if (!src) throw ParseError(where(path, i + 2) + ": unknown state '" + row.src + "'");
    const auto dst = space->find(row.dst);
    if (!dst) throw ParseError(where(path, i + 2) + ": unknown state '" + row.dst + "'");
    Transition t;
    t.src = *src;
    t.dst = *dst;
    if (has_seq && !row.seq.empty()) {
      auto [it, inserted] = seq_index.emplace(row.seq, static_cast<std::int32_t>(seq_labels.size()));
      if (inserted) {
        seq_labels.push_back(row.seq);
        seq_next_pos.push_back(0);
      }
      t.seq = it->second;
      t.pos = has_pos ? static_cast<std::int32_t>(row.pos)
                      : static_cast<std::int32_t>(seq_next_pos[t.seq]++);
    }
    transitions.push_back(t);
  }

  TransitionDataset dataset(*space, std::move(transitions), std::move(seq_labels));
  for (std::size_t mc = 0; mc < meta_names.size(); ++mc)
    dataset.add_metadata_column(meta_names[mc], std::move(meta_values[mc]));
  return dataset;
}

BeliefMatrix load_belief_matrix(const std::filesystem::path& path, const StateSpace& space,
                                std::string group_label) {
  const auto lines = read_lines(path);
  BeliefMatrix phi(std::move(group_label), space.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_tab(lines[i]);
    if (fields.size() != 3)
      throw ParseError(where(path, i + 1) + ": expected src<TAB>dst<TAB>weight");
    const auto src = space.find(fields[0]);
    if (!src) throw ParseError(where(path, i + 1) + ": unknown state '" + fields[0] + "'");
    const auto dst = space.find(fields[1]);
    if (!dst) throw ParseError(where(path, i + 1) + ": unknown state '" + fields[1] + "'");
    const double w = parse_double(fields[2], where(path, i + 1));
    if (!(w > 0.0))
      throw ParseError(where(path, i + 1) + ": weight must be positive, got " + fields[2]);
    phi.add_weight(*src, *dst, w);
  }
  phi.normalize();
  return phi;
}

GroupAssignmentProbabilities load_gamma_file(const std::filesystem::path& path,
                                             std::size_t n_transitions,
                                             const std::vector<std::string>& groups) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string() + ": missing header row");
  const auto header = split_tab(lines[0]);
  if (header.size() != groups.size())
    throw ParseError(path.string() + ": header names " + std::to_string(header.size()) +
                     " groups, hypothesis has " + std::to_string(groups.size()));
  // column for each hypothesis group, matched by label
  std::vector<std::size_t> column_of(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto it = std::find(header.begin(), header.end(), groups[g]);
    if (it == header.end())
      throw ParseError(path.string() + ": header is missing group '" + groups[g] + "'");
    column_of[g] = static_cast<std::size_t>(it - header.begin());
  }

  if (lines.size() - 1 != n_transitions)
    throw ParseError(path.string() + ": gamma rows (" + std::to_string(lines.size() - 1) +
                     ") != transitions (" + std::to_string(n_transitions) + ")");

  std::vector<double> gamma(n_transitions * groups.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_tab(lines[i]);
    if (fields.size() != groups.size())
      throw ParseError(where(path, i + 1) + ": expected " + std::to_string(groups.size()) +
                       " probabilities, got " + std::to_string(fields.size()));
    for (std::size_t g = 0; g < groups.size(); ++g)
      gamma[(i - 1) * groups.size() + g] = parse_double(fields[column_of[g]], where(path, i + 1));
  }
  return GroupAssignmentProbabilities(groups, std::move(gamma));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

void write_states_tsv(const std::filesystem::path& path, const StateSpace& space) {
  std::string out;
  for (const auto& label : space.labels()) {
    out += label;
    out += '\n';
  }
  write_text_atomic(path, out);
}

void write_dataset_tsv(const std::filesystem::path& path, const TransitionDataset& d) {
  std::string out = "src\tdst";
  const bool has_seq = !d.sequence_labels().empty();
  if (has_seq) out += "\tseq\tpos";
  for (const auto& name : d.metadata_names()) out += "\t" + name;
  out += '\n';
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Transition& t = d.transition(k);
    out += d.space().label(t.src);
    out += '\t';
    out += d.space().label(t.dst);
    if (has_seq) {
      out += '\t';
      out += t.seq >= 0 ? d.sequence_labels()[t.seq] : "";
      out += '\t';
      out += t.pos >= 0 ? std::to_string(t.pos) : "";
    }
    for (const auto& name : d.metadata_names()) {
      out += '\t';
      out += (*d.metadata_column(name))[k];
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

void write_belief_tsv(const std::filesystem::path& path, const BeliefMatrix& phi,
                      const StateSpace& space) {
  std::string out;
  for (StateIndex i = 0; i < phi.n_states(); ++i) {
    for (const auto& [j, w] : phi.row(i)) {
      out += space.label(i);
      out += '\t';
      out += space.label(j);
      out += '\t';
      out += format_double(w);
      out += '\n';
    }
  }
  write_text_atomic(path, out);
}

}  // namespace mixedtrails::io

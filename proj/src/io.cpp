#include "swarmlob/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

namespace swarmlob::io {

namespace {

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << body;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

Table queue_rows(std::vector<std::vector<Cell>> rows) {
  return {"queue", {"class", "mean_wait", "sem", "n"}, std::move(rows)};
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("number formatting failed");
  return std::string(buf.data(), end);
}

Table paths_table(std::span<const PredictionPath> paths) {
  Table t{"paths", {"series", "t", "x"}, {}};
  for (std::size_t s = 0; s < paths.size(); ++s) {
    const auto& path = paths[s];
    for (int k = 0; k <= path.n_steps(); ++k) {
      t.rows.push_back({static_cast<std::int64_t>(s), path.time(k), path[k]});
    }
  }
  return t;
}

Table report_table(const IterationReport& report) {
  Table t{"report", {"iter", "sup_diff"}, {}};
  for (std::size_t i = 0; i < report.sup_diffs.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(i + 1), report.sup_diffs[i]});
  }
  return t;
}

Table queue_table(const QueueSimStats& s) {
  return queue_rows({{std::int64_t{1}, s.mean_wait_1, s.sem_1, static_cast<std::int64_t>(s.n_1)},
                     {std::int64_t{2}, s.mean_wait_2, s.sem_2, static_cast<std::int64_t>(s.n_2)}});
}

// A single replication keeps its own batch-means SEM; pooled runs report the
// between-replication standard error.
Table queue_table(const PooledQueueStats& pooled) {
  if (pooled.runs.size() == 1) return queue_table(pooled.runs.front());
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  for (const auto& r : pooled.runs) {
    n1 += static_cast<std::int64_t>(r.n_1);
    n2 += static_cast<std::int64_t>(r.n_2);
  }
  return queue_rows({{std::int64_t{1}, pooled.wait_1.mean, pooled.wait_1.se, n1},
                     {std::int64_t{2}, pooled.wait_2.mean, pooled.wait_2.se, n2}});
}

Table queue_runs_table(const PooledQueueStats& pooled) {
  Table t{"runs", {"replication", "class", "mean_wait", "sem", "n", "discarded_buys"}, {}};
  for (std::size_t r = 0; r < pooled.runs.size(); ++r) {
    const auto& s = pooled.runs[r];
    const auto rep = static_cast<std::int64_t>(r);
    const auto discarded = static_cast<std::int64_t>(s.discarded_buys);
    t.rows.push_back({rep, std::int64_t{1}, s.mean_wait_1, s.sem_1,
                      static_cast<std::int64_t>(s.n_1), discarded});
    t.rows.push_back({rep, std::int64_t{2}, s.mean_wait_2, s.sem_2,
                      static_cast<std::int64_t>(s.n_2), discarded});
  }
  return t;
}

Table field_table(const FieldGrid& grid) {
  Table t{"field", {"x", "y", "value"}, {}};
  t.rows.reserve(grid.values.size());
  for (int j = 0; j < grid.spec.y_count; ++j) {
    for (int i = 0; i < grid.spec.x_count; ++i) {
      t.rows.push_back({grid.spec.x(i), grid.spec.y(j), grid.at(i, j)});
    }
  }
  return t;
}

Table agent_paths_table(std::span<const AgentSimPath> paths) {
  Table t{"paths", {"series", "t", "x"}, {}};
  for (std::size_t s = 0; s < paths.size(); ++s) {
    const auto& p = paths[s];
    for (std::size_t i = 0; i < p.times.size(); ++i) {
      t.rows.push_back({static_cast<std::int64_t>(s), p.times[i], p.fractions[i]});
    }
  }
  return t;
}

Table equilibria_table(std::span<const Equilibrium> equilibria) {
  Table t{"equilibria", {"ratio", "stability"}, {}};
  for (const auto& e : equilibria) {
    t.rows.push_back({e.ratio, std::string(e.stability == Stability::stable ? "stable"
                                                                            : "unstable")});
  }
  return t;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& table) {
  auto records = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json rec = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  return records;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "'");
}

std::vector<std::filesystem::path> write_document(const Document& doc,
                                                  const std::filesystem::path& out,
                                                  Format format) {
  std::vector<std::filesystem::path> written;
  if (format == Format::json) {
    nlohmann::json j;
    j["meta"] = doc.meta;
    for (const auto& t : doc.tables) j[t.name] = to_json(t);
    write_file(out, j.dump(2) + "\n");
    written.push_back(out);
    return written;
  }

  for (std::size_t i = 0; i < doc.tables.size(); ++i) {
    std::filesystem::path path = out;
    if (i > 0) {
      path = out.parent_path() /
             (out.stem().string() + "." + doc.tables[i].name + out.extension().string());
    }
    write_file(path, to_csv(doc.tables[i]));
    written.push_back(path);
  }
  std::filesystem::path meta = out;
  meta += ".meta.json";
  write_file(meta, doc.meta.dump(2) + "\n");
  written.push_back(meta);
  return written;
}

}  // namespace swarmlob::io

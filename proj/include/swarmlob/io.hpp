#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "swarmlob/dynamics.hpp"
#include "swarmlob/stochastic.hpp"
#include "swarmlob/sweep.hpp"

namespace swarmlob::io {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string>;

// A named record set with a fixed header. CSV writes the header and rows as
// is; JSON writes an array of {column: value} objects.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

Table paths_table(std::span<const PredictionPath> paths);          // series,t,x
Table report_table(const IterationReport& report);                 // iter,sup_diff
Table queue_table(const QueueSimStats& stats);                     // class,mean_wait,sem,n
Table queue_table(const PooledQueueStats& pooled);                 // class,mean_wait,sem,n
Table queue_runs_table(const PooledQueueStats& pooled);            // replication,class,...
Table field_table(const FieldGrid& grid);                          // x,y,value
Table agent_paths_table(std::span<const AgentSimPath> paths);      // series,t,x
Table equilibria_table(std::span<const Equilibrium> equilibria);   // ratio,stability

std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

struct Document {
  nlohmann::json meta;
  std::vector<Table> tables;  // tables.front() is the primary result
};

enum class Format { csv, json };

Format parse_format(const std::string& name);

// JSON: one file at `out` holding {"meta": ..., <table name>: [...], ...}.
// CSV: the primary table at `out`, every further table at
// "<stem>.<table name>.csv" next to it, and the meta block at "<out>.meta.json".
// Returns the files written.
std::vector<std::filesystem::path> write_document(const Document& doc,
                                                  const std::filesystem::path& out, Format format);

}  // namespace swarmlob::io

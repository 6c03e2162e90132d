#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ct/config.hpp"

namespace ct {

// FNV-1a 64-bit content hash, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Tabular artifact. Renders as CSV with a header row, the resolved run
// configuration as leading comment lines, and a trailing comment with the
// hash of every preceding byte. Rendering is deterministic: fixed key
// order, fixed 17-digit number formatting.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return data_.size(); }

  std::string render_csv(const RunConfig& cfg) const;
  void write_csv(const std::string& path, const RunConfig& cfg) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

// JSON artifact: {"config": {...}, "data": ..., "content_hash": "..."} where
// the hash covers the serialized config and data subtrees. `data_json` must
// already be serialized JSON (the caller owns its determinism).
std::string render_json_artifact(const RunConfig& cfg, const std::string& data_json);
void write_json_artifact(const std::string& path, const RunConfig& cfg,
                         const std::string& data_json);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ct

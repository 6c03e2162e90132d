#include "ct/artifact.hpp"

#include <fstream>

#include "ct/errors.hpp"

namespace ct {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

void Table::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size())
    throw ConfigInvalid("artifact table: row width does not match the header");
  data_.push_back(row);
}

std::string Table::render_csv(const RunConfig& cfg) const {
  std::string out;
  for (const auto& [k, v] : cfg.items()) {
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : data_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  out += "# content_hash=";
  out += fnv1a64_hex(out);
  out += '\n';
  return out;
}

void Table::write_csv(const std::string& path, const RunConfig& cfg) const {
  write_text_file(path, render_csv(cfg));
}

std::string render_json_artifact(const RunConfig& cfg, const std::string& data_json) {
  std::string body = "{\"config\":{";
  bool first = true;
  for (const auto& [k, v] : cfg.items()) {
    if (!first) body += ',';
    first = false;
    body += '"';
    body += k;
    body += "\":\"";
    for (char c : v) {
      if (c == '"' || c == '\\') body += '\\';
      body += c;
    }
    body += '"';
  }
  body += "},\"data\":";
  body += data_json;
  std::string out = body;
  out += ",\"content_hash\":\"";
  out += fnv1a64_hex(body);
  out += "\"}";
  return out;
}

void write_json_artifact(const std::string& path, const RunConfig& cfg,
                         const std::string& data_json) {
  write_text_file(path, render_json_artifact(cfg, data_json));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigInvalid("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing output file '" + path + "'");
}

}  // namespace ct

#ifndef COMPDIST_TOOLS_OUTPUT_HPP
#define COMPDIST_TOOLS_OUTPUT_HPP

// Uniform output model for the CLI: every subcommand produces a TableDoc
// (resolved config + column names + preformatted cells) which renders to
// CSV with a commented header or to a JSON document. Cells are formatted
// once, so identical configs produce byte-identical payloads and `check`
// can compare recomputed rows literally.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compdist/version.hpp"

namespace compdist_cli {

using nlohmann::json;

struct TableDoc {
  std::string command;
  json config;   // resolved invocation, sufficient to recompute
  json summary;  // scalar results (may be null)
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_count(std::size_t v) { return std::to_string(v); }

inline std::string csv_header(const TableDoc& doc) {
  std::string out;
  out += "# compdist-csv v" + std::to_string(compdist::kSchemaVersion) + "\n";
  out += "# tool: " + std::string(compdist::kToolName) + " " +
         std::string(compdist::kToolVersion) + "\n";
  out += "# command: " + doc.command + "\n";
  out += "# config: " + doc.config.dump() + "\n";
  if (!doc.summary.is_null()) {
    out += "# summary: " + doc.summary.dump() + "\n";
  }
  return out;
}

inline std::string to_csv(const TableDoc& doc) {
  std::string out = csv_header(doc);
  for (std::size_t c = 0; c < doc.columns.size(); ++c) {
    out += doc.columns[c];
    out += (c + 1 < doc.columns.size()) ? ',' : '\n';
  }
  for (const auto& row : doc.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      out += (c + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

inline std::string to_json_doc(const TableDoc& doc) {
  json j;
  j["schema"] = "compdist-json v" + std::to_string(compdist::kSchemaVersion);
  j["tool"] = {{"name", compdist::kToolName}, {"version", compdist::kToolVersion}};
  j["command"] = doc.command;
  j["config"] = doc.config;
  j["summary"] = doc.summary;
  j["columns"] = doc.columns;
  j["rows"] = doc.rows;
  return j.dump(2) + "\n";
}

inline void write_text(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << payload;
}

// Parsed form of a previously written document, for `check`.
struct StoredDoc {
  std::string command;
  json config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline StoredDoc read_stored_doc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string first;
  std::getline(in, first);
  StoredDoc doc;
  if (first.rfind("# compdist-csv", 0) == 0) {
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        if (line.rfind("# command: ", 0) == 0) {
          doc.command = line.substr(11);
        } else if (line.rfind("# config: ", 0) == 0) {
          doc.config = json::parse(line.substr(10));
        }
        continue;
      }
      if (!have_columns) {
        doc.columns = split_csv_line(line);
        have_columns = true;
      } else {
        doc.rows.push_back(split_csv_line(line));
      }
    }
    if (doc.command.empty() || doc.config.is_null()) {
      throw std::runtime_error(path + ": missing command/config header");
    }
    return doc;
  }
  // JSON document or JSON-lines stream.
  in.clear();
  in.seekg(0);
  if (!first.empty() && first[0] == '{' &&
      json::parse(first, nullptr, false).is_object() &&
      json::parse(first, nullptr, false).contains("config") &&
      !json::parse(first, nullptr, false).contains("rows")) {
    // JSON-lines: header object then one record per line.
    std::string line;
    std::getline(in, line);
    const json header = json::parse(line);
    doc.command = header.at("command").get<std::string>();
    doc.config = header.at("config");
    doc.columns = header.at("columns").get<std::vector<std::string>>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json rec = json::parse(line);
      std::vector<std::string> row;
      for (const auto& col : doc.columns) {
        row.push_back(rec.at(col).get<std::string>());
      }
      doc.rows.push_back(row);
    }
    return doc;
  }
  json j;
  in >> j;
  doc.command = j.at("command").get<std::string>();
  doc.config = j.at("config");
  doc.columns = j.at("columns").get<std::vector<std::string>>();
  doc.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  return doc;
}

}  // namespace compdist_cli

#endif

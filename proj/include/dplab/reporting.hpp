#pragma once

// Deterministic report files: CSV tables and JSON summaries, written
// atomically (temp + rename). All floating-point formatting is %.17g so a
// re-run with the same seed is byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dplab/core.hpp"

namespace dplab {

using Json = nlohmann::ordered_json;

inline std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    using Cell = std::variant<double, long long, std::string>;

    void row(std::vector<Cell> cells) {
        if (cells.size() != header_.size()) throw data_error("csv: column count mismatch");
        rows_.push_back(std::move(cells));
    }

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < header_.size(); ++i)
            out += header_[i] + (i + 1 < header_.size() ? "," : "\n");
        for (const auto& r : rows_) {
            for (size_t i = 0; i < r.size(); ++i) {
                if (std::holds_alternative<double>(r[i]))
                    out += format_num(std::get<double>(r[i]));
                else if (std::holds_alternative<long long>(r[i]))
                    out += std::to_string(std::get<long long>(r[i]));
                else
                    out += std::get<std::string>(r[i]);
                out += (i + 1 < r.size() ? "," : "\n");
            }
        }
        return out;
    }

    void save(const std::filesystem::path& path) const { write_file_atomic(path, str()); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

// series/x/y long-format table assembled from a run's report files
struct PlotSeries {
    std::string series;
    std::vector<std::pair<double, double>> points;
};

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read " + path.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

// minimal CSV reader for our own files (no quoting, numeric cells)
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable read(const std::filesystem::path& path) {
        CsvTable t;
        std::istringstream in(read_text_file(path));
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (first) {
                t.header = cells;
                first = false;
            } else {
                t.rows.push_back(cells);
            }
        }
        return t;
    }

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

}  // namespace dplab

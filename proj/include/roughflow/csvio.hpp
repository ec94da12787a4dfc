#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "roughflow/errors.hpp"

namespace roughflow {

// Deterministic CSV writer: fixed %.17g float formatting so that equal
// inputs produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& file) : out_(file) {
        if (!out_) throw config_error("cannot open output file: " + file);
    }

    void header(const std::vector<std::string>& names) { row_strings(names); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    }

  private:
    std::ofstream out_;
};

} // namespace roughflow

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cellwalk/types.hpp"

namespace cellwalk {

/// RFC-4180 style writer: header row, CRLF line endings, '.' decimal
/// separator, shortest round-trip float formatting. Output is byte-identical
/// across reruns for identical inputs.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error("cannot open CSV output file: " + path);
        write_row(header);
    }

    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << "\r\n";
    }

    static std::string field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static std::string field(long v) { return std::to_string(v); }
    static std::string field(int v) { return std::to_string(v); }

private:
    std::ofstream out_;
};

}  // namespace cellwalk

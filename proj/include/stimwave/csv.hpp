#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>

#include "stimwave/version.hpp"

namespace stimwave {

/// Deterministic CSV writer: a '#' comment block recording the run
/// parameters and code version, a header line, then rows of values printed
/// with 12 significant digits. Identical configs give byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {
        comment("stimwave", std::string(version));
    }

    void comment(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }
    void comment(const std::string& key, double value) {
        comment(key, format(value));
    }

    void header(std::initializer_list<std::string> cols) {
        bool first = true;
        for (const auto& c : cols) {
            if (!first) out_ << ",";
            out_ << c;
            first = false;
        }
        out_ << "\n";
    }

    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ",";
            out_ << format(v);
            first = false;
        }
        out_ << "\n";
    }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

  private:
    std::ostream& out_;
};

} // namespace stimwave

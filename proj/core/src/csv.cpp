#include "liq/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace liq::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
}

void Writer::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << names[i];
    }
    out_ << '\n';
}

Writer& Writer::field(const std::string& s) {
    if (row_open_) out_ << ',';
    out_ << s;
    row_open_ = true;
    return *this;
}

Writer& Writer::field(double v) { return field(format(v)); }

Writer& Writer::field(long long v) { return field(std::to_string(v)); }

void Writer::end_row() {
    out_ << '\n';
    row_open_ = false;
}

}  // namespace liq::csv

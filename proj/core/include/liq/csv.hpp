#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace liq::csv {

// Formats doubles with %.17g so a value re-read from the file reproduces the
// original bit pattern and re-runs produce byte-identical output.
std::string format(double v);

class Writer {
public:
    explicit Writer(const std::string& path);

    void header(const std::vector<std::string>& names);
    Writer& field(const std::string& s);
    Writer& field(double v);
    Writer& field(long long v);
    void end_row();

private:
    std::ofstream out_;
    bool row_open_ = false;
};

}  // namespace liq::csv

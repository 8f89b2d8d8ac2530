#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "numfmt.hpp"

namespace graphclust {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

DataMatrix read_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open '" + path + "'");

    DataMatrix m;
    std::string line;
    std::vector<std::string_view> fields;
    long long lineno = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        split_fields(sv, fields);

        if (first_content_line) {
            first_content_line = false;
            bool numeric = true;
            for (auto f : fields) {
                if (!parse_double(f)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) continue; // header row
            m.cols = static_cast<int>(fields.size());
        }
        if (m.cols == 0) m.cols = static_cast<int>(fields.size());

        if (static_cast<int>(fields.size()) != m.cols)
            fail(errc::parse, path + ": line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(m.cols));
        for (auto f : fields) {
            auto v = parse_double(f);
            if (!v) fail(errc::parse, path + ": line " + std::to_string(lineno) + ": cannot parse '" + std::string(f) + "'");
            if (!std::isfinite(*v))
                fail(errc::invalid_argument, path + ": line " + std::to_string(lineno) + ": non-finite value");
            m.values.push_back(*v);
        }
        ++m.rows;
    }

    if (m.rows == 0) fail(errc::parse, path + ": no data rows");
    m.validate();
    return m;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io, "cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) fail(errc::io, "write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        fail(errc::io, "cannot move '" + tmp + "' to '" + path + "'");
    }
}

} // namespace graphclust

#include "airykit/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace airykit {

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

std::string format_g17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string make_csv(const std::vector<std::string>& comments,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (const std::string& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += i + 1 < header.size() ? "," : "\n";
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += format_g17(row[i]);
            out += i + 1 < row.size() ? "," : "\n";
        }
    }
    return out;
}

std::string make_json_table(const std::vector<std::string>& comments,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows)
{
    nlohmann::json j;
    j["config"] = comments;
    j["columns"] = header;
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string make_table(const std::string& format, const std::vector<std::string>& comments,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows)
{
    if (format == "json") return make_json_table(comments, header, rows);
    if (format == "csv") return make_csv(comments, header, rows);
    throw std::invalid_argument("unknown output format: " + format);
}

} // namespace airykit

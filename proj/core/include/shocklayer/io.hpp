#ifndef SHOCKLAYER_IO_HPP
#define SHOCKLAYER_IO_HPP

#include <string>
#include <vector>

namespace shocklayer {

// 17 significant digits: doubles round-trip exactly
std::string format_g17(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace shocklayer

#endif

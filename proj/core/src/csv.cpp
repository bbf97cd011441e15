#include "vhj/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_grid_function_csv(const GridFunction& u, const std::string& path) {
    const Grid& grid = u.grid();
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    if (grid.dimension() == 1) {
        out << "i,x,value\n";
        for (int i = 0; i < grid.node_count(); ++i)
            out << grid.lattice_ix(i) << ',' << format_double(grid.position(i)[0]) << ','
                << format_double(u[i]) << '\n';
    } else {
        out << "i,j,x,y,value\n";
        for (int i = 0; i < grid.node_count(); ++i)
            out << grid.lattice_ix(i) << ',' << grid.lattice_iy(i) << ','
                << format_double(grid.position(i)[0]) << ','
                << format_double(grid.position(i)[1]) << ',' << format_double(u[i]) << '\n';
    }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

std::vector<double> read_value_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty csv: " + path);
    // value column index from the header
    int col = -1, idx = 0;
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) {
        if (tok == "value") col = idx;
        ++idx;
    }
    if (col < 0) throw Error("no 'value' column in " + path);
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        int c = 0;
        while (std::getline(ls, tok, ',')) {
            if (c == col) out.push_back(std::stod(tok));
            ++c;
        }
    }
    return out;
}

}  // namespace vhj

#include "stringlab/fieldio.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stringlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string field_meta_block(const FieldSample& f) {
    std::ostringstream os;
    os << "# stringlab field metadata\n";
    os << "t_min = " << format_double(f.grid.t_min) << "\n";
    os << "t_max = " << format_double(f.grid.t_max) << "\n";
    os << "x_min = " << format_double(f.grid.x_min) << "\n";
    os << "x_max = " << format_double(f.grid.x_max) << "\n";
    os << "n_t = " << f.grid.n_t << "\n";
    os << "n_x = " << f.grid.n_x << "\n";
    os << "d = " << f.d << "\n";
    os << "seed = " << f.seed << "\n";
    os << "jitter_used = " << format_double(f.jitter_used) << "\n";
    return os.str();
}

void write_field_csv(const FieldSample& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    out << "t,x,j,value\n";
    for (int it = 0; it < f.grid.n_t; ++it)
        for (int ix = 0; ix < f.grid.n_x; ++ix)
            for (int j = 0; j < f.d; ++j)
                out << format_double(f.grid.t_at(it)) << ',' << format_double(f.grid.x_at(ix))
                    << ',' << j << ',' << format_double(f.value(it, ix, j)) << "\n";
    std::ofstream meta(path + ".meta", std::ios::binary);
    if (!meta) throw std::runtime_error("write_field_csv: cannot open " + path + ".meta");
    meta << field_meta_block(f);
}

namespace {

std::map<std::string, std::string> parse_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: missing sidecar " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

} // namespace

FieldSample read_field_csv(const std::string& path) {
    auto kv = parse_meta(path + ".meta");
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw std::runtime_error("read_field_csv: sidecar missing key " + k);
        return it->second;
    };
    FieldSample f;
    f.grid.t_min = std::stod(need("t_min"));
    f.grid.t_max = std::stod(need("t_max"));
    f.grid.x_min = std::stod(need("x_min"));
    f.grid.x_max = std::stod(need("x_max"));
    f.grid.n_t = std::stoi(need("n_t"));
    f.grid.n_x = std::stoi(need("n_x"));
    f.d = std::stoi(need("d"));
    f.seed = std::stoull(need("seed"));
    f.jitter_used = std::stod(need("jitter_used"));
    f.grid.validate();
    f.values.assign(f.grid.n_nodes() * f.d, 0.0);

    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,j,value", 0) != 0)
        throw std::runtime_error("read_field_csv: bad header in " + path);
    std::size_t rows = 0;
    const std::size_t expected = f.grid.n_nodes() * f.d;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, x, value;
        int j;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf", &t, &x, &j, &value) != 4)
            throw std::runtime_error("read_field_csv: malformed row: " + line);
        if (rows >= expected) throw std::runtime_error("read_field_csv: too many rows");
        f.values[rows] = value; // rows arrive in dump order: node-major, j inner
        ++rows;
    }
    if (rows != expected)
        throw std::runtime_error("read_field_csv: row count mismatch");
    return f;
}

} // namespace stringlab

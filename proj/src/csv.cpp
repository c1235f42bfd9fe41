#include "cmg/csv.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmg/config_io.hpp"

namespace cmg {

void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    const std::string partial = path + ".partial";
    try {
        {
            std::ofstream out(partial, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("csv", "write", "cannot open " + partial);
            writer(out);
            out.flush();
            if (!out) throw Error("csv", "write", "write failed for " + partial);
        }
        std::filesystem::rename(partial, path);
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(partial, ignored);
        throw;
    }
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("csv", "column", "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const noexcept {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(parse_double(row[c], name));
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& source) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error("csv", "read", source + ":" + std::to_string(line_no) + ": expected " +
                                           std::to_string(table.header.size()) + " fields, got " +
                                           std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw Error("csv", "read", source + ": empty file");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("csv", "read", "cannot open " + path);
    return read_csv(in, path);
}

void write_grid_csv(std::ostream& out, const SweepGrid& grid) {
    out << "axis1,axis2,mean_rho,std_rho,n_runs\n";
    for (const auto& cell : grid.cells) {
        out << format_double(cell.x) << ',' << format_double(cell.y) << ',' << format_double(cell.mean_rho) << ','
            << format_double(cell.std_rho) << ',' << cell.rhos.size() << '\n';
    }
}

namespace {

void write_samples(std::ostream& out, const std::string& prefix, std::size_t run,
                   const std::array<SampleSeries, kStocks>& samples) {
    for (std::size_t j = 0; j < kStocks; ++j) {
        const auto& s = samples[j];
        for (std::size_t k = 0; k < s.realized.size(); ++k) {
            out << prefix << (j + 1) << ',' << run << ',' << (k + 1) << ',' << format_double(s.expected[k]) << ','
                << format_double(s.realized[k]) << '\n';
        }
    }
}

}  // namespace

void write_grid_scatter_csv(std::ostream& out, const SweepGrid& grid) {
    out << "axis1,axis2,stock,run,t,expected_return,return\n";
    for (const auto& cell : grid.cells) {
        const std::string prefix = format_double(cell.x) + ',' + format_double(cell.y) + ',';
        for (std::size_t r = 0; r < cell.samples.size(); ++r) write_samples(out, prefix, r, cell.samples[r]);
    }
}

void write_scatter_csv(std::ostream& out, const std::vector<RunResult>& runs) {
    out << "stock,run,t,expected_return,return\n";
    for (const auto& r : runs) write_samples(out, {}, static_cast<std::size_t>(r.run_index), r.samples);
}

void write_regression_csv(std::ostream& out, const std::array<RegressionReport, kStocks>& reports) {
    out << "stock,beta0,beta1,p_value,r_squared,n\n";
    for (std::size_t j = 0; j < kStocks; ++j) {
        const auto& r = reports[j];
        out << (j + 1) << ',' << format_double(r.beta0) << ',' << format_double(r.beta1) << ','
            << format_double(r.p_value) << ',' << format_double(r.r_squared) << ',' << r.n << '\n';
    }
}

SampleSeries trajectory_samples(const CsvTable& table, std::size_t stock) {
    const std::string suffix = std::to_string(stock + 1);
    const auto r = table.numbers("r" + suffix);
    const auto re = table.numbers("re" + suffix + "_mean");
    SampleSeries s;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        s.realized.push_back(r[k]);
        s.expected.push_back(re[k + 1]);
    }
    return s;
}

SampleSeries scatter_samples(const CsvTable& table, std::size_t stock) {
    const std::size_t stock_col = table.column("stock");
    const std::size_t exp_col = table.column("expected_return");
    const std::size_t ret_col = table.column("return");
    const std::string wanted = std::to_string(stock + 1);
    SampleSeries s;
    for (const auto& row : table.rows) {
        if (row[stock_col] != wanted) continue;
        s.expected.push_back(parse_double(row[exp_col], "expected_return"));
        s.realized.push_back(parse_double(row[ret_col], "return"));
    }
    return s;
}

}  // namespace cmg

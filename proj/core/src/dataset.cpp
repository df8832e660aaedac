#include "gptr/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace gptr {

Dataset::Dataset(Matrix X, Vector z) : inputs(std::move(X)), outputs(std::move(z)) {
    require(inputs.rows() == outputs.size(),
            "Dataset: inputs and outputs must have equal length");
}

void Dataset::append(const Vector& x, double z) {
    if (size() == 0) {
        inputs.resize(1, x.size());
        inputs.row(0) = x.transpose();
        outputs.resize(1);
        outputs[0] = z;
        return;
    }
    require(x.size() == dim(), "Dataset::append: dimension mismatch");
    inputs.conservativeResize(size() + 1, Eigen::NoChange);
    inputs.row(inputs.rows() - 1) = x.transpose();
    outputs.conservativeResize(outputs.size() + 1);
    outputs[outputs.size() - 1] = z;
}

bool try_add_point(Dataset& data, const Vector& x, double z, double min_dist) {
    require(min_dist >= 0.0, "try_add_point: min_dist must be nonnegative");
    if (!data.empty() && min_dist > 0.0) {
        const double d =
            (data.inputs.rowwise() - x.transpose()).rowwise().norm().minCoeff();
        if (d < min_dist) return false;
    }
    data.append(x, z);
    return true;
}

std::string format_double(double v) {
    char buf[40];
    // Shortest representation that round-trips: try increasing precision.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

void write_csv(const Dataset& data, std::ostream& out) {
    for (int j = 0; j < data.dim(); ++j) out << "x_" << (j + 1) << ",";
    out << "z\n";
    for (int i = 0; i < data.size(); ++i) {
        for (int j = 0; j < data.dim(); ++j)
            out << format_double(data.inputs(i, j)) << ",";
        out << format_double(data.outputs[i]) << "\n";
    }
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ArgumentError("write_csv: cannot open " + path);
    write_csv(data, f);
}

Dataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("read_csv: empty file");
    int ncols = 1;
    for (char ch : line)
        if (ch == ',') ++ncols;
    const int dim = ncols - 1;
    require(dim >= 1, "read_csv: header must contain x_1..x_n and z columns");

    std::vector<double> values;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int c = 0;
        while (std::getline(ls, cell, ',')) {
            values.push_back(std::strtod(cell.c_str(), nullptr));
            ++c;
        }
        require(c == ncols, "read_csv: row with wrong column count");
        ++rows;
    }
    Matrix X(rows, dim);
    Vector z(rows);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < dim; ++j) X(i, j) = values[i * ncols + j];
        z[i] = values[i * ncols + dim];
    }
    return Dataset(std::move(X), std::move(z));
}

Dataset read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ArgumentError("read_csv: cannot open " + path);
    return read_csv(f);
}

}  // namespace gptr

#pragma once

#include <iosfwd>
#include <string>

#include "gptr/types.hpp"

namespace gptr {

/// Ordered input/output pairs (x_i, z_i), the surrogate's training data.
/// `inputs` holds one point per row; `outputs` holds the matching noisy
/// observations.
struct Dataset {
    Matrix inputs;   // l x n_x
    Vector outputs;  // l

    Dataset() : inputs(0, 0), outputs(0) {}
    Dataset(Matrix X, Vector z);

    int size() const { return static_cast<int>(inputs.rows()); }
    int dim() const { return static_cast<int>(inputs.cols()); }
    bool empty() const { return size() == 0; }

    Vector point(int i) const { return inputs.row(i).transpose(); }

    /// Unconditional append; fixes the dimension on the first point.
    void append(const Vector& x, double z);
};

/// Appends (x, z) iff x is at least `min_dist` (Euclidean) away from every
/// existing input. Returns whether the point was appended. min_dist = 0
/// always appends; an empty dataset always accepts.
bool try_add_point(Dataset& data, const Vector& x, double z, double min_dist);

/// CSV round trip. Header "x_1,...,x_{n},z"; values printed with enough
/// digits to reproduce each double bit for bit.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::string& path);
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace gptr

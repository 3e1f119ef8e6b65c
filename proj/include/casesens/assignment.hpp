#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace casesens {

// Dense row-major cost matrix.
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    CostMatrix() = default;
    CostMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}
    CostMatrix(std::initializer_list<std::initializer_list<double>> init);

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct Assignment {
    std::vector<std::size_t> row_to_col;
    double total = 0.0;
};

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// Hungarian method with potentials, O(rows^2 * cols).
Assignment solve_assignment(const CostMatrix& cost);

// Each row receives exactly k distinct columns, no column used twice,
// minimizing the summed cost. Requires rows * k <= cols.
struct GroupAssignment {
    std::vector<std::vector<std::size_t>> row_to_cols;  // sorted per row
    double total = 0.0;
};
GroupAssignment solve_group_assignment(const CostMatrix& cost, std::size_t k);

}  // namespace casesens

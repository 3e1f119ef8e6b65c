#include "casesens/assignment.hpp"

#include <algorithm>
#include <limits>

#include "casesens/error.hpp"

namespace casesens {

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> init)
    : rows(init.size()), cols(init.size() == 0 ? 0 : init.begin()->size()) {
    values.reserve(rows * cols);
    for (const auto& row : init) {
        if (row.size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged cost matrix");
        values.insert(values.end(), row.begin(), row.end());
    }
}

Assignment solve_assignment(const CostMatrix& cost) {
    const std::size_t n = cost.rows;
    const std::size_t m = cost.cols;
    if (n > m) throw Error(ErrorCode::InvalidArgument, "assignment needs rows <= cols");
    Assignment out;
    if (n == 0) return out;

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    out.row_to_col.assign(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (owner[j] != 0) out.row_to_col[owner[j] - 1] = j - 1;
    }
    for (std::size_t i = 0; i < n; ++i) out.total += cost(i, out.row_to_col[i]);
    return out;
}

GroupAssignment solve_group_assignment(const CostMatrix& cost, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (cost.rows * k > cost.cols) {
        throw Error(ErrorCode::InvalidArgument, "not enough columns for k per row");
    }
    CostMatrix expanded(cost.rows * k, cost.cols);
    for (std::size_t r = 0; r < cost.rows; ++r) {
        for (std::size_t s = 0; s < k; ++s) {
            for (std::size_t c = 0; c < cost.cols; ++c) expanded(r * k + s, c) = cost(r, c);
        }
    }
    const Assignment flat = solve_assignment(expanded);
    GroupAssignment out;
    out.row_to_cols.resize(cost.rows);
    for (std::size_t r = 0; r < flat.row_to_col.size(); ++r) {
        out.row_to_cols[r / k].push_back(flat.row_to_col[r]);
    }
    for (std::size_t r = 0; r < cost.rows; ++r) {
        auto& cols = out.row_to_cols[r];
        std::sort(cols.begin(), cols.end());
        for (std::size_t c : cols) out.total += cost(r, c);
    }
    return out;
}

}  // namespace casesens

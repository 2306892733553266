#include "qvar/linalg.hpp"

#include <algorithm>

namespace qvar {

int exact_rank(const RationalMatrix &m) {
    if (m.empty())
        return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();

    std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        BigInt l = 1;
        for (const auto &q : m[i])
            l = boost::multiprecision::lcm(l, denominator(q));
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] = numerator(m[i][j]) * (l / denominator(m[i][j]));
    }

    BigInt prev_pivot = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev_pivot;
            a[i][col] = 0;
        }
        prev_pivot = a[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

int numeric_rank(const Eigen::MatrixXcd &m, double rel_tol, double abs_floor) {
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto &s = svd.singularValues();
    const double smax = s.size() ? s.maxCoeff() : 0.0;
    if (smax <= abs_floor || smax == 0.0)
        return 0;
    return static_cast<int>(std::count_if(s.data(), s.data() + s.size(), [&](double v) { return v > rel_tol * smax; }));
}

} // namespace qvar

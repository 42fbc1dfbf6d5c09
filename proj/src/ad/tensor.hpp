#pragma once

#include <optional>
#include <string>
#include <vector>

namespace asqg::ad {

// Dense row-major float64 tensor of rank 1 or 2. Immutable by convention
// once handed to a Tape; grad is populated by Tape::backward on
// requires_grad leaves.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;
    bool requires_grad = false;
    std::optional<std::vector<double>> grad;

    Tensor() = default;
    Tensor(std::vector<int> shape_, std::vector<double> values_, bool requires_grad_ = false);

    static Tensor scalar(double v, bool requires_grad = false);
    static Tensor vector(std::vector<double> v, bool requires_grad = false);
    static Tensor matrix(int rows, int cols, std::vector<double> v, bool requires_grad = false);
    static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
    static Tensor full(std::vector<int> shape, double fill, bool requires_grad = false);

    size_t numel() const { return values.size(); }
    int rank() const { return static_cast<int>(shape.size()); }
    int rows() const { return shape.empty() ? 0 : shape[0]; }
    int cols() const { return rank() < 2 ? 1 : shape[1]; }

    double at(int i) const { return values[static_cast<size_t>(i)]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * static_cast<size_t>(cols()) + static_cast<size_t>(j)]; }

    std::string shape_str() const;
};

// Throws ShapeError naming both shapes when they differ.
void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace asqg::ad

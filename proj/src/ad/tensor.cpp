#include "ad/tensor.hpp"

#include <numeric>

#include "util/errors.hpp"

namespace asqg::ad {

namespace {
size_t shape_numel(const std::vector<int>& shape) {
    size_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeError("tensor dimensions must be positive");
        n *= static_cast<size_t>(d);
    }
    return n;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape_, std::vector<double> values_, bool requires_grad_)
    : shape(std::move(shape_)), values(std::move(values_)), requires_grad(requires_grad_) {
    if (shape.empty() || shape.size() > 2) throw ShapeError("tensor rank must be 1 or 2");
    if (shape_numel(shape) != values.size())
        throw ShapeError("tensor shape " + shape_str() + " does not match " +
                         std::to_string(values.size()) + " values");
}

Tensor Tensor::scalar(double v, bool requires_grad) {
    return Tensor({1}, {v}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> v, bool requires_grad) {
    int n = static_cast<int>(v.size());
    return Tensor({n}, std::move(v), requires_grad);
}

Tensor Tensor::matrix(int rows, int cols, std::vector<double> v, bool requires_grad) {
    return Tensor({rows, cols}, std::move(v), requires_grad);
}

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
    return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(std::vector<int> shape, double fill, bool requires_grad) {
    size_t n = shape_numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, fill), requires_grad);
}

std::string Tensor::shape_str() const {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape != b.shape)
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

}  // namespace asqg::ad

#pragma once

#include <functional>
#include <vector>

#include "ad/rng.hpp"
#include "ad/tensor.hpp"

namespace asqg::ad {

class Tape;

// Handle to a node on a tape. Cheap to copy; valid for the tape's lifetime.
struct Value {
    Tape* tape = nullptr;
    int id = -1;

    const Tensor& t() const;
    size_t numel() const { return t().numel(); }
};

// Reverse-mode autodiff tape. Records every operation with its inputs and
// backward rule in topological order; backward() replays them in reverse.
// Single-threaded per instance.
class Tape {
public:
    Value leaf(Tensor t);
    Value constant(Tensor t);  // leaf with requires_grad forced off

    // Populates gradients for every node reachable from `loss`; requires_grad
    // leaves additionally get their Tensor::grad field filled (zero when the
    // leaf is not reachable). Deterministic and repeatable.
    void backward(Value loss);

    const Tensor& at(Value v) const;
    const std::vector<double>& grad(Value v) const;
    Tensor grad_tensor(Value v) const;  // grad wrapped in the node's shape

    size_t size() const { return nodes_.size(); }

    // -- internal emission API used by the op free functions --
    using BackFn = std::function<void(Tape&, int)>;
    Value emit(Tensor out, std::vector<int> parents, BackFn back);
    std::vector<double>& g(int id) { return grads_[static_cast<size_t>(id)]; }
    const Tensor& val(int id) const { return nodes_[static_cast<size_t>(id)].value; }
    bool needs_grad(int id) const { return nodes_[static_cast<size_t>(id)].needs_grad; }

private:
    struct Node {
        Tensor value;
        std::vector<int> parents;
        BackFn back;  // empty for leaves
        bool needs_grad = false;
    };

    std::vector<Node> nodes_;
    std::vector<std::vector<double>> grads_;
    bool has_grads_ = false;
};

// Elementwise
Value operator+(Value a, Value b);
Value operator-(Value a, Value b);
Value operator*(Value a, Value b);  // hadamard
Value scale(Value a, double k);
Value tanh(Value a);
Value sigmoid(Value a);

// Linear algebra
Value matmul(Value a, Value b);        // [m,k] x [k,n] -> [m,n]
Value matvec(Value a, Value x);        // [m,k] x [k]   -> [m]
Value vecmat(Value x, Value a);        // [k]   x [k,n] -> [n]
Value dot(Value x, Value y);           // [n] . [n]     -> [1]
Value add_rowvec(Value m, Value v);    // [r,c] + [c] broadcast over rows

// Structural
Value concat(const std::vector<Value>& parts);      // rank-1 concat
Value slice(Value v, int offset, int len);          // rank-1 slice
Value row(Value m, int i);                          // matrix row -> [cols]
Value stack_rows(const std::vector<Value>& rows);   // n x [c] -> [n,c]
Value pick(Value v, int i);                         // element -> [1]
Value sum(Value a);                                 // all elements -> [1]

// Nonlinear / stochastic. `valid` masks positions out of the softmax
// support (their probability is exactly zero); null means all valid.
Value softmax(Value v, const std::vector<uint8_t>* valid = nullptr);
Value log_softmax(Value v, const std::vector<uint8_t>* valid = nullptr);
Value dropout(Value x, double p_drop, bool training, Rng& rng);
Value weight_norm(Value direction, Value gain);

}  // namespace asqg::ad

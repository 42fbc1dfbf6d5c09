#pragma once

#include <cstdint>
#include <vector>

#include "ad/tensor.hpp"

namespace asqg::ad {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed-order parameter list. Moments are aligned
// with the parameter order given at init and stay zero-initialized.
class AdamState {
public:
    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : cfg_(cfg) {}

    void init(const std::vector<const Tensor*>& params);
    bool initialized() const { return !m_.empty(); }

    // One update. `grads[i]` must match `params[i]` in size; t increments by 1.
    void step(std::vector<Tensor*>& params, const std::vector<const std::vector<double>*>& grads);

    int64_t t() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

    // Checkpoint access
    std::vector<std::vector<double>>& first_moments() { return m_; }
    std::vector<std::vector<double>>& second_moments() { return v_; }
    void restore(AdamConfig cfg, int64_t t, std::vector<std::vector<double>> m,
                 std::vector<std::vector<double>> v);

private:
    AdamConfig cfg_;
    int64_t t_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

}  // namespace asqg::ad

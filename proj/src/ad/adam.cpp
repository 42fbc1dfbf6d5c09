#include "ad/adam.hpp"

#include <cmath>

#include "util/errors.hpp"

namespace asqg::ad {

void AdamState::init(const std::vector<const Tensor*>& params) {
    m_.clear();
    v_.clear();
    t_ = 0;
    for (const Tensor* p : params) {
        m_.emplace_back(p->numel(), 0.0);
        v_.emplace_back(p->numel(), 0.0);
    }
}

void AdamState::step(std::vector<Tensor*>& params, const std::vector<const std::vector<double>*>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
        throw ShapeError("adam_step: parameter count mismatch");
    ++t_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const std::vector<double>& g = *grads[i];
        if (g.size() != p.numel() || m_[i].size() != p.numel())
            throw ShapeError("adam_step: shape mismatch for parameter " + std::to_string(i) +
                             " (" + p.shape_str() + ")");
        for (size_t j = 0; j < g.size(); ++j) {
            m_[i][j] = cfg_.beta1 * m_[i][j] + (1.0 - cfg_.beta1) * g[j];
            v_[i][j] = cfg_.beta2 * v_[i][j] + (1.0 - cfg_.beta2) * g[j] * g[j];
            double mhat = m_[i][j] / bc1;
            double vhat = v_[i][j] / bc2;
            p.values[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
        }
    }
}

void AdamState::restore(AdamConfig cfg, int64_t t, std::vector<std::vector<double>> m,
                        std::vector<std::vector<double>> v) {
    cfg_ = cfg;
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
}

}  // namespace asqg::ad

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ad/rng.hpp"
#include "ad/tensor.hpp"
#include "text/embeddings.hpp"

namespace asqg::model {

// Architecture dimensions and ablation switches. Hidden sizes are per
// direction for the bi-LSTM encoders.
struct ModelConfig {
    int d_enc = 32;
    int d_dec = 32;
    int d_att = 32;
    int emb_dim = 300;
    int keyword_layers = 4;
    int vocab_size = 0;
    double p_drop = 0.4;

    bool mask_answer = true;          // off: ASs2s-<a> ablation
    bool keyword_net = true;          // off: ASs2s-keyword ablation
    bool answer_decoder = true;       // off: ASs2s-ASdec ablation (generic decoder)
    bool retrieval_generator = true;  // off: plain projection output layer

    int d_q() const { return d_dec; }
    bool use_keyword() const { return keyword_net && answer_decoder; }
    int dec_input_dim() const {
        return emb_dim + 2 * d_enc + (use_keyword() ? 2 * d_enc : 0);
    }
};

// Named trainable tensors in a fixed order. The order is the contract for
// the optimizer state and the checkpoint layout.
class ModelParams {
public:
    static ModelParams init(const ModelConfig& cfg, const ad::Rng& rng);

    const ModelConfig& config() const { return cfg_; }

    int count() const { return static_cast<int>(tensors_.size()); }
    const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }
    ad::Tensor& tensor(int i) { return tensors_[static_cast<size_t>(i)]; }
    const ad::Tensor& tensor(int i) const { return tensors_[static_cast<size_t>(i)]; }

    bool has(const std::string& name) const { return index_.count(name) > 0; }
    ad::Tensor& at(const std::string& name);
    const ad::Tensor& at(const std::string& name) const;

    // Per-row freeze mask for the embedding matrix ("emb").
    std::vector<uint8_t>& emb_row_trainable() { return emb_row_trainable_; }
    const std::vector<uint8_t>& emb_row_trainable() const { return emb_row_trainable_; }

    // Installs a loaded embedding matrix (shape-checked against the config).
    void set_embeddings(text::EmbeddingMatrix emb);

    int64_t total_parameters() const;

private:
    void add(std::string name, ad::Tensor t);

    ModelConfig cfg_;
    std::vector<std::string> names_;
    std::vector<ad::Tensor> tensors_;
    std::unordered_map<std::string, int> index_;
    std::vector<uint8_t> emb_row_trainable_;
};

}  // namespace asqg::model

#include "model/params.hpp"

#include "util/errors.hpp"

namespace asqg::model {

using ad::Rng;
using ad::Tensor;

namespace {

Tensor uniform_tensor(std::vector<int> shape, Rng rng) {
    Tensor t = Tensor::zeros(std::move(shape), /*requires_grad=*/true);
    for (double& v : t.values) v = rng.uniform(-0.1, 0.1);
    return t;
}

// Fused-gate LSTM bias with the forget gate initialized to 1.
Tensor lstm_bias(int d, Rng rng) {
    Tensor b = uniform_tensor({4 * d}, rng);
    for (int i = d; i < 2 * d; ++i) b.values[static_cast<size_t>(i)] = 1.0;
    return b;
}

}  // namespace

void ModelParams::add(std::string name, Tensor t) {
    index_.emplace(name, static_cast<int>(tensors_.size()));
    names_.push_back(std::move(name));
    tensors_.push_back(std::move(t));
}

ModelParams ModelParams::init(const ModelConfig& cfg, const Rng& rng) {
    if (cfg.vocab_size <= 0) throw ShapeError("model config: vocab_size must be positive");
    ModelParams p;
    p.cfg_ = cfg;

    auto u = [&](const std::string& name, std::vector<int> shape) {
        p.add(name, uniform_tensor(std::move(shape), rng.child(name)));
    };

    u("emb", {cfg.vocab_size, cfg.emb_dim});
    p.emb_row_trainable_.assign(static_cast<size_t>(cfg.vocab_size), 1);

    for (const char* enc : {"enc_p", "enc_a"}) {
        if (std::string(enc) == "enc_a" && !cfg.answer_decoder) continue;
        for (const char* dir : {"fwd", "bwd"}) {
            std::string base = std::string(enc) + "." + dir;
            u(base + ".W", {4 * cfg.d_enc, cfg.emb_dim});
            u(base + ".U", {4 * cfg.d_enc, cfg.d_enc});
            p.add(base + ".b", lstm_bias(cfg.d_enc, rng.child(base + ".b")));
        }
    }

    if (cfg.answer_decoder) u("dec.W_init", {cfg.d_dec, 2 * cfg.d_enc});
    u("dec.lstm.W", {4 * cfg.d_dec, cfg.dec_input_dim()});
    u("dec.lstm.U", {4 * cfg.d_dec, cfg.d_dec});
    p.add("dec.lstm.b", lstm_bias(cfg.d_dec, rng.child("dec.lstm.b")));

    u("att.Wc_dir", {cfg.d_dec, cfg.d_att});
    p.add("att.Wc_gain", Tensor::scalar(1.0, /*requires_grad=*/true));
    u("att.Uc_dir", {2 * cfg.d_enc, cfg.d_att});
    p.add("att.Uc_gain", Tensor::scalar(1.0, /*requires_grad=*/true));
    u("att.v", {cfg.d_att});

    if (cfg.retrieval_generator) {
        u("gen.Wq", {cfg.d_q(), cfg.d_dec + 2 * cfg.d_enc});
        u("gen.Wa", {cfg.d_q(), cfg.emb_dim});
    } else {
        u("gen.Wo", {cfg.vocab_size, cfg.d_dec});
    }
    return p;
}

ad::Tensor& ModelParams::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ShapeError("unknown parameter: " + name);
    return tensors_[static_cast<size_t>(it->second)];
}

const ad::Tensor& ModelParams::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ShapeError("unknown parameter: " + name);
    return tensors_[static_cast<size_t>(it->second)];
}

void ModelParams::set_embeddings(text::EmbeddingMatrix emb) {
    Tensor& e = at("emb");
    if (emb.weights.shape != e.shape)
        throw ShapeError("embedding shape " + emb.weights.shape_str() + " does not match model " +
                         e.shape_str());
    emb.weights.requires_grad = true;
    e = std::move(emb.weights);
    emb_row_trainable_ = std::move(emb.row_trainable);
}

int64_t ModelParams::total_parameters() const {
    int64_t n = 0;
    for (const auto& t : tensors_) n += static_cast<int64_t>(t.numel());
    return n;
}

}  // namespace asqg::model

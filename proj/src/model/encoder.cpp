#include "model/graph.hpp"

#include "text/types.hpp"
#include "util/errors.hpp"

namespace asqg::model {

using ad::Value;

ModelGraph::ModelGraph(ad::Tape& tape, const ModelParams& params, bool training, ad::Rng rng)
    : tape_(tape), params_(params), cfg_(params.config()), training_(training), rng_(rng) {
    for (int i = 0; i < params.count(); ++i)
        bound_.emplace(params.name(i), tape_.leaf(params.tensor(i)));
}

Value ModelGraph::param(const std::string& name) const {
    auto it = bound_.find(name);
    if (it == bound_.end()) throw ShapeError("graph has no parameter: " + name);
    return it->second;
}

ModelGraph::LstmVars ModelGraph::lstmars_unused();  // not defined

ModelGraph::LstmVars ModelGraph::lstm_vars(const std::string& base, int d) const {
    return LstmVars{param(base + ".W"), param(base + ".U"), param(base + ".b"), d};
}

std::pair<Value, Value> ModelGraph::lstm_step(const LstmVars& cell, Value x, Value h, Value c) {
    Value z = matvec(cell.W, x) + matvec(cell.U, h) + cell.b;
    int d = cell.d;
    Value i = sigmoid(slice(z, 0, d));
    Value f = sigmoid(slice(z, d, d));
    Value o = sigmoid(slice(z, 2 * d, d));
    Value g = ad::tanh(slice(z, 3 * d, d));
    Value c_next = f * c + i * g;
    Value h_next = o * ad::tanh(c_next);
    return {h_next, c_next};
}

Value ModelGraph::embed(int id) {
    const ad::Tensor& e = params_.at("emb");
    if (id < 0 || id >= e.shape[0])
        throw ShapeError("token id " + std::to_string(id) + " outside vocabulary of " +
                         std::to_string(e.shape[0]));
    return row(param("emb"), id);
}

Value ModelGraph::drop(Value v) {
    return dropout(v, cfg_.p_drop, training_, rng_);
}

std::vector<Value> ModelGraph::bi_scan(const std::vector<int>& ids, const std::string& enc,
                                       std::vector<ad::Value>* fwd_states,
                                       std::vector<ad::Value>* bwd_states) {
    if (ids.empty()) throw ShapeError(enc + ": empty input sequence");
    int n = static_cast<int>(ids.size());
    int d = cfg_.d_enc;
    LstmVars fwd = lstm_vars(enc + ".fwd", d);
    LstmVars bwd = lstm_vars(enc + ".bwd", d);

    std::vector<Value> inputs;
    inputs.reserve(static_cast<size_t>(n));
    for (int id : ids) inputs.push_back(drop(embed(id)));

    Value zero = tape_.constant(ad::Tensor::zeros({d}));
    std::vector<Value> fh(static_cast<size_t>(n), zero);
    std::vector<Value> bh(static_cast<size_t>(n), zero);

    Value h = zero, c = zero;
    for (int i = 0; i < n; ++i) {
        auto [h2, c2] = lstm_step(fwd, inputs[static_cast<size_t>(i)], h, c);
        fh[static_cast<size_t>(i)] = h2;
        h = h2;
        c = c2;
    }
    h = zero;
    c = zero;
    for (int i = n - 1; i >= 0; --i) {
        auto [h2, c2] = lstm_step(bwd, inputs[static_cast<size_t>(i)], h, c);
        bh[static_cast<size_t>(i)] = h2;
        h = h2;
        c = c2;
    }

    std::vector<Value> states;
    states.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        states.push_back(drop(concat({fh[static_cast<size_t>(i)], bh[static_cast<size_t>(i)]})));
    if (fwd_states) *fwd_states = std::move(fh);
    if (bwd_states) *bwd_states = std::move(bh);
    return states;
}

EncodedPassage ModelGraph::encode_passage(const std::vector<int>& ids) {
    EncodedPassage out;
    out.states = bi_scan(ids, "enc_p", nullptr, nullptr);
    out.matrix = stack_rows(out.states);
    out.length = static_cast<int>(ids.size());
    return out;
}

EncodedAnswer ModelGraph::encode_answer(const std::vector<int>& ids) {
    if (!cfg_.answer_decoder)
        throw ShapeError("encode_answer: model built without the answer-separated decoder");
    EncodedAnswer out;
    std::vector<Value> fh, bh;
    out.states = bi_scan(ids, "enc_a", &fh, &bh);
    out.matrix = stack_rows(out.states);
    // Final answer vector: last state of each direction (forward ends at m,
    // backward ends at position 1).
    out.final_state = concat({fh.back(), bh.front()});
    return out;
}

}  // namespace asqg::model

#pragma once

#include <optional>
#include <vector>

#include "ad/tape.hpp"
#include "model/params.hpp"

namespace asqg::model {

// Passage states h^p_i = [fwd_i ; bwd_i], one per position, plus the same
// states stacked into an [n x 2*d_enc] matrix for attention.
struct EncodedPassage {
    std::vector<ad::Value> states;
    ad::Value matrix;
    int length = 0;
};

// Answer states plus the final vector [fwd_m ; bwd_1] used to initialize
// the decoder.
struct EncodedAnswer {
    std::vector<ad::Value> states;
    ad::Value matrix;
    ad::Value final_state;
};

struct DecoderState {
    ad::Value h;
    ad::Value c;
};

struct AttendResult {
    ad::Value alpha;    // [n], sums to 1 over valid positions
    ad::Value context;  // [2*d_enc]
};

// One forward computation over a tape: binds the parameters as leaves and
// wires the encoder/decoder equations. Training mode enables dropout fed by
// the rng handed in; eval mode is deterministic.
class ModelGraph {
public:
    ModelGraph(ad::Tape& tape, const ModelParams& params, bool training, ad::Rng rng);

    const ModelConfig& config() const { return cfg_; }
    ad::Value param(const std::string& name) const;

    EncodedPassage encode_passage(const std::vector<int>& ids);
    EncodedAnswer encode_answer(const std::vector<int>& ids);

    // s0 = tanh(W_init h_a_final); zero state when the answer-separated
    // decoder is ablated (pass nullptr in that case).
    DecoderState init_state(const EncodedAnswer* answer);

    // e_i = v^T tanh(Wc s + Uc h_i), alpha = softmax(e), c = sum alpha_i h_i.
    // `valid`, when given, masks padded positions out of the softmax.
    AttendResult attend(const DecoderState& prev, ad::Value passage_matrix,
                        const std::vector<uint8_t>* valid = nullptr);

    // Parameter-free iterated dot-product attention over the answer states,
    // seeded with the context vector. layers==0 returns the context
    // unchanged. p_layers, when given, receives each layer's weights.
    ad::Value keyword_net(ad::Value context, ad::Value answer_matrix, int layers,
                          std::vector<ad::Value>* p_layers = nullptr);

    // One decoder LSTM update; input is [emb(y_prev); c_t] plus the keyword
    // vector when the keyword-net is active.
    DecoderState decode_step(int y_prev_id, const DecoderState& prev, ad::Value context,
                             const std::optional<ad::Value>& keyword);

    // Output distribution over the vocabulary. `exclude`, when given, marks
    // ids removed from the support in addition to PAD.
    ad::Value output_scores(const DecoderState& state, ad::Value context);
    ad::Value output_log_probs(const DecoderState& state, ad::Value context,
                               const std::vector<int>* exclude = nullptr);
    ad::Value output_probs(const DecoderState& state, ad::Value context,
                           const std::vector<int>* exclude = nullptr);

    std::vector<uint8_t> vocab_mask(const std::vector<int>* exclude) const;

private:
    struct LstmVars {
        ad::Value W, U, b;
        int d = 0;
    };

    LstmVars lstm_vars(const std::string& base, int d) const;
    std::pair<ad::Value, ad::Value> lstm_step(const LstmVars& cell, ad::Value x, ad::Value h,
                                              ad::Value c);
    ad::Value embed(int id);
    ad::Value drop(ad::Value v);
    std::vector<ad::Value> bi_scan(const std::vector<int>& ids, const std::string& enc,
                                   std::vector<ad::Value>* fwd_states,
                                   std::vector<ad::Value>* bwd_states);

    ad::Tape& tape_;
    const ModelParams& params_;
    ModelConfig cfg_;
    bool training_;
    ad::Rng rng_;
    std::unordered_map<std::string, ad::Value> bound_;
    std::optional<ad::Value> wc_eff_, uc_eff_;  // weight-normalized attention matrices
};

}  // namespace asqg::model

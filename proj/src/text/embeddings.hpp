#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ad/rng.hpp"
#include "ad/tensor.hpp"
#include "text/vocab.hpp"

namespace asqg::text {

// Vocabulary embedding matrix with per-row freeze information. Rows copied
// from a pretrained file stay fixed during training; reserved-token and
// out-of-file rows are trainable.
struct EmbeddingMatrix {
    ad::Tensor weights;                    // [|V| x dim], requires_grad
    std::vector<uint8_t> row_trainable;    // 1 = updated by the optimizer
};

// All rows trainable, uniform(-0.1, 0.1).
EmbeddingMatrix init_embeddings(const Vocab& vocab, int dim, ad::Rng& rng);

// GloVe text format: `word v1 ... v<dim>` per line. In-file rows are copied
// verbatim and frozen; all other rows are drawn uniform(-0.1, 0.1) from the
// rng regardless of file contents, so initialization is reproducible.
// Throws UsageError with the line number on malformed lines or wrong dim.
EmbeddingMatrix load_embeddings(const Vocab& vocab, const std::string& glove_path, ad::Rng& rng,
                                int dim = 300);

}  // namespace asqg::text

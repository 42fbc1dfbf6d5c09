#include "text/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "util/errors.hpp"

namespace asqg::text {

EmbeddingMatrix init_embeddings(const Vocab& vocab, int dim, ad::Rng& rng) {
    int v = vocab.size();
    ad::Tensor w = ad::Tensor::zeros({v, dim}, /*requires_grad=*/true);
    for (double& x : w.values) x = rng.uniform(-0.1, 0.1);
    return EmbeddingMatrix{std::move(w), std::vector<uint8_t>(static_cast<size_t>(v), 1)};
}

EmbeddingMatrix load_embeddings(const Vocab& vocab, const std::string& glove_path, ad::Rng& rng,
                                int dim) {
    std::ifstream in(glove_path, std::ios::binary);
    if (!in) throw UsageError("cannot open embeddings file: " + glove_path);

    EmbeddingMatrix emb = init_embeddings(vocab, dim, rng);

    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vec;
        vec.reserve(static_cast<size_t>(dim));
        double x;
        while (ss >> x) vec.push_back(x);
        if (!ss.eof())
            throw UsageError("embeddings line " + std::to_string(line_no) + ": malformed value");
        if (static_cast<int>(vec.size()) != dim)
            throw UsageError("embeddings line " + std::to_string(line_no) + ": expected " +
                             std::to_string(dim) + " dimensions, got " + std::to_string(vec.size()));
        if (!vocab.contains(word)) continue;
        int id = vocab.id_of(word);
        if (id < kNumReserved) continue;  // reserved rows stay trainable
        for (int j = 0; j < dim; ++j)
            emb.weights.values[static_cast<size_t>(id) * static_cast<size_t>(dim) + static_cast<size_t>(j)] = vec[static_cast<size_t>(j)];
        emb.row_trainable[static_cast<size_t>(id)] = 0;
    }
    return emb;
}

}  // namespace asqg::text

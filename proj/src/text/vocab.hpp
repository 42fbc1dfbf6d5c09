#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "text/types.hpp"

namespace asqg::text {

// Token <-> id bijection with the five reserved entries at ids 0..4.
class Vocab {
public:
    Vocab();                                      // reserved tokens only
    explicit Vocab(std::vector<std::string> tokens);  // full id-ordered list

    // The `cap` most frequent corpus tokens plus the reserved entries.
    // Frequency ties break by first occurrence order, so builds are
    // deterministic for a fixed corpus.
    static Vocab build(const std::vector<std::vector<std::string>>& corpus, int cap = 34000);

    int id_of(const std::string& token) const;    // kUnkId when absent
    const std::string& token_of(int id) const;    // throws on out-of-range
    bool contains(const std::string& token) const;
    int size() const { return static_cast<int>(id_to_token_.size()); }

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;

    const std::vector<std::string>& tokens() const { return id_to_token_; }

    void save(const std::string& path) const;     // one token per line, id order
    static Vocab load(const std::string& path);

private:
    void index_tokens();

    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
};

}  // namespace asqg::text

#include "text/vocab.hpp"

#include <algorithm>
#include <fstream>

#include "util/errors.hpp"

namespace asqg::text {

namespace {
const std::vector<std::string>& reserved_tokens() {
    static const std::vector<std::string> kReserved = {kPadToken, kUnkToken, kSosToken,
                                                       kEosToken, kMaskToken};
    return kReserved;
}
}  // namespace

Vocab::Vocab() : id_to_token_(reserved_tokens()) { index_tokens(); }

Vocab::Vocab(std::vector<std::string> tokens) : id_to_token_(std::move(tokens)) {
    if (id_to_token_.size() < kNumReserved)
        throw UsageError("vocab missing reserved tokens");
    for (int i = 0; i < kNumReserved; ++i)
        if (id_to_token_[static_cast<size_t>(i)] != reserved_tokens()[static_cast<size_t>(i)])
            throw UsageError("vocab id " + std::to_string(i) + " is not the reserved token");
    index_tokens();
}

void Vocab::index_tokens() {
    token_to_id_.clear();
    token_to_id_.reserve(id_to_token_.size());
    for (size_t i = 0; i < id_to_token_.size(); ++i) {
        auto [it, inserted] = token_to_id_.emplace(id_to_token_[i], static_cast<int>(i));
        if (!inserted) throw UsageError("duplicate vocab token: " + id_to_token_[i]);
    }
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& corpus, int cap) {
    if (cap < 1) throw UsageError("vocab cap must be >= 1");
    struct Entry {
        int64_t count = 0;
        int64_t first = 0;
    };
    std::unordered_map<std::string, Entry> freq;
    int64_t position = 0;
    for (const auto& seq : corpus) {
        for (const auto& tok : seq) {
            auto [it, inserted] = freq.try_emplace(tok, Entry{0, position});
            it->second.count += 1;
            ++position;
        }
    }
    for (const auto& r : reserved_tokens()) freq.erase(r);

    std::vector<std::pair<std::string, Entry>> items(freq.begin(), freq.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) return a.second.count > b.second.count;
        return a.second.first < b.second.first;
    });

    std::vector<std::string> tokens = reserved_tokens();
    for (size_t i = 0; i < items.size() && i < static_cast<size_t>(cap); ++i)
        tokens.push_back(items[i].first);
    return Vocab(std::move(tokens));
}

int Vocab::id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token_of(int id) const {
    if (id < 0 || id >= size()) throw UsageError("token id " + std::to_string(id) + " out of range");
    return id_to_token_[static_cast<size_t>(id)];
}

bool Vocab::contains(const std::string& token) const {
    return token_to_id_.count(token) > 0;
}

std::vector<int> Vocab::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id_of(t));
    return ids;
}

std::vector<std::string> Vocab::decode(const std::vector<int>& ids) const {
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (int id : ids) tokens.push_back(token_of(id));
    return tokens;
}

void Vocab::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write vocab file: " + path);
    for (const auto& tok : id_to_token_) out << tok << '\n';
}

Vocab Vocab::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open vocab file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.push_back(line);
    }
    while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
    return Vocab(std::move(tokens));
}

}  // namespace asqg::text

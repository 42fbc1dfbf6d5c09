#include "text/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "util/errors.hpp"

namespace asqg::text {

void MatchingTable::insert(std::string tag, std::string surface) {
    entries_.emplace_back(std::move(tag), std::move(surface));
}

std::optional<std::string> MatchingTable::surface_of(const std::string& tag) const {
    for (const auto& [k, v] : entries_)
        if (k == tag) return v;
    return std::nullopt;
}

std::optional<std::string> MatchingTable::tag_of(const std::string& type, const std::string& surface) const {
    for (const auto& [k, v] : entries_)
        if (v == surface && k.rfind(type + "_", 0) == 0) return k;
    return std::nullopt;
}

std::vector<std::string> split_tokens(const std::string& joined) {
    std::vector<std::string> out;
    std::istringstream ss(joined);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

MaskedTriplet mask_answer(const Triplet& t) {
    int n = static_cast<int>(t.passage_tokens.size());
    if (t.answer_start < 0 || t.answer_end > n || t.answer_start >= t.answer_end) {
        throw UsageError("invalid answer span [" + std::to_string(t.answer_start) + "," +
                         std::to_string(t.answer_end) + ") for passage of " + std::to_string(n) +
                         " tokens");
    }
    MaskedTriplet out;
    out.masked_passage.reserve(static_cast<size_t>(n - (t.answer_end - t.answer_start) + 1));
    out.masked_passage.insert(out.masked_passage.end(), t.passage_tokens.begin(),
                              t.passage_tokens.begin() + t.answer_start);
    out.masked_passage.push_back(kMaskToken);
    out.masked_passage.insert(out.masked_passage.end(), t.passage_tokens.begin() + t.answer_end,
                              t.passage_tokens.end());
    out.answer_tokens.assign(t.passage_tokens.begin() + t.answer_start,
                             t.passage_tokens.begin() + t.answer_end);
    out.question_tokens = t.question_tokens;
    return out;
}

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

bool token_looks_like_tag(const std::string& tok) {
    size_t us = tok.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 >= tok.size()) return false;
    for (size_t i = us + 1; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    for (size_t i = 0; i < us; ++i) {
        unsigned char c = static_cast<unsigned char>(tok[i]);
        if (!(std::islower(c) || c == '_')) return false;
    }
    return true;
}

std::pair<std::vector<std::string>, MatchingTable> ner_replace(
    const std::vector<std::string>& tokens, const std::vector<std::string>& ner_tags) {
    if (tokens.size() != ner_tags.size())
        throw UsageError("ner_tags length " + std::to_string(ner_tags.size()) +
                         " does not match " + std::to_string(tokens.size()) + " tokens");
    std::vector<std::string> out;
    MatchingTable table;
    std::map<std::string, int> next_subscript;
    size_t i = 0;
    while (i < tokens.size()) {
        const std::string& tag = ner_tags[i];
        if (tag == "O" || tokens[i] == kMaskToken) {
            out.push_back(tokens[i]);
            ++i;
            continue;
        }
        size_t j = i;
        while (j < tokens.size() && ner_tags[j] == tag && tokens[j] != kMaskToken) ++j;
        std::string type = lower(tag);
        std::string surface = join_tokens({tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(j)});
        std::string key;
        if (auto existing = table.tag_of(type, surface)) {
            key = *existing;
        } else {
            int k = ++next_subscript[type];
            key = type + "_" + std::to_string(k);
            table.insert(key, surface);
        }
        out.push_back(key);
        i = j;
    }
    return {std::move(out), std::move(table)};
}

std::vector<std::string> replace_known_entities(const std::vector<std::string>& tokens,
                                                const MatchingTable& table) {
    if (table.empty()) return tokens;
    // Longest surface first so multi-token entities win over their prefixes.
    std::vector<std::pair<std::vector<std::string>, std::string>> spans;
    for (const auto& [tag, surface] : table.entries())
        spans.emplace_back(split_tokens(surface), tag);
    std::stable_sort(spans.begin(), spans.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    std::vector<std::string> out;
    size_t i = 0;
    while (i < tokens.size()) {
        bool matched = false;
        for (const auto& [span, tag] : spans) {
            if (span.empty() || i + span.size() > tokens.size()) continue;
            if (std::equal(span.begin(), span.end(), tokens.begin() + static_cast<long>(i))) {
                out.push_back(tag);
                i += span.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.push_back(tokens[i]);
            ++i;
        }
    }
    return out;
}

std::vector<std::string> restore_entities(const std::vector<std::string>& tokens,
                                          const MatchingTable& table) {
    std::vector<std::string> out;
    for (const std::string& tok : tokens) {
        if (auto surface = table.surface_of(tok)) {
            for (std::string& part : split_tokens(*surface)) out.push_back(std::move(part));
        } else {
            out.push_back(tok);
        }
    }
    return out;
}

MaskedTriplet preprocess_triplet(const Triplet& t, bool mask) {
    MaskedTriplet mt;
    if (mask) {
        mt = mask_answer(t);
    } else {
        // Ablation path: answer left in place, answer side still extracted.
        int n = static_cast<int>(t.passage_tokens.size());
        if (t.answer_start < 0 || t.answer_end > n || t.answer_start >= t.answer_end)
            throw UsageError("invalid answer span [" + std::to_string(t.answer_start) + "," +
                             std::to_string(t.answer_end) + ")");
        mt.masked_passage = t.passage_tokens;
        mt.answer_tokens.assign(t.passage_tokens.begin() + t.answer_start,
                                t.passage_tokens.begin() + t.answer_end);
        mt.question_tokens = t.question_tokens;
    }
    if (t.ner_tags) {
        std::vector<std::string> tags;
        if (mask) {
            // Splice the tag sequence the same way the passage was spliced;
            // the mask token itself carries no tag.
            tags.assign(t.ner_tags->begin(), t.ner_tags->begin() + t.answer_start);
            tags.push_back("O");
            tags.insert(tags.end(), t.ner_tags->begin() + t.answer_end, t.ner_tags->end());
        } else {
            tags = *t.ner_tags;
        }
        auto [replaced, table] = ner_replace(mt.masked_passage, tags);
        mt.masked_passage = std::move(replaced);
        mt.table = std::move(table);
        mt.question_tokens = replace_known_entities(mt.question_tokens, mt.table);
    }
    return mt;
}

}  // namespace asqg::text

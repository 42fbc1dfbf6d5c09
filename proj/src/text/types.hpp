#pragma once

#include <optional>
#include <string>
#include <vector>

namespace asqg::text {

// Reserved vocabulary entries, ids 0..4 in this order.
inline constexpr const char* kPadToken = "〈pad〉";
inline constexpr const char* kUnkToken = "〈unk〉";
inline constexpr const char* kSosToken = "〈sos〉";
inline constexpr const char* kEosToken = "〈eos〉";
inline constexpr const char* kMaskToken = "〈a〉";

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kSosId = 2;
inline constexpr int kEosId = 3;
inline constexpr int kMaskId = 4;
inline constexpr int kNumReserved = 5;

// One (passage, answer span, question) example. answer_start/answer_end are
// half-open 0-based token indices into passage_tokens.
struct Triplet {
    std::vector<std::string> passage_tokens;
    int answer_start = 0;
    int answer_end = 0;
    std::vector<std::string> question_tokens;
    std::optional<std::vector<std::string>> ner_tags;  // aligned 1:1, "O" = none
};

// Ordered subscripted-tag -> surface-span map, e.g. "person_1" -> "john francis o'hara".
class MatchingTable {
public:
    void insert(std::string tag, std::string surface);
    std::optional<std::string> surface_of(const std::string& tag) const;
    // Existing tag for a (tag-type, surface) pair, if any.
    std::optional<std::string> tag_of(const std::string& type, const std::string& surface) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct MaskedTriplet {
    std::vector<std::string> masked_passage;  // answer span replaced by one mask token
    std::vector<std::string> answer_tokens;
    std::vector<std::string> question_tokens;
    MatchingTable table;
};

}  // namespace asqg::text

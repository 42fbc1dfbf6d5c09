#pragma once

#include <string>
#include <utility>
#include <vector>

#include "text/types.hpp"

namespace asqg::text {

// Replaces the designated answer span with a single mask token and extracts
// the span. Only the span positions are replaced, even if the same surface
// string occurs elsewhere. Throws UsageError on an invalid or empty span.
MaskedTriplet mask_answer(const Triplet& t);

// Replaces each contiguous run of a non-"O" tag with one lowercase
// "{tag}_{k}" token. The same (tag, surface) pair within a passage reuses
// its key; distinct entities of a tag are numbered in first-occurrence
// order. Returns the rewritten tokens and the table.
std::pair<std::vector<std::string>, MatchingTable> ner_replace(
    const std::vector<std::string>& tokens, const std::vector<std::string>& ner_tags);

// Rewrites question tokens using an existing table: every occurrence of a
// table entry's surface span becomes its tag token (longest surface first).
std::vector<std::string> replace_known_entities(const std::vector<std::string>& tokens,
                                                const MatchingTable& table);

// Inverse of ner_replace given the table: tag tokens expand back to their
// surface spans. Tokens that look like tags but are not in the table pass
// through unchanged.
std::vector<std::string> restore_entities(const std::vector<std::string>& tokens,
                                          const MatchingTable& table);

// Full preprocessing of one triplet: answer masking (optional), then NER
// replacement on the remaining passage, then question rewriting through the
// table. Answer tokens stay raw.
MaskedTriplet preprocess_triplet(const Triplet& t, bool mask = true);

std::vector<std::string> split_tokens(const std::string& joined);
std::string join_tokens(const std::vector<std::string>& tokens);

// True for tokens of the subscripted-tag form, e.g. "person_1".
bool token_looks_like_tag(const std::string& tok);

}  // namespace asqg::text

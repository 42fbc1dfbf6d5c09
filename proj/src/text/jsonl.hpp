#pragma once

#include <optional>
#include <string>
#include <vector>

#include "text/types.hpp"

namespace asqg::text {

// One generated question as written by the generate command.
struct GeneratedLine {
    std::vector<std::string> question_tokens;
    double score = 0.0;
    std::optional<std::vector<double>> attention;  // row-major
    int attention_rows = 0;
    int attention_cols = 0;
};

// Raw dataset lines: {"passage_tokens": [...], "answer_start": int,
// "answer_end": int, "question_tokens": [...], "ner_tags": [...]?}.
// Errors carry 1-based line numbers.
std::vector<Triplet> read_triplets(const std::string& path);

// Preprocessed lines: {"masked_passage": [...], "answer_tokens": [...],
// "question_tokens": [...], "matching_table": {...}}.
std::vector<MaskedTriplet> read_masked(const std::string& path);
void write_masked(const std::string& path, const std::vector<MaskedTriplet>& triplets);

std::vector<GeneratedLine> read_generated(const std::string& path);
void write_generated(const std::string& path, const std::vector<GeneratedLine>& lines);

}  // namespace asqg::text

#include "text/jsonl.hpp"

#include <fstream>

#include <json.hpp>

#include "util/errors.hpp"

namespace asqg::text {

using json = nlohmann::ordered_json;

namespace {

json parse_line(const std::string& line, const std::string& path, int64_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
        throw UsageError(path + ":" + std::to_string(line_no) + ": invalid JSON");
    if (!j.is_object())
        throw UsageError(path + ":" + std::to_string(line_no) + ": expected a JSON object");
    return j;
}

std::vector<std::string> string_array(const json& j, const char* key, const std::string& path,
                                      int64_t line_no) {
    if (!j.contains(key) || !j[key].is_array())
        throw UsageError(path + ":" + std::to_string(line_no) + ": missing array field '" + key + "'");
    std::vector<std::string> out;
    for (const auto& e : j[key]) {
        if (!e.is_string())
            throw UsageError(path + ":" + std::to_string(line_no) + ": non-string token in '" + key + "'");
        out.push_back(e.get<std::string>());
    }
    return out;
}

int int_field(const json& j, const char* key, const std::string& path, int64_t line_no) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw UsageError(path + ":" + std::to_string(line_no) + ": missing integer field '" + key + "'");
    return j[key].get<int>();
}

template <class Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(line, line_no);
    }
}

}  // namespace

std::vector<Triplet> read_triplets(const std::string& path) {
    std::vector<Triplet> out;
    for_each_line(path, [&](const std::string& line, int64_t line_no) {
        json j = parse_line(line, path, line_no);
        Triplet t;
        t.passage_tokens = string_array(j, "passage_tokens", path, line_no);
        t.answer_start = int_field(j, "answer_start", path, line_no);
        t.answer_end = int_field(j, "answer_end", path, line_no);
        t.question_tokens = string_array(j, "question_tokens", path, line_no);
        if (j.contains("ner_tags")) {
            t.ner_tags = string_array(j, "ner_tags", path, line_no);
            if (t.ner_tags->size() != t.passage_tokens.size())
                throw UsageError(path + ":" + std::to_string(line_no) +
                                 ": ner_tags length does not match passage_tokens");
        }
        int n = static_cast<int>(t.passage_tokens.size());
        if (t.answer_start < 0 || t.answer_end > n || t.answer_start >= t.answer_end)
            throw UsageError(path + ":" + std::to_string(line_no) + ": invalid answer span [" +
                             std::to_string(t.answer_start) + "," + std::to_string(t.answer_end) +
                             ") for " + std::to_string(n) + " tokens");
        out.push_back(std::move(t));
    });
    return out;
}

std::vector<MaskedTriplet> read_masked(const std::string& path) {
    std::vector<MaskedTriplet> out;
    for_each_line(path, [&](const std::string& line, int64_t line_no) {
        json j = parse_line(line, path, line_no);
        MaskedTriplet mt;
        mt.masked_passage = string_array(j, "masked_passage", path, line_no);
        mt.answer_tokens = string_array(j, "answer_tokens", path, line_no);
        mt.question_tokens = string_array(j, "question_tokens", path, line_no);
        if (j.contains("matching_table")) {
            if (!j["matching_table"].is_object())
                throw UsageError(path + ":" + std::to_string(line_no) + ": matching_table must be an object");
            for (const auto& [k, v] : j["matching_table"].items()) {
                if (!v.is_string())
                    throw UsageError(path + ":" + std::to_string(line_no) + ": matching_table values must be strings");
                mt.table.insert(k, v.get<std::string>());
            }
        }
        out.push_back(std::move(mt));
    });
    return out;
}

void write_masked(const std::string& path, const std::vector<MaskedTriplet>& triplets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    for (const auto& mt : triplets) {
        json j;
        j["masked_passage"] = mt.masked_passage;
        j["answer_tokens"] = mt.answer_tokens;
        j["question_tokens"] = mt.question_tokens;
        json table = json::object();
        for (const auto& [tag, surface] : mt.table.entries()) table[tag] = surface;
        j["matching_table"] = table;
        out << j.dump() << '\n';
    }
}

std::vector<GeneratedLine> read_generated(const std::string& path) {
    std::vector<GeneratedLine> out;
    for_each_line(path, [&](const std::string& line, int64_t line_no) {
        json j = parse_line(line, path, line_no);
        GeneratedLine g;
        g.question_tokens = string_array(j, "question_tokens", path, line_no);
        if (j.contains("score")) g.score = j["score"].get<double>();
        if (j.contains("attention")) {
            const auto& att = j["attention"];
            g.attention_rows = att.value("rows", 0);
            g.attention_cols = att.value("cols", 0);
            g.attention = att["data"].get<std::vector<double>>();
        }
        out.push_back(std::move(g));
    });
    return out;
}

void write_generated(const std::string& path, const std::vector<GeneratedLine>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    for (const auto& g : lines) {
        json j;
        j["question_tokens"] = g.question_tokens;
        j["score"] = g.score;
        if (g.attention) {
            json att;
            att["rows"] = g.attention_rows;
            att["cols"] = g.attention_cols;
            att["data"] = *g.attention;
            j["attention"] = att;
        }
        out << j.dump() << '\n';
    }
}

}  // namespace asqg::text

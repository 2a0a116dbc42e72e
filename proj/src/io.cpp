#include "spvote/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace spvote {

namespace {

constexpr std::string_view kResponsesHeader = "question_id,voter_id,format,vote,prediction";

struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

// Non-blank lines with their line numbers; strips a trailing '\r'.
std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& in) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        lines.emplace_back(number, line);
    }
    return lines;
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find('>', start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

AltId parse_label(std::string_view label, const Question& q) {
    const auto id = q.find_label(label);
    if (!id) {
        throw InputError("unknown alternative '" + std::string(label) + "' for question " +
                         q.question_id);
    }
    return *id;
}

AltId parse_single(std::string_view text, const Question& q) {
    if (text.find('>') != std::string_view::npos) {
        throw InputError("expected a single alternative, got ranking '" + std::string(text) + "'");
    }
    return parse_label(text, q);
}

VoteReport parse_vote(std::string_view text, VoteKind kind, const Question& q) {
    if (text.empty()) throw InputError("vote is empty");
    if (kind == VoteKind::Top) return TopChoice{parse_single(text, q)};
    return parse_ranking(text, q);
}

PredictionReport parse_prediction(std::string_view text, PredictionKind kind, const Question& q) {
    switch (kind) {
        case PredictionKind::None:
            if (!text.empty()) throw InputError("prediction present under a *-none format");
            return NoPrediction{};
        case PredictionKind::Top:
            if (text.empty()) throw InputError("prediction missing");
            return TopChoice{parse_single(text, q)};
        case PredictionKind::Rank:
            if (text.empty()) throw InputError("prediction missing");
            return parse_ranking(text, q);
    }
    return NoPrediction{};
}

std::string format_vote(const VoteReport& v, const Question& q) {
    if (const auto* t = std::get_if<TopChoice>(&v)) return q.alternatives.at(t->alt).label;
    return format_ranking(std::get<Ranking>(v), q);
}

std::string format_prediction(const PredictionReport& p, const Question& q) {
    if (const auto* t = std::get_if<TopChoice>(&p)) return q.alternatives.at(t->alt).label;
    if (const auto* r = std::get_if<Ranking>(&p)) return format_ranking(*r, q);
    return {};
}

}  // namespace

ValidationError::ValidationError(std::size_t line, const std::string& message)
    : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw InputError("unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_ranking(const Ranking& r, const Question& q) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) out.push_back('>');
        out += q.alternatives.at(r.at(i)).label;
    }
    return out;
}

Ranking parse_ranking(std::string_view text, const Question& q) {
    const auto tokens = split_tokens(text);
    if (tokens.size() != q.m()) {
        throw InputError("ranking '" + std::string(text) + "' lists " + std::to_string(tokens.size()) +
                         " alternatives, question " + q.question_id + " has " + std::to_string(q.m()));
    }
    std::vector<AltId> order;
    for (const auto& t : tokens) order.push_back(parse_label(t, q));
    try {
        return Ranking(std::move(order));
    } catch (const InputError&) {
        throw InputError("ranking '" + std::string(text) + "' is not a permutation");
    }
}

std::vector<Question> parse_questions(std::istream& in) {
    const auto lines = read_lines(in);
    if (lines.empty()) throw ValidationError(1, "questions file is empty");
    const auto header = split_csv_line(lines.front().second);
    if (header.size() < 4 || header[0] != "question_id" || header[1] != "domain" ||
        header.back() != "ground_truth") {
        throw ValidationError(lines.front().first,
                              "questions header must be question_id,domain,alt0,...,ground_truth");
    }
    const std::size_t alt_columns = header.size() - 3;
    for (std::size_t i = 0; i < alt_columns; ++i) {
        if (header[2 + i] != "alt" + std::to_string(i)) {
            throw ValidationError(lines.front().first, "expected column alt" + std::to_string(i));
        }
    }

    std::vector<Question> out;
    std::set<std::string> seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& [number, text] = lines[li];
        try {
            const auto fields = split_csv_line(text);
            if (fields.size() != header.size()) {
                throw InputError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            }
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < alt_columns; ++i) {
                const auto& label = fields[2 + i];
                if (label.empty()) {
                    for (std::size_t j = i; j < alt_columns; ++j) {
                        if (!fields[2 + j].empty()) throw InputError("alternative columns have a gap");
                    }
                    break;
                }
                if (label.find('>') != std::string::npos) {
                    throw InputError("alternative label '" + label + "' contains '>'");
                }
                labels.push_back(label);
            }
            Question q = make_question(fields[0], fields[1], labels);
            if (q.question_id.empty()) throw InputError("question id is empty");
            if (!seen.insert(q.question_id).second) {
                throw InputError("duplicate question id " + q.question_id);
            }
            if (!fields.back().empty()) q.ground_truth = parse_ranking(fields.back(), q);
            out.push_back(std::move(q));
        } catch (const ValidationError&) {
            throw;
        } catch (const InputError& e) {
            throw ValidationError(number, e.what());
        }
    }
    return out;
}

std::vector<Question> read_questions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open questions file " + path.string());
    return parse_questions(in);
}

void write_questions(std::ostream& out, std::span<const Question> questions) {
    std::size_t width = 0;
    for (const auto& q : questions) width = std::max(width, q.m());
    out << "question_id,domain";
    for (std::size_t i = 0; i < width; ++i) out << ",alt" << i;
    out << ",ground_truth\n";
    for (const auto& q : questions) {
        out << csv_field(q.question_id) << ',' << csv_field(q.domain);
        for (std::size_t i = 0; i < width; ++i) {
            out << ',' << (i < q.m() ? csv_field(q.alternatives[i].label) : std::string());
        }
        out << ',' << (q.ground_truth ? csv_field(format_ranking(*q.ground_truth, q)) : std::string())
            << '\n';
    }
}

IngestResult parse_responses(std::istream& in, std::span<const Question> questions, bool strict) {
    const auto lines = read_lines(in);
    if (lines.empty() || lines.front().second != kResponsesHeader) {
        throw ValidationError(lines.empty() ? 1 : lines.front().first,
                              "responses header must be " + std::string(kResponsesHeader));
    }

    IngestResult result;
    auto fail = [&](std::size_t line, const std::string& message) {
        if (strict) throw ValidationError(line, message);
        result.issues.push_back({line, message});
        ++result.skipped;
    };

    std::vector<Row> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        ++result.rows;
        try {
            auto fields = split_csv_line(lines[li].second);
            if (fields.size() != 5) {
                throw InputError("expected 5 fields, got " + std::to_string(fields.size()));
            }
            rows.push_back({lines[li].first, std::move(fields)});
        } catch (const InputError& e) {
            fail(lines[li].first, e.what());
        }
    }

    std::map<std::string, Question> known;
    if (!questions.empty()) {
        for (const auto& q : questions) known.emplace(q.question_id, q);
    } else {
        std::map<std::string, std::set<std::string>> labels;
        for (const auto& row : rows) {
            auto& set = labels[row.fields[0]];
            for (const std::size_t col : {3U, 4U}) {
                if (row.fields[col].empty()) continue;
                for (auto& t : split_tokens(row.fields[col])) set.insert(std::move(t));
            }
        }
        for (const auto& [id, set] : labels) {
            if (set.size() < 2) continue;  // rows of this question fail below
            try {
                known.emplace(id, make_question(id, "", {set.begin(), set.end()}));
            } catch (const InputError&) {
                // Rows referencing it are reported as unknown questions.
            }
        }
    }

    std::map<std::pair<std::string, ElicitationFormat>, std::size_t> slot;
    std::set<std::tuple<std::string, std::string, ElicitationFormat>> voters;
    for (const auto& row : rows) {
        try {
            const auto& f = row.fields;
            const auto q = known.find(f[0]);
            if (q == known.end()) throw InputError("unknown question '" + f[0] + "'");
            if (f[1].empty()) throw InputError("voter id is empty");
            ResponseRecord rec;
            rec.question_id = f[0];
            rec.voter_id = f[1];
            rec.format = parse_format(f[2]);
            rec.vote = parse_vote(f[3], rec.format.vote, q->second);
            rec.prediction = parse_prediction(f[4], rec.format.prediction, q->second);
            rec.validate(q->second.m());
            if (!voters.emplace(rec.question_id, rec.voter_id, rec.format).second) {
                throw InputError("duplicate response for question " + rec.question_id + ", voter " +
                                 rec.voter_id + ", format " + f[2]);
            }
            const auto key = std::make_pair(rec.question_id, rec.format);
            auto it = slot.find(key);
            if (it == slot.end()) {
                it = slot.emplace(key, result.elections.size()).first;
                result.elections.push_back(Election{q->second, {}});
            }
            result.elections[it->second].responses.push_back(std::move(rec));
        } catch (const InputError& e) {
            fail(row.line, e.what());
        }
    }
    return result;
}

IngestResult ingest_responses(const std::filesystem::path& path, std::span<const Question> questions,
                              bool strict) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open responses file " + path.string());
    return parse_responses(in, questions, strict);
}

void write_responses(std::ostream& out, std::span<const Election> elections) {
    out << kResponsesHeader << '\n';
    for (const auto& e : elections) {
        for (const auto& r : e.responses) {
            out << csv_field(r.question_id) << ',' << csv_field(r.voter_id) << ',' << to_token(r.format)
                << ',' << csv_field(format_vote(r.vote, e.question)) << ','
                << csv_field(format_prediction(r.prediction, e.question)) << '\n';
        }
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace spvote

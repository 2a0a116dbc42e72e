#pragma once

// Delimited-text formats.
//
// Responses:  question_id,voter_id,format,vote,prediction
// Questions:  question_id,domain,alt0,...,alt{k-1},ground_truth
//
// Votes, predictions and ground truths are alternative labels; rankings join
// labels with '>' (best first). Predictions are empty under *-none formats.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spvote/core.hpp"

namespace spvote {

/// A malformed input row, with its 1-based line number.
class ValidationError : public InputError {
public:
    ValidationError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct IngestIssue {
    std::size_t line = 0;
    std::string message;
};

struct IngestResult {
    /// One election per (question, format), in order of first appearance.
    std::vector<Election> elections;
    std::vector<IngestIssue> issues;
    std::size_t rows = 0;
    std::size_t skipped = 0;
};

std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

std::string format_ranking(const Ranking& r, const Question& q);
Ranking parse_ranking(std::string_view text, const Question& q);

std::vector<Question> parse_questions(std::istream& in);
std::vector<Question> read_questions(const std::filesystem::path& path);
void write_questions(std::ostream& out, std::span<const Question> questions);

/// Parses a responses table. With `questions` empty, each question's labels are
/// inferred from the tokens in its rows (sorted). Strict mode throws
/// ValidationError on the first bad row; lenient mode skips and records it.
IngestResult parse_responses(std::istream& in, std::span<const Question> questions, bool strict);
IngestResult ingest_responses(const std::filesystem::path& path, std::span<const Question> questions,
                              bool strict);
void write_responses(std::ostream& out, std::span<const Election> elections);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace spvote

#pragma once

// Question construction from a globally ranked list: each question compares
// alternatives a fixed number of ranks apart.

#include <cstddef>
#include <string>
#include <vector>

#include "spvote/core.hpp"

namespace spvote {

/// 1-based list positions of each question's alternatives.
///
/// Windows start at odd positions 1, 3, 5, ... while they fit in the list;
/// any further windows come from even starting positions spread evenly over
/// the even starts that fit. Throws InputError when fewer than `count`
/// windows exist.
std::vector<std::vector<std::size_t>> fixture_windows(std::size_t list_size, std::size_t gap,
                                                      std::size_t count, std::size_t per_question = 4);

/// Questions over `ranked_labels` (best first); the ground truth is list order.
std::vector<Question> generate_fixture_questions(const std::vector<std::string>& ranked_labels,
                                                 std::size_t gap = 6, std::size_t count = 20,
                                                 const std::string& domain = "fixture",
                                                 std::size_t per_question = 4);

}  // namespace spvote

#include "spvote/fixtures.hpp"

#include <algorithm>

namespace spvote {

std::vector<std::vector<std::size_t>> fixture_windows(std::size_t list_size, std::size_t gap,
                                                      std::size_t count, std::size_t per_question) {
    if (gap == 0) throw InputError("gap must be positive");
    if (per_question < 2) throw InputError("a question needs at least two alternatives");
    const std::size_t span = gap * (per_question - 1);
    auto fits = [&](std::size_t start) { return start + span <= list_size; };

    std::vector<std::size_t> starts;
    for (std::size_t s = 1; fits(s) && starts.size() < count; s += 2) starts.push_back(s);

    if (starts.size() < count) {
        std::vector<std::size_t> even;
        for (std::size_t s = 2; fits(s); s += 2) even.push_back(s);
        const std::size_t need = count - starts.size();
        if (even.size() < need) {
            throw InputError("a list of " + std::to_string(list_size) + " supports fewer than " +
                             std::to_string(count) + " questions with gap " + std::to_string(gap));
        }
        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t k = need == 1 ? 0 : i * (even.size() - 1) / (need - 1);
            starts.push_back(even[k]);
        }
    }

    std::vector<std::vector<std::size_t>> windows;
    for (const std::size_t s : starts) {
        std::vector<std::size_t> w;
        for (std::size_t j = 0; j < per_question; ++j) w.push_back(s + j * gap);
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<Question> generate_fixture_questions(const std::vector<std::string>& ranked_labels,
                                                 std::size_t gap, std::size_t count,
                                                 const std::string& domain,
                                                 std::size_t per_question) {
    std::vector<Question> out;
    const auto windows = fixture_windows(ranked_labels.size(), gap, count, per_question);
    const std::size_t digits = std::to_string(windows.size()).size();
    for (std::size_t i = 0; i < windows.size(); ++i) {
        std::vector<std::string> labels;
        for (const std::size_t pos : windows[i]) labels.push_back(ranked_labels[pos - 1]);
        std::string n = std::to_string(i + 1);
        n.insert(0, std::max<std::size_t>(digits, 2) - n.size(), '0');
        out.push_back(make_question(domain + "-" + n, domain, labels, Ranking::identity(labels.size())));
    }
    return out;
}

}  // namespace spvote

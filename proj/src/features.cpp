#include "emgalign/features.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "emgalign/errors.hpp"

namespace emgalign {

LabeledWindows make_labeled_windows(Matrix features, std::vector<int> labels,
                                    std::vector<int> repetition, std::string day_id) {
  if (features.empty()) throw ParameterError("labeled windows need at least one window");
  if (labels.size() != features.cols() || repetition.size() != features.cols())
    throw DimensionError("labels/repetition length " + std::to_string(labels.size()) + "/" +
                         std::to_string(repetition.size()) + " != window count " +
                         std::to_string(features.cols()));
  return LabeledWindows{std::move(features), std::move(labels), std::move(repetition),
                        std::move(day_id)};
}

std::size_t gesture_count(const LabeledWindows& day) {
  std::set<int> seen(day.labels.begin(), day.labels.end());
  if (seen.empty()) throw DataError("no labels");
  int expected = 0;
  for (int g : seen) {
    if (g != expected)
      throw IngestError("labels are not a contiguous 0..G-1 set: missing gesture " +
                        std::to_string(expected) + " in " + day.day_id);
    ++expected;
  }
  return seen.size();
}

std::vector<int> repetitions_of(const LabeledWindows& day, int gesture) {
  std::set<int> reps;
  for (std::size_t w = 0; w < day.windows(); ++w)
    if (day.labels[w] == gesture) reps.insert(day.repetition[w]);
  return {reps.begin(), reps.end()};
}

LabeledWindows select_windows(const LabeledWindows& day, const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw ParameterError("select_windows: empty selection");
  Matrix out(day.channels(), idx.size());
  std::vector<int> labels(idx.size()), reps(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= day.windows())
      throw DimensionError("select_windows: index " + std::to_string(idx[k]) +
                           " out of range");
    for (std::size_t c = 0; c < day.channels(); ++c) out(c, k) = day.features(c, idx[k]);
    labels[k] = day.labels[idx[k]];
    reps[k] = day.repetition[idx[k]];
  }
  return LabeledWindows{std::move(out), std::move(labels), std::move(reps), day.day_id};
}

LabeledWindows merge_sessions(const std::vector<LabeledWindows>& sessions,
                              std::string day_id) {
  if (sessions.empty()) throw ParameterError("merge_sessions: no sessions");
  if (sessions.size() == 1) {
    LabeledWindows out = sessions.front();
    out.day_id = std::move(day_id);
    return out;
  }
  const std::size_t channels = sessions.front().channels();
  std::size_t total = 0;
  for (const auto& s : sessions) {
    if (s.channels() != channels)
      throw DimensionError("merge_sessions: channel counts differ across sessions");
    total += s.windows();
  }

  Matrix feats(channels, total);
  std::vector<int> labels, reps;
  labels.reserve(total);
  reps.reserve(total);
  std::size_t col = 0;
  int rep_offset = 0;
  for (const auto& s : sessions) {
    int max_rep = 0;
    for (std::size_t w = 0; w < s.windows(); ++w) {
      for (std::size_t c = 0; c < channels; ++c) feats(c, col) = s.features(c, w);
      labels.push_back(s.labels[w]);
      reps.push_back(s.repetition[w] + rep_offset);
      max_rep = std::max(max_rep, s.repetition[w]);
      ++col;
    }
    rep_offset += max_rep + 1;  // later sessions keep distinct repetition ids
  }
  return LabeledWindows{std::move(feats), std::move(labels), std::move(reps),
                        std::move(day_id)};
}

}  // namespace emgalign

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emgalign/matrix.hpp"

namespace emgalign {

/// RMS feature stream: one column per analysis window, one row per channel,
/// with per-window gesture label and repetition index.
struct LabeledWindows {
  Matrix features;              // channels × windows
  std::vector<int> labels;      // gesture id per window
  std::vector<int> repetition;  // repetition index per window
  std::string day_id;

  std::size_t channels() const { return features.rows(); }
  std::size_t windows() const { return features.cols(); }
};

/// Validates the size invariants (throws DimensionError / DataError).
LabeledWindows make_labeled_windows(Matrix features, std::vector<int> labels,
                                    std::vector<int> repetition, std::string day_id);

/// Number of distinct gestures; throws IngestError unless labels form a
/// contiguous 0..G-1 set.
std::size_t gesture_count(const LabeledWindows& day);

/// Sorted distinct repetition indices present for a gesture.
std::vector<int> repetitions_of(const LabeledWindows& day, int gesture);

/// Window indices whose repetition index satisfies keep(rep).
template <typename Pred>
std::vector<std::size_t> windows_where(const LabeledWindows& day, Pred keep) {
  std::vector<std::size_t> idx;
  for (std::size_t w = 0; w < day.windows(); ++w) {
    if (keep(day.labels[w], day.repetition[w])) idx.push_back(w);
  }
  return idx;
}

/// Column subset (keeps labels/repetition aligned).
LabeledWindows select_windows(const LabeledWindows& day, const std::vector<std::size_t>& idx);

/// Merge consecutive recording sessions into one logical day; repetition
/// indices of later sessions are offset so they stay unique per gesture.
LabeledWindows merge_sessions(const std::vector<LabeledWindows>& sessions, std::string day_id);

}  // namespace emgalign

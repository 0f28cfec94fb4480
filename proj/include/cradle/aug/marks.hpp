#pragma once

#include <map>
#include <string>
#include <vector>

#include "cradle/core/image.hpp"

namespace cradle::aug {

struct Mark {
  int id = 0;        // dense, 1-based
  Rect rect;         // within frame bounds
  double score = 1.0;

  bool operator==(const Mark&) const = default;
};

struct MarkSet {
  std::vector<Mark> marks;

  bool empty() const { return marks.empty(); }
  std::size_t size() const { return marks.size(); }
  const Mark* find(int id) const;
};

/// One line per mark: `id x0 y0 x1 y1 score`.
std::string serialize_marks(const MarkSet& set);
MarkSet parse_marks(const std::string& text);

struct Template {
  std::string name;
  Image pixels;
  double match_threshold = 0.9;
};

struct GridSpec {
  int rows = 3;
  int cols = 5;
};

struct Detection {
  std::string name;
  Rect rect;
  double score = 0.0;
};

}  // namespace cradle::aug

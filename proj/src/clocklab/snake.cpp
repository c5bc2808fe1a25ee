#include "hamsim/clocklab.hpp"

namespace hamsim {

std::string to_string(SnakeStepKind k) {
  switch (k) {
    case SnakeStepKind::move: return "move";
    case SnakeStepKind::turn_out: return "turn_out";
    case SnakeStepKind::turn_along: return "turn_along";
    case SnakeStepKind::turn_flip: return "turn_flip";
    case SnakeStepKind::turn_in: return "turn_in";
  }
  return "?";
}

std::vector<std::pair<int, int>> SnakePath::track() const {
  std::vector<std::pair<int, int>> t;
  if (!cells.empty()) t.push_back(cells.front());
  for (const auto& s : steps) t.push_back(s.to);
  return t;
}

// Rows y = 0..b-1 of {x + y < b}; even rows sweep right, odd rows left.
// Right end: out to the diagonal cell above the row end, flip there, in to the next row.
// Left end: out to the boundary column x = -1, along it one row up, in.
SnakePath snake_path(int b) {
  if (b < 1) throw Error(Error::Kind::structural, "snake needs b >= 1");
  SnakePath p;
  p.b = b;
  std::pair<int, int> cur{0, 0};
  p.cells.push_back(cur);
  for (int y = 0; y < b; ++y) {
    const int dx = y % 2 == 0 ? 1 : -1;
    for (int i = 1; i < b - y; ++i) {
      std::pair<int, int> c{cur.first + dx, y};
      p.steps.push_back({cur, c, SnakeStepKind::move, y, dx});
      p.cells.push_back(c);
      cur = c;
    }
    if (y + 1 == b) break;
    p.turns.push_back({y, dx > 0, static_cast<int>(p.steps.size())});
    std::pair<int, int> entry;
    if (dx > 0) {
      std::pair<int, int> edge{cur.first, y + 1};  // on the diagonal x + y = b
      entry = {cur.first - 1, y + 1};
      p.steps.push_back({cur, edge, SnakeStepKind::turn_out, y, dx});
      p.steps.push_back({edge, edge, SnakeStepKind::turn_flip, y + 1, -dx});
      p.steps.push_back({edge, entry, SnakeStepKind::turn_in, y + 1, -dx});
    } else {
      std::pair<int, int> out{-1, y}, up{-1, y + 1};
      entry = {0, y + 1};
      p.steps.push_back({cur, out, SnakeStepKind::turn_out, y, dx});
      p.steps.push_back({out, up, SnakeStepKind::turn_along, y + 1, -dx});
      p.steps.push_back({up, entry, SnakeStepKind::turn_in, y + 1, -dx});
    }
    p.cells.push_back(entry);
    cur = entry;
  }
  return p;
}

}  // namespace hamsim

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xcsmd/error.hpp"
#include "xcsmd/random.hpp"
#include "xcsmd/ternary.hpp"

namespace xcsmd {

enum class CellKind : std::uint8_t { Empty, Obstacle, Food };

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Sensations are 16-bit strings: two bits per neighbour, neighbours in the
// order of Direction.
using Sensation = BitString;

inline constexpr int kSensationLength = 16;
inline constexpr int kActionCount = 8;
inline constexpr int kActionBits = 3;

// Agent actions and sensor order share one numbering: north first, then
// clockwise.
enum class Direction : int { N = 0, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<int, 8> kRowDelta = {-1, -1, 0, 1, 1, 1, 0, -1};
inline constexpr std::array<int, 8> kColDelta = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<const char*, 8> kDirectionNames = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

struct StepResult {
  Cell pos;
  double reward = 0.0;
  bool at_food = false;
};

class Maze {
 public:
  Maze(int width, int height, std::vector<CellKind> cells, std::string name = {})
      : width_(width), height_(height), cells_(std::move(cells)), name_(std::move(name)) {
    if (width_ < 1 || height_ < 1 || cells_.size() != static_cast<std::size_t>(width_) * height_)
      throw Error(Errc::RaggedGrid, "cell count does not match dimensions");
    for (int r = 0; r < height_; ++r)
      for (int c = 0; c < width_; ++c) {
        if (at({r, c}) == CellKind::Empty) empty_.push_back({r, c});
        if (at({r, c}) == CellKind::Food) ++food_count_;
      }
    if (food_count_ == 0) throw Error(Errc::NoFood, "maze '" + name_ + "' has no food cell");
    if (empty_.empty()) throw Error(Errc::NoEmpty, "maze '" + name_ + "' has no empty cell");
  }

  // Rows separated by newlines; 'T' obstacle, 'F' food, '.' or ' ' empty.
  static Maze parse(std::string_view text, std::string name = {}) {
    std::vector<std::string> rows;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      rows.push_back(line);
    }
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    if (rows.empty()) throw Error(Errc::NoEmpty, "empty maze text");
    const std::size_t width = rows.front().size();
    std::vector<CellKind> cells;
    cells.reserve(width * rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != width)
        throw Error(Errc::RaggedGrid, "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                          " cells, expected " + std::to_string(width));
      for (char ch : rows[r]) {
        switch (ch) {
          case 'T': cells.push_back(CellKind::Obstacle); break;
          case 'F': cells.push_back(CellKind::Food); break;
          case '.':
          case ' ': cells.push_back(CellKind::Empty); break;
          default:
            throw Error(Errc::UnknownCell, std::string("character '") + ch + "' in row " + std::to_string(r));
        }
      }
    }
    return Maze(static_cast<int>(width), static_cast<int>(rows.size()), std::move(cells), std::move(name));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  const std::string& name() const { return name_; }
  const std::vector<Cell>& empty_cells() const { return empty_; }
  int food_count() const { return food_count_; }

  Cell wrap(Cell p) const {
    return {((p.row % height_) + height_) % height_, ((p.col % width_) + width_) % width_};
  }

  Cell neighbor(Cell p, int dir) const {
    return wrap({p.row + kRowDelta[static_cast<std::size_t>(dir)], p.col + kColDelta[static_cast<std::size_t>(dir)]});
  }

  CellKind at(Cell p) const {
    const Cell w = wrap(p);
    return cells_[static_cast<std::size_t>(w.row) * width_ + w.col];
  }

  Maze with_cell(Cell p, CellKind kind) const {
    auto cells = cells_;
    const Cell w = wrap(p);
    cells[static_cast<std::size_t>(w.row) * width_ + w.col] = kind;
    return Maze(width_, height_, std::move(cells), name_);
  }

  std::string to_text() const {
    std::string out;
    for (int r = 0; r < height_; ++r) {
      for (int c = 0; c < width_; ++c) {
        switch (at({r, c})) {
          case CellKind::Empty: out += '.'; break;
          case CellKind::Obstacle: out += 'T'; break;
          case CellKind::Food: out += 'F'; break;
        }
      }
      out += '\n';
    }
    return out;
  }

 private:
  int width_;
  int height_;
  std::vector<CellKind> cells_;
  std::string name_;
  std::vector<Cell> empty_;
  int food_count_ = 0;
};

inline Sensation sense(const Maze& maze, Cell pos) {
  if (maze.at(pos) != CellKind::Empty) throw Error(Errc::PosNotEmpty, "sense from a non-empty cell");
  std::uint32_t bits = 0;
  for (int d = 0; d < 8; ++d) {
    switch (maze.at(maze.neighbor(pos, d))) {
      case CellKind::Empty: break;
      case CellKind::Obstacle: bits |= 1u << (2 * d + 1); break;
      case CellKind::Food: bits |= 3u << (2 * d); break;
    }
  }
  return Sensation(kSensationLength, bits);
}

inline StepResult step(const Maze& maze, Cell pos, int action, double food_reward = 1000.0) {
  const Cell target = maze.neighbor(pos, action);
  switch (maze.at(target)) {
    case CellKind::Obstacle: return {pos, 0.0, false};
    case CellKind::Food: return {target, food_reward, true};
    case CellKind::Empty: break;
  }
  return {target, 0.0, false};
}

inline Cell random_empty_cell(const Maze& maze, Rng& rng) {
  const auto& cells = maze.empty_cells();
  return cells[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cells.size())))];
}

// ---------------------------------------------------------------------------
// Ground-truth oracles

// Minimal number of steps from every cell to the nearest food (-1 for
// obstacles and unreachable cells, 0 for food).
inline std::vector<int> food_distances(const Maze& maze) {
  const int w = maze.width(), h = maze.height();
  std::vector<int> dist(static_cast<std::size_t>(w) * h, -1);
  std::deque<Cell> queue;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (maze.at({r, c}) == CellKind::Food) {
        dist[static_cast<std::size_t>(r) * w + c] = 0;
        queue.push_back({r, c});
      }
  // Moves are symmetric, so a backwards search from the food cells suffices.
  // Food is terminal: paths never continue through it.
  while (!queue.empty()) {
    const Cell p = queue.front();
    queue.pop_front();
    const int dp = dist[static_cast<std::size_t>(p.row) * w + p.col];
    for (int d = 0; d < 8; ++d) {
      const Cell q = maze.neighbor(p, d);
      auto& dq = dist[static_cast<std::size_t>(q.row) * w + q.col];
      if (maze.at(q) == CellKind::Empty && dq < 0) {
        dq = dp + 1;
        queue.push_back(q);
      }
    }
  }
  return dist;
}

inline int distance_at(const Maze& maze, const std::vector<int>& dist, Cell p) {
  const Cell w = maze.wrap(p);
  return dist[static_cast<std::size_t>(w.row) * maze.width() + w.col];
}

// Actions that start a shortest path to food, as a bitmask over Direction.
inline std::uint8_t optimal_actions(const Maze& maze, const std::vector<int>& dist, Cell p) {
  const int dp = distance_at(maze, dist, p);
  std::uint8_t mask = 0;
  for (int d = 0; d < 8; ++d) {
    const Cell q = maze.neighbor(p, d);
    if (maze.at(q) == CellKind::Obstacle) continue;
    if (distance_at(maze, dist, q) == dp - 1) mask |= static_cast<std::uint8_t>(1u << d);
  }
  return mask;
}

inline double optimal_average_steps(const Maze& maze) {
  const auto dist = food_distances(maze);
  double total = 0.0;
  for (const Cell& p : maze.empty_cells()) {
    const int d = distance_at(maze, dist, p);
    if (d < 0)
      throw Error(Errc::Unreachable,
                  "cell (" + std::to_string(p.row) + "," + std::to_string(p.col) + ") cannot reach food");
    total += d;
  }
  return total / static_cast<double>(maze.empty_cells().size());
}

// Ordered so that the label of a group is the maximum over its pairs.
enum class AliasingType : int { NonAliasing = 0, PseudoAliasing, TypeI, TypeII, TypeIII };

inline const char* to_string(AliasingType t) {
  switch (t) {
    case AliasingType::NonAliasing: return "non-aliasing";
    case AliasingType::PseudoAliasing: return "pseudo-aliasing";
    case AliasingType::TypeI: return "type I";
    case AliasingType::TypeII: return "type II";
    case AliasingType::TypeIII: return "type III";
  }
  return "?";
}

struct SquareInfo {
  Cell cell;
  int distance = 0;
  std::uint8_t actions = 0;  // bitmask of optimal first moves
  bool in_conglomerate = false;
};

struct AliasingGroup {
  Sensation sensation;
  std::vector<SquareInfo> squares;
  AliasingType type = AliasingType::NonAliasing;
  int component = -1;  // conglomerate id of the first member, -1 if isolated
};

struct AliasingReport {
  std::vector<AliasingGroup> groups;  // every empty square appears once
  AliasingType maze_type = AliasingType::NonAliasing;
  double optimum = 0.0;
  // Conglomerates: connected clusters of adjacent aliasing squares, listed as
  // group indices. Clones are pairs of conglomerates with the same make-up.
  std::vector<std::vector<int>> conglomerates;
  std::vector<std::pair<int, int>> clones;

  std::vector<const AliasingGroup*> aliased_groups() const {
    std::vector<const AliasingGroup*> out;
    for (const auto& g : groups)
      if (g.squares.size() > 1) out.push_back(&g);
    return out;
  }
};

inline AliasingType classify_pair(const SquareInfo& a, const SquareInfo& b) {
  const bool same_distance = a.distance == b.distance;
  const bool shared_action = (a.actions & b.actions) != 0;
  if (same_distance && shared_action) return AliasingType::PseudoAliasing;
  if (shared_action) return AliasingType::TypeI;
  if (!same_distance) return AliasingType::TypeII;
  return AliasingType::TypeIII;
}

inline AliasingReport classify_aliasing(const Maze& maze) {
  AliasingReport report;
  report.optimum = optimal_average_steps(maze);
  const auto dist = food_distances(maze);

  std::map<Sensation, std::size_t> index;
  for (const Cell& p : maze.empty_cells()) {
    const Sensation s = sense(maze, p);
    auto [it, inserted] = index.try_emplace(s, report.groups.size());
    if (inserted) report.groups.push_back(AliasingGroup{s, {}, AliasingType::NonAliasing, -1});
    report.groups[it->second].squares.push_back(
        SquareInfo{p, distance_at(maze, dist, p), optimal_actions(maze, dist, p), false});
  }

  for (auto& g : report.groups) {
    for (std::size_t i = 0; i < g.squares.size(); ++i)
      for (std::size_t j = i + 1; j < g.squares.size(); ++j)
        g.type = std::max(g.type, classify_pair(g.squares[i], g.squares[j]));
    report.maze_type = std::max(report.maze_type, g.type);
  }

  // Conglomerates over genuinely aliased squares (pseudo-aliasing excluded).
  std::map<Cell, int> group_of;
  for (std::size_t gi = 0; gi < report.groups.size(); ++gi)
    if (report.groups[gi].type > AliasingType::PseudoAliasing)
      for (const auto& sq : report.groups[gi].squares) group_of[sq.cell] = static_cast<int>(gi);
  std::map<Cell, int> component;
  std::vector<std::vector<Cell>> members;
  for (const auto& [cell, gi] : group_of) {
    if (component.count(cell)) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::deque<Cell> queue{cell};
    component[cell] = id;
    while (!queue.empty()) {
      const Cell p = queue.front();
      queue.pop_front();
      members[static_cast<std::size_t>(id)].push_back(p);
      for (int d = 0; d < 8; ++d) {
        const Cell q = maze.neighbor(p, d);
        if (group_of.count(q) && !component.count(q)) {
          component[q] = id;
          queue.push_back(q);
        }
      }
    }
  }
  std::vector<int> conglomerate_id(members.size(), -1);
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < 2) continue;
    conglomerate_id[c] = static_cast<int>(report.conglomerates.size());
    std::vector<int> groups;
    for (const Cell& p : members[c]) groups.push_back(group_of[p]);
    std::sort(groups.begin(), groups.end());
    report.conglomerates.push_back(groups);
  }
  for (auto& g : report.groups)
    for (auto& sq : g.squares) {
      auto it = component.find(sq.cell);
      if (it != component.end() && conglomerate_id[static_cast<std::size_t>(it->second)] >= 0) {
        sq.in_conglomerate = true;
        if (g.component < 0) g.component = conglomerate_id[static_cast<std::size_t>(it->second)];
      }
    }
  for (std::size_t a = 0; a < report.conglomerates.size(); ++a)
    for (std::size_t b = a + 1; b < report.conglomerates.size(); ++b)
      if (report.conglomerates[a] == report.conglomerates[b])
        report.clones.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return report;
}

}  // namespace xcsmd

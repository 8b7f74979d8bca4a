#pragma once

#include <string>
#include <vector>

namespace safeoc {

enum class Cell { Wall, Normal, Frozen, Goal };

char cell_to_char(Cell c);
Cell cell_from_char(char ch);

// Rectangular gridworld map. Holds exactly one goal cell; the outer border is
// all wall and every non-wall cell is reachable from every other one by
// 4-neighborhood moves (validated on parse).
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major
  int goal_index = -1;

  int index(int row, int col) const { return row * width + col; }
  int row_of(int index) const { return index / width; }
  int col_of(int index) const { return index % width; }
  Cell at(int row, int col) const { return cells[index(row, col)]; }
  Cell at_index(int index) const { return cells[index]; }

  bool operator==(const GridMap&) const = default;
};

// Parses the ASCII map format: one row per line, '#'=wall, '.'=normal,
// 'F'=frozen, 'G'=goal. Lines must all have equal length. Throws
// std::invalid_argument on malformed input or violated map invariants.
GridMap parse_grid_map(const std::string& text);

// Loads and parses a map file; IO failures name the path.
GridMap load_grid_map(const std::string& path);

// Renders back to the ASCII format, one row per line, trailing newline.
// parse_grid_map(render_grid_map(m)) == m for any valid map.
std::string render_grid_map(const GridMap& map);

// The built-in 13x13 four-rooms layout: 104 reachable cells, four hallways,
// goal in the lower-east room, and a frozen cluster on the route through the
// upper hallway so a frozen-free path to the goal always exists.
const std::string& default_four_rooms_layout();

}  // namespace safeoc

#include "safeoc/grid_map.hpp"

#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace safeoc {

char cell_to_char(Cell c) {
  switch (c) {
    case Cell::Wall:
      return '#';
    case Cell::Normal:
      return '.';
    case Cell::Frozen:
      return 'F';
    case Cell::Goal:
      return 'G';
  }
  throw std::logic_error("cell_to_char: invalid cell");
}

Cell cell_from_char(char ch) {
  switch (ch) {
    case '#':
      return Cell::Wall;
    case '.':
      return Cell::Normal;
    case 'F':
      return Cell::Frozen;
    case 'G':
      return Cell::Goal;
    default:
      throw std::invalid_argument(std::string("map: invalid cell character '") +
                                  ch + "'");
  }
}

namespace {

void validate(const GridMap& map) {
  if (map.width < 3 || map.height < 3) {
    throw std::invalid_argument("map: must be at least 3x3");
  }

  int goals = 0;
  for (Cell c : map.cells) {
    if (c == Cell::Goal) ++goals;
  }
  if (goals != 1) {
    throw std::invalid_argument("map: expected exactly one goal cell, found " +
                                std::to_string(goals));
  }

  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      const bool border =
          r == 0 || c == 0 || r == map.height - 1 || c == map.width - 1;
      if (border && map.at(r, c) != Cell::Wall) {
        throw std::invalid_argument("map: outer border must be all wall");
      }
    }
  }

  // Every non-wall cell must be reachable from the goal by 4-neighborhood
  // moves.
  std::vector<char> seen(map.cells.size(), 0);
  std::queue<int> frontier;
  frontier.push(map.goal_index);
  seen[map.goal_index] = 1;
  int reached = 0;
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop();
    ++reached;
    const int r = map.row_of(idx);
    const int c = map.col_of(idx);
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const int nr = r + dr[k];
      const int nc = c + dc[k];
      if (nr < 0 || nr >= map.height || nc < 0 || nc >= map.width) continue;
      const int nidx = map.index(nr, nc);
      if (!seen[nidx] && map.cells[nidx] != Cell::Wall) {
        seen[nidx] = 1;
        frontier.push(nidx);
      }
    }
  }
  int open_cells = 0;
  for (Cell c : map.cells) {
    if (c != Cell::Wall) ++open_cells;
  }
  if (reached != open_cells) {
    throw std::invalid_argument(
        "map: all non-wall cells must be mutually reachable");
  }
}

}  // namespace

GridMap parse_grid_map(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw std::invalid_argument("map: empty input");
  }

  GridMap map;
  map.height = static_cast<int>(lines.size());
  map.width = static_cast<int>(lines.front().size());
  map.cells.reserve(static_cast<std::size_t>(map.width) * map.height);
  for (const std::string& row : lines) {
    if (static_cast<int>(row.size()) != map.width) {
      throw std::invalid_argument("map: rows must all have equal length");
    }
    for (char ch : row) {
      map.cells.push_back(cell_from_char(ch));
    }
  }
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    if (map.cells[i] == Cell::Goal) map.goal_index = static_cast<int>(i);
  }
  validate(map);
  return map;
}

GridMap load_grid_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open map file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid_map(buf.str());
}

std::string render_grid_map(const GridMap& map) {
  std::string out;
  out.reserve(static_cast<std::size_t>(map.height) * (map.width + 1));
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      out.push_back(cell_to_char(map.at(r, c)));
    }
    out.push_back('\n');
  }
  return out;
}

const std::string& default_four_rooms_layout() {
  static const std::string layout =
      "#############\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "#......FF...#\n"
      "#.....#.FF..#\n"
      "#.....#.....#\n"
      "##.####.....#\n"
      "#.....###.###\n"
      "#.....#.....#\n"
      "#.....#..G..#\n"
      "#...........#\n"
      "#.....#.....#\n"
      "#############\n";
  return layout;
}

}  // namespace safeoc

#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "xcsmd/error.hpp"
#include "xcsmd/maze.hpp"

namespace xcsmd {

// A bundled benchmark maze. The grids mirror mazes/*.txt; a test keeps the
// two copies in sync.
struct CorpusMaze {
  std::string_view name;
  std::string_view title;
  std::string_view text;
  AliasingType type;
  double published_optimum;
  int decimals;  // precision the optimum is usually quoted at
  int population;
  int baseline_max_steps;  // step cap for the memoryless baseline
  double bound;            // XCSMD final-phase mean must not exceed this
  double baseline_bound;   // > 0 only where the baseline is expected to cope
};

inline const std::array<CorpusMaze, 9>& corpus() {
  static const std::array<CorpusMaze, 9> mazes{{
      {"woods1", "Woods1",
       ".....\n"
       ".TTF.\n"
       ".TTT.\n"
       ".TTT.\n"
       ".....\n",
       AliasingType::NonAliasing, 1.6875, 4, 800, 100, 1.85, 1.80},
      {"miyazakiA", "MiyazakiA",
       "TT..T..TT\n"
       "T.TT.TT.T\n"
       "TTTT.TTTT\n"
       "TT.TFT.TT\n"
       "TTT.T.TTT\n"
       "TT.T.T.TT\n"
       "TTTTTTTTT\n"
       "TT.TTT.TT\n"
       "TTT...TTT\n",
       AliasingType::TypeI, 3.05, 2, 2400, 100, 3.25, 0.0},
      {"littman57", "Littman57",
       "TTTTTTTTTTTTT\n"
       "T...........T\n"
       "TTT.T.T.TFTTT\n"
       "TTTTTTTTTTTTT\n",
       AliasingType::TypeI, 3.71, 2, 1600, 100, 4.20, 0.0},
      {"maze7", "Maze7",
       "TTTTTTTTT\n"
       "TT..T...T\n"
       "T.TT.TT.T\n"
       "T.TTT.TTT\n"
       "T..TFTTTT\n"
       "TTTTTTTTT\n",
       AliasingType::TypeII, 4.33, 2, 1600, 20, 4.55, 0.0},
      {"mazeF4", "MazeF4",
       "TTTTTTT\n"
       "TTTT.TT\n"
       "TF..T.T\n"
       "TTTTT.T\n"
       "TT...TT\n"
       "TTTTTTT\n"
       "TTTTTTT\n",
       AliasingType::TypeII, 4.50, 2, 1600, 20, 4.80, 0.0},
      {"woods101", "Woods101",
       "TTTTTTT\n"
       "T.T.T.T\n"
       "TT.T.TT\n"
       "TT.T.TT\n"
       "T.T.T.T\n"
       "TTTFTTT\n",
       AliasingType::TypeIII, 2.90, 2, 800, 20, 3.15, 0.0},
      {"woods101half", "Woods101.5",
       ".T...T.\n"
       "TTTTTTT\n"
       ".T...T.\n"
       ".TT.TT.\n"
       ".T...T.\n"
       "T.TTT.T\n"
       ".T.F.T.\n"
       ".T.T.T.\n"
       "T.TTT.T\n",
       AliasingType::TypeIII, 3.10, 2, 2400, 20, 3.35, 0.0},
      {"woods102", "Woods102",
       "TTT.TTTTT.TTT\n"
       "T.TTTTTTTTT.T\n"
       "T.T..T.T..T.T\n"
       ".T.T.FTF.T.T.\n"
       "TT.TT...TT.TT\n"
       "T.T.TTTTT.T.T\n",
       AliasingType::TypeIII, 3.308, 3, 2800, 20, 3.55, 0.0},
      {"maze10", "Maze10",
       "TTTTTTTTTTTTT\n"
       "T....TT.FTTTT\n"
       "TTT.TT..TTTTT\n"
       "TT.T..TT...TT\n"
       "T...TTT.TT..T\n"
       "TTT.TT.T..TTT\n"
       "T...TTT.TT..T\n"
       "TTTTT......TT\n"
       "TTTTTTTTTTTTT\n",
       AliasingType::TypeIII, 5.11, 2, 2800, 20, 6.10, 0.0},
  }};
  return mazes;
}

inline const CorpusMaze* find_corpus_maze(std::string_view name) {
  for (const auto& m : corpus())
    if (m.name == name) return &m;
  return nullptr;
}

inline Maze load_corpus_maze(const CorpusMaze& m) { return Maze::parse(m.text, std::string(m.name)); }

inline Maze load_maze_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read maze file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return Maze::parse(text.str(), path.stem().string());
}

// A bundled name wins over a file of the same name in the working directory.
inline Maze resolve_maze(const std::string& name_or_path) {
  if (const CorpusMaze* m = find_corpus_maze(name_or_path)) return load_corpus_maze(*m);
  return load_maze_file(name_or_path);
}

}  // namespace xcsmd

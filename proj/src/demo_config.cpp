#include "mergekit/config.hpp"

namespace mk {

std::string demo_config_text() {
    return R"JSON(
{
  "lexicon": [
    "yellow:A", "flowers:N", "bloom:V", "early:P",
    "france:N", "is:V", "hexagonal:A", "republic:N",
    "man:N", "bites:V", "dog:N", "apple:N",
    "light:A", "blue:N", "green:N",
    "alpha:A", "beta:N", "gamma:V", "delta:N"
  ],
  "vectors": {
    "yellow":    [0.9, 0.2, 0.1],
    "flowers":   [0.1, 0.95, 0.2],
    "bloom":     [0.2, 0.3, 0.9],
    "early":     [0.5, 0.5, 0.5],
    "france":    [0.8, 0.4, 0.1],
    "is":        [0.1, 0.2, 0.9],
    "hexagonal": [0.7, 0.1, 0.4],
    "republic":  [0.3, 0.8, 0.2],
    "man":       [0.9, 0.1, 0.3],
    "bites":     [0.2, 0.2, 0.85],
    "dog":       [0.85, 0.3, 0.2],
    "apple":     [0.2, 0.9, 0.3],
    "light":     [1.0, 0.0, 0.0],
    "blue":      [0.9, 0.3, 0.0],
    "green":     [0.9, -0.3, 0.0],
    "alpha":     [0.4, 0.6, 0.2],
    "beta":      [0.7, 0.3, 0.1],
    "gamma":     [0.2, 0.4, 0.8],
    "delta":     [0.6, 0.1, 0.6]
  },
  "proximity": {
    "clamp_eps": 0.001,
    "tables": {
      "generic": [
        ["bites", "dog", 0.9],
        ["bites", "man", 0.6],
        ["man", "{bites dog}", 0.8],
        ["dog", "{bites man}", 0.3]
      ]
    }
  },
  "agreement": [],
  "heads": {
    "precedence": ["V", "N", "A", "P"],
    "pairs": []
  },
  "probe": [1.0, 0.5, 0.25],
  "truth_table": {
    "hexagonal": 1,
    "republic": 1,
    "{france {is republic}}": 1,
    "{france {hexagonal is}}": 1
  },
  "tolerance": 1e-9,
  "threshold_lambda": 0.5
}
)JSON";
}

} // namespace mk

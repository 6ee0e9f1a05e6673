// Timed-word JSON: [{"labels": ["rl", "dir"], "duration": 2.0}, ...]
#pragma once

#include <string>

#include "mvplan/labels.hpp"

namespace mvp {

TimedWord load_timed_word_text(const std::string& json_text);
TimedWord load_timed_word_file(const std::string& path);
std::string timed_word_to_json(const TimedWord& w);

}  // namespace mvp

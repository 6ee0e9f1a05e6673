#include "mvplan/word_io.hpp"

#include <fstream>
#include <sstream>

#include "mvplan/json_util.hpp"

namespace mvp {

TimedWord load_timed_word_text(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(std::string("word: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw std::runtime_error("word: expected a top-level array of letters");
    const Json& letters = j;

    TimedWord w;
    for (size_t i = 0; i < letters.size(); ++i) {
        const Json& lj = letters[i];
        std::string ctx = "word[" + std::to_string(i) + "]";
        check_keys(lj, {"labels", "duration"}, ctx.c_str());
        const Json& labels = require_key(lj, "labels", ctx.c_str());
        if (!labels.is_array()) throw std::runtime_error(ctx + ".labels: expected an array");
        TimedLetter letter;
        for (const Json& name : labels) {
            if (!name.is_string()) {
                throw std::runtime_error(ctx + ".labels: expected proposition names");
            }
            auto p = prop_from_name(name.get<std::string>());
            if (!p) {
                throw std::runtime_error(ctx + ".labels: unknown proposition \"" +
                                         name.get<std::string>() + "\"");
            }
            letter.labels.set(*p);
        }
        letter.duration = get_double_in(lj, "duration", ctx.c_str());
        if (letter.duration < 0) throw std::runtime_error(ctx + ".duration: must be >= 0");
        w.push_back(letter);
    }
    return w;
}

TimedWord load_timed_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("word: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_timed_word_text(ss.str());
}

std::string timed_word_to_json(const TimedWord& w) {
    Json letters = Json::array();
    for (const TimedLetter& l : w) {
        Json names = Json::array();
        for (int i = 0; i < kNumProps; ++i) {
            if (l.labels.has(Prop(i))) names.push_back(std::string(kPropNames[size_t(i)]));
        }
        letters.push_back(Json{{"labels", names}, {"duration", l.duration}});
    }
    return letters.dump(2);
}

}  // namespace mvp

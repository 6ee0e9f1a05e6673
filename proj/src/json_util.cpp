#include "mvplan/json_util.hpp"

namespace mvp {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    if (!j.is_object()) {
        throw std::runtime_error(std::string(ctx) + ": expected an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::runtime_error(std::string(ctx) + ": unknown key \"" + it.key() + "\"");
        }
    }
}

const Json& require_key(const Json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw std::runtime_error(std::string(ctx) + ": missing key \"" + key + "\"");
    }
    return *it;
}

double get_double(const Json& j, const char* ctx) {
    if (!j.is_number()) {
        throw std::runtime_error(std::string(ctx) + ": expected a number");
    }
    return j.get<double>();
}

double get_double_in(const Json& obj, const char* key, const char* ctx) {
    return get_double(require_key(obj, key, ctx), (std::string(ctx) + "." + key).c_str());
}

std::string get_string_in(const Json& obj, const char* key, const char* ctx) {
    const Json& v = require_key(obj, key, ctx);
    if (!v.is_string()) {
        throw std::runtime_error(std::string(ctx) + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

}  // namespace mvp

// Small helpers for strict JSON loading (closed schemas, typed getters).
#pragma once

#include <json.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace mvp {

using Json = nlohmann::json;

// Rejects any key not in `allowed`; `ctx` names the object in messages.
void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* ctx);

const Json& require_key(const Json& j, const char* key, const char* ctx);

double get_double(const Json& j, const char* ctx);
double get_double_in(const Json& obj, const char* key, const char* ctx);
std::string get_string_in(const Json& obj, const char* key, const char* ctx);

}  // namespace mvp

// Internal JSON helpers: strict key checking and defaulted field reads.

#ifndef AUTOCOMB_JSON_UTIL_HPP
#define AUTOCOMB_JSON_UTIL_HPP

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "autocomb/errors.hpp"

namespace autocomb {

using json = nlohmann::json;

inline void check_keys(const json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw config_error(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw config_error("unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("bad value for \"") + key + "\"");
    }
}

template <typename T>
T get_required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key))
        throw config_error("missing required key \"" + std::string(key) +
                           "\" in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("bad value for \"") + key + "\" in " +
                           where);
    }
}

} // namespace autocomb

#endif

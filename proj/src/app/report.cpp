#include "debtcrit/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace debtcrit::app {

namespace {

void write_number(std::string& out, const Json& v) {
    if (v.is_number_integer()) {
        out += v.dump();
    } else {
        const double x = v.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
    }
}

void write_scalar(std::string& out, const Json& v) {
    if (v.is_number()) {
        write_number(out, v);
    } else {
        out += v.dump();
    }
}

void write_json(std::string& out, const Json& v, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        // nlohmann::json keeps object members in a std::map, so iteration is sorted.
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            out += Json(it.key()).dump();
            out += ": ";
            write_json(out, it.value(), depth + 1);
        }
        out += "\n" + close_pad + "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            write_json(out, v[i], depth + 1);
        }
        out += "\n" + close_pad + "]";
    } else {
        write_scalar(out, v);
    }
}

void write_text(std::string& out, const Json& v, const std::string& path) {
    if (v.is_object() && !v.empty()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            write_text(out, it.value(), path.empty() ? it.key() : path + "." + it.key());
        }
    } else if (v.is_array() && !v.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            write_text(out, v[i], path + "[" + std::to_string(i) + "]");
        }
    } else {
        out += path;
        out += " = ";
        if (v.is_string()) {
            out += v.get<std::string>();
        } else if (v.is_object()) {
            out += "{}";
        } else if (v.is_array()) {
            out += "[]";
        } else {
            write_scalar(out, v);
        }
        out += "\n";
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string to_canonical_json(const Json& value) {
    std::string out;
    write_json(out, value, 0);
    out += "\n";
    return out;
}

std::string to_text(const Json& value) {
    std::string out;
    write_text(out, value, "");
    return out;
}

Json to_json(const Warning& w) {
    return Json{{"code", std::string(to_string(w.code))}, {"module", w.module}, {"message", w.message}};
}

Json to_json(const Warnings& ws) {
    Json arr = Json::array();
    for (const auto& w : ws) arr.push_back(to_json(w));
    return arr;
}

Json empty_report() {
    return Json{{"input", nullptr},  {"normalized", nullptr}, {"fit", nullptr},
                {"critical", nullptr}, {"verdict", nullptr},    {"warnings", Json::array()}};
}

}  // namespace debtcrit::app
